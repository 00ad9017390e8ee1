#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace itermax {

// Minimal unsigned bignum: enough to compare products of prime powers
// exactly and print them in decimal. Little-endian 64-bit limbs, no
// leading zero limbs ({} encodes 0).
struct BigUint {
    std::vector<std::uint64_t> limbs;

    static BigUint from_u64(std::uint64_t v) {
        BigUint b;
        if (v) b.limbs.push_back(v);
        return b;
    }

    bool is_zero() const { return limbs.empty(); }

    void mul_u64(std::uint64_t m) {
        if (m == 0) { limbs.clear(); return; }
        unsigned __int128 carry = 0;
        for (auto& limb : limbs) {
            unsigned __int128 prod = (unsigned __int128)limb * m + carry;
            limb = (std::uint64_t)prod;
            carry = prod >> 64;
        }
        if (carry) limbs.push_back((std::uint64_t)carry);
    }

    void mul_pow_u64(std::uint64_t base, std::uint64_t exp) {
        for (std::uint64_t i = 0; i < exp; ++i) mul_u64(base);
    }

    // -1, 0, +1 as a < b, a == b, a > b
    static int compare(const BigUint& a, const BigUint& b) {
        if (a.limbs.size() != b.limbs.size())
            return a.limbs.size() < b.limbs.size() ? -1 : 1;
        for (std::size_t i = a.limbs.size(); i-- > 0;) {
            if (a.limbs[i] != b.limbs[i])
                return a.limbs[i] < b.limbs[i] ? -1 : 1;
        }
        return 0;
    }

    // Divide in place by d, returning the remainder. d > 0.
    std::uint64_t divmod_u64(std::uint64_t d) {
        unsigned __int128 rem = 0;
        for (std::size_t i = limbs.size(); i-- > 0;) {
            unsigned __int128 cur = (rem << 64) | limbs[i];
            limbs[i] = (std::uint64_t)(cur / d);
            rem = cur % d;
        }
        while (!limbs.empty() && limbs.back() == 0) limbs.pop_back();
        return (std::uint64_t)rem;
    }

    std::string to_decimal() const {
        if (is_zero()) return "0";
        BigUint tmp = *this;
        std::string out;
        while (!tmp.is_zero()) {
            std::uint64_t chunk = tmp.divmod_u64(10'000'000'000'000'000'000ULL);
            std::string part = std::to_string(chunk);
            if (!tmp.is_zero())
                part.insert(0, 19 - part.size(), '0');
            out.insert(0, part);
        }
        return out;
    }
};

} // namespace itermax
