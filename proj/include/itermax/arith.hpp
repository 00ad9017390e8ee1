#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "itermax/errors.hpp"

namespace itermax {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// ---------------------------------------------------------------------
// Factorization: n = prod p^e with primes strictly increasing.
// The empty list is n = 1.
// ---------------------------------------------------------------------
struct FactorEntry {
    u64 prime;
    u32 exponent;
    friend bool operator==(const FactorEntry&, const FactorEntry&) = default;
};

struct Factorization {
    std::vector<FactorEntry> entries;

    // Reconstructed product. Throws overflow_error past 64 bits.
    u64 value() const;
    std::string to_string() const; // "2^3*3^2*5", "1" for the empty product

    friend bool operator==(const Factorization&, const Factorization&) = default;
};

// ---------------------------------------------------------------------
// Smallest-prime-factor table for [2, limit].
// ---------------------------------------------------------------------
struct SpfTable {
    u64 limit = 0;
    std::vector<u32> spf; // spf[n] for 0 <= n <= limit; entries < 2 unused

    u64 smallest_factor(u64 n) const { return spf[n]; }
};

inline constexpr u64 kDefaultSpfCap = 100'000'000;

SpfTable sieve_spf(u64 limit, u64 cap = kDefaultSpfCap);

// Deterministic 64-bit primality (Miller-Rabin over a fixed base set that
// is exact for the whole 64-bit range).
bool is_prime(u64 n);

// Trial division + deterministic primality + Brent rho for the rare hard
// cofactor. Exact for all 64-bit n >= 1.
Factorization factorize(u64 n);

// Table lookups while n <= table.limit, general path for the cofactor.
Factorization factorize(u64 n, const SpfTable& table);

// Kronecker symbol (delta / n), completely multiplicative in n.
int kronecker(i64 delta, u64 n);

struct OmegaCounts {
    u64 big_omega;   // sum of exponents
    u64 small_omega; // number of distinct primes
};

OmegaCounts omega_counts(const Factorization& f);

// ---------------------------------------------------------------------
// Helpers shared across modules.
// ---------------------------------------------------------------------
u64 mul_checked(u64 a, u64 b); // overflow_error on wrap
u64 add_checked(u64 a, u64 b);
u64 isqrt(u64 n);

// Visit primes in [2, bound] ascending; return false from the callback to
// stop early. Segmented, so memory stays O(sqrt(bound)).
void for_primes_up_to(u64 bound, const std::function<bool(u64)>& visit);

} // namespace itermax
