#include "itermax/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace itermax {

u64 mul_checked(u64 a, u64 b) {
    u128 p = (u128)a * b;
    if (p > (u128)UINT64_MAX)
        throw overflow_error("64-bit overflow in product " + std::to_string(a) +
                             " * " + std::to_string(b));
    return (u64)p;
}

u64 add_checked(u64 a, u64 b) {
    if (a > UINT64_MAX - b)
        throw overflow_error("64-bit overflow in sum " + std::to_string(a) + " + " +
                             std::to_string(b));
    return a + b;
}

u64 isqrt(u64 n) {
    if (n == 0) return 0;
    u64 r = (u64)std::sqrt((double)n);
    if (r > 4294967295ULL) r = 4294967295ULL; // floor sqrt of 2^64-1
    while (r * r > n) --r;
    while (r < 4294967295ULL && (r + 1) * (r + 1) <= n) ++r;
    return r;
}

u64 Factorization::value() const {
    u64 v = 1;
    for (const auto& e : entries)
        for (u32 i = 0; i < e.exponent; ++i) v = mul_checked(v, e.prime);
    return v;
}

std::string Factorization::to_string() const {
    if (entries.empty()) return "1";
    std::string s;
    for (const auto& e : entries) {
        if (!s.empty()) s += '*';
        s += std::to_string(e.prime);
        if (e.exponent > 1) {
            s += '^';
            s += std::to_string(e.exponent);
        }
    }
    return s;
}

// ---------------------------------------------------------------------
// Sieves
// ---------------------------------------------------------------------

SpfTable sieve_spf(u64 limit, u64 cap) {
    if (limit < 2)
        throw capacity_error("sieve_spf: limit must be >= 2");
    if (limit > cap)
        throw capacity_error("sieve_spf: limit " + std::to_string(limit) +
                             " exceeds cap " + std::to_string(cap));
    SpfTable t;
    t.limit = limit;
    t.spf.assign(limit + 1, 0);
    for (u64 i = 2; i <= limit; ++i) {
        if (t.spf[i] == 0) { // i prime
            for (u64 j = i; j <= limit; j += i)
                if (t.spf[j] == 0) t.spf[j] = (u32)i;
        }
    }
    return t;
}

void for_primes_up_to(u64 bound, const std::function<bool(u64)>& visit) {
    if (bound < 2) return;
    // base primes up to sqrt(bound)
    u64 root = isqrt(bound);
    std::vector<u64> base;
    {
        std::vector<bool> comp(root + 1, false);
        for (u64 i = 2; i <= root; ++i) {
            if (!comp[i]) {
                base.push_back(i);
                for (u64 j = i * i; j <= root; j += i) comp[j] = true;
            }
        }
    }
    const u64 seg = 1u << 20;
    std::vector<bool> comp;
    for (u64 lo = 2; lo <= bound; lo += seg) {
        u64 hi = std::min(bound, lo + seg - 1);
        comp.assign(hi - lo + 1, false);
        for (u64 p : base) {
            if (p * p > hi) break;
            u64 start = std::max(p * p, ((lo + p - 1) / p) * p);
            for (u64 j = start; j <= hi; j += p) comp[j - lo] = true;
        }
        for (u64 n = lo; n <= hi; ++n)
            if (!comp[n - lo] && !visit(n)) return;
    }
}

// ---------------------------------------------------------------------
// Deterministic primality + factoring
// ---------------------------------------------------------------------

static u64 mulmod(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

static u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                  29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // This base set decides primality exactly for every 64-bit integer.
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                  29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

static u64 brent_rho(u64 n) {
    // n composite, odd, no factor <= 101.
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        u64 ys = y, q = 1;
        const u64 m = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            for (u64 k = 0; k < r && d == 1; k += m) {
                ys = y;
                u64 lim = std::min(m, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                d = std::gcd(q, n);
            }
            r <<= 1;
        }
        if (d == n) {
            d = 1;
            do {
                ys = f(ys);
                d = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (d == 1);
        }
        if (d != n) return d;
    }
}

static void factor_rec(u64 n, std::vector<u64>& primes) {
    if (n == 1) return;
    if (is_prime(n)) { primes.push_back(n); return; }
    u64 d = brent_rho(n);
    factor_rec(d, primes);
    factor_rec(n / d, primes);
}

static void push_entry(Factorization& f, u64 p, u32 e) {
    f.entries.push_back({p, e});
}

Factorization factorize(u64 n) {
    if (n == 0) throw domain_error("factorize: n must be >= 1");
    Factorization f;
    for (u64 p : {2ULL, 3ULL, 5ULL}) {
        if (n % p == 0) {
            u32 e = 0;
            while (n % p == 0) { n /= p; ++e; }
            push_entry(f, p, e);
        }
    }
    // wheel over 6k +- 1 up to a fixed trial bound
    const u64 trial_bound = 100'000;
    for (u64 p = 7; p <= trial_bound && p * p <= n; p += 6) {
        for (u64 q : {p, p + 4}) {
            if (n % q == 0) {
                u32 e = 0;
                while (n % q == 0) { n /= q; ++e; }
                push_entry(f, q, e);
            }
        }
    }
    if (n > 1) {
        if (is_prime(n)) {
            push_entry(f, n, 1);
        } else {
            std::vector<u64> primes;
            factor_rec(n, primes);
            std::sort(primes.begin(), primes.end());
            for (std::size_t i = 0; i < primes.size();) {
                std::size_t j = i;
                while (j < primes.size() && primes[j] == primes[i]) ++j;
                push_entry(f, primes[i], (u32)(j - i));
                i = j;
            }
        }
    }
    std::sort(f.entries.begin(), f.entries.end(),
              [](const FactorEntry& a, const FactorEntry& b) { return a.prime < b.prime; });
    return f;
}

Factorization factorize(u64 n, const SpfTable& table) {
    if (n == 0) throw domain_error("factorize: n must be >= 1");
    Factorization f;
    while (n > 1 && n <= table.limit) {
        u64 p = table.spf[n];
        u32 e = 0;
        while (n % p == 0) { n /= p; ++e; }
        if (!f.entries.empty() && f.entries.back().prime == p)
            f.entries.back().exponent += e;
        else
            push_entry(f, p, e);
    }
    if (n > 1) {
        Factorization rest = factorize(n);
        for (const auto& e : rest.entries) f.entries.push_back(e);
    }
    std::sort(f.entries.begin(), f.entries.end(),
              [](const FactorEntry& a, const FactorEntry& b) { return a.prime < b.prime; });
    // merge duplicates straddling the table boundary
    Factorization merged;
    for (const auto& e : f.entries) {
        if (!merged.entries.empty() && merged.entries.back().prime == e.prime)
            merged.entries.back().exponent += e.exponent;
        else
            merged.entries.push_back(e);
    }
    return merged;
}

// ---------------------------------------------------------------------
// Kronecker symbol
// ---------------------------------------------------------------------

static int jacobi_odd(u64 a, u64 n) {
    // n odd, n >= 1
    int t = 1;
    a %= n;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            u64 m = n & 7;
            if (m == 3 || m == 5) t = -t;
        }
        std::swap(a, n);
        if ((a & 3) == 3 && (n & 3) == 3) t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

int kronecker(i64 delta, u64 n) {
    if (n == 0) return (delta == 1 || delta == -1) ? 1 : 0;
    int result = 1;
    if ((n & 1) == 0) {
        if ((delta & 1) == 0) return 0;
        i64 m = ((delta % 8) + 8) % 8;
        int s2 = (m == 1 || m == 7) ? 1 : -1;
        while ((n & 1) == 0) {
            n >>= 1;
            result *= s2;
        }
    }
    // reduce delta into [0, n): the symbol is periodic in the top argument
    i64 r = delta % (i64)n;
    if (r < 0) r += (i64)n;
    return result * jacobi_odd((u64)r, n);
}

OmegaCounts omega_counts(const Factorization& f) {
    OmegaCounts c{0, 0};
    for (const auto& e : f.entries) {
        c.big_omega += e.exponent;
        c.small_omega += 1;
    }
    return c;
}

} // namespace itermax
