#include "itermax/extremal.hpp"

#include <algorithm>
#include <cfloat>
#include <mutex>
#include <cmath>
#include <map>

#include "itermax/bigint.hpp"
#include "itermax/parallel.hpp"

namespace itermax {

// ---------------------------------------------------------------------
// Exact comparison of prime-power products by log sums with an error
// bound, falling back to big-integer products when undecided.
// ---------------------------------------------------------------------
namespace {

struct Candidate {
    std::vector<u64> primes;
    std::vector<u64> exps;
};

long double log_sum(const Candidate& c, long double& err) {
    long double s = 0.0L, e = 0.0L;
    for (std::size_t i = 0; i < c.primes.size(); ++i) {
        long double term = (long double)c.exps[i] * logl((long double)c.primes[i]);
        s += term;
        e += term * 4 * LDBL_EPSILON;
    }
    err = e + (long double)(c.primes.size() + 1) * s * LDBL_EPSILON;
    return s;
}

BigUint product_of(const Candidate& c) {
    BigUint b = BigUint::from_u64(1);
    for (std::size_t i = 0; i < c.primes.size(); ++i) b.mul_pow_u64(c.primes[i], c.exps[i]);
    return b;
}

// -1 / 0 / +1 as a < b / a == b / a > b.
int compare_products(const Candidate& a, const Candidate& b) {
    long double ea, eb;
    long double la = log_sum(a, ea);
    long double lb = log_sum(b, eb);
    if (la - lb > ea + eb) return 1;
    if (lb - la > ea + eb) return -1;
    return BigUint::compare(product_of(a), product_of(b));
}

} // namespace

// ---------------------------------------------------------------------
// scan_max
// ---------------------------------------------------------------------

MaxRecord scan_max(const MultiplicativeRule& rule, u64 x, unsigned threads, u64 cap) {
    if (x == 0) throw domain_error("scan_max: x must be >= 1");
    if (x > cap)
        throw capacity_error("scan_max: x exceeds scan cap " + std::to_string(cap));
    if (x == 1) return MaxRecord{1, 1, 0.0, {1}};

    SpfTable table = sieve_spf(x, cap); // the scan cap doubles as the sieve cap
    // cache the prime classes once; the per-n loop then never re-classifies
    std::vector<unsigned char> cls(x + 1, 0);
    for (u64 p = 2; p <= x; ++p)
        if (table.spf[p] == p) cls[p] = (unsigned char)rule.classify(p);
    const GSpec& g = rule.g();

    auto value_of = [&](u64 e, unsigned char c) -> u64 {
        switch ((PrimeClass)c) {
            case PrimeClass::in_q: return g(e);
            case PrimeClass::off_q_one: return 1;
            case PrimeClass::off_q_parity: return (e & 1) ? 0 : 1;
            case PrimeClass::off_q_zero: return 0;
        }
        return 1;
    };

    auto eval_spf = [&](u64 m) -> u64 {
        u64 v = 1;
        while (m > 1) {
            u64 p = table.spf[m];
            u64 e = 0;
            do {
                m /= p;
                ++e;
            } while (m % p == 0);
            u64 pv = value_of(e, cls[p]);
            if (pv == 0) return 0;
            v = mul_checked(v, pv);
        }
        return v;
    };

    struct ChunkMax {
        u64 max = 0;
        std::vector<u64> argmax;
    };

    auto chunk = [&](u64 lo, u64 hi) {
        ChunkMax best;
        for (u64 n = lo; n <= hi; ++n) {
            u64 inner = eval_spf(n);
            u64 outer;
            if (inner <= 1) {
                outer = 1; // f(0) = f(1) = 1
            } else if (inner <= x) {
                outer = eval_spf(inner);
            } else {
                outer = eval(rule, factorize(inner));
            }
            if (outer == 0) continue; // never the maximum: n = 1 yields 1
            if (outer > best.max) {
                best.max = outer;
                best.argmax.assign(1, n);
            } else if (outer == best.max) {
                best.argmax.push_back(n);
            }
        }
        return best;
    };

    auto parts = run_chunked<ChunkMax>(1, x, threads, 1u << 16, chunk);
    MaxRecord record;
    record.x = x;
    for (const auto& part : parts) record.max_value = std::max(record.max_value, part.max);
    for (const auto& part : parts)
        if (part.max == record.max_value)
            record.argmax.insert(record.argmax.end(), part.argmax.begin(), part.argmax.end());
    record.log_max = std::log((double)record.max_value);
    return record;
}

// ---------------------------------------------------------------------
// min_preimage
// ---------------------------------------------------------------------

namespace {

struct PartitionSearch {
    const MultiplicativeRule& rule;
    std::vector<u64> divisors;              // divisors of N, ascending, >= 2
    std::map<u64, std::optional<u64>> dag;  // divisor -> g_dagger
    std::vector<u64> parts;                 // current parts, non-increasing
    u64 budget;
    u64 steps = 0;
    u64 partitions = 0;
    u64 ties = 0;
    bool found = false;
    Candidate best;
    std::vector<u64> best_exps;

    void consider() {
        ++partitions;
        Candidate cand;
        cand.exps.reserve(parts.size());
        for (u64 d : parts) cand.exps.push_back(*dag.at(d)); // descending with parts
        cand.primes.reserve(parts.size());
        for (std::size_t i = 1; i <= parts.size(); ++i) cand.primes.push_back(rule.nth_q((u64)i));
        if (!found) {
            best = std::move(cand);
            best_exps = best.exps;
            found = true;
            return;
        }
        int cmp = compare_products(cand, best);
        if (cmp < 0 || (cmp == 0 && cand.exps < best.exps)) {
            if (cmp == 0) ++ties;
            best = std::move(cand);
            best_exps = best.exps;
        } else if (cmp == 0) {
            ++ties;
        }
    }

    void recurse(u64 remaining, u64 max_part) {
        if (++steps > budget)
            throw capacity_error("min_preimage: partition budget " + std::to_string(budget) +
                                 " exhausted");
        if (remaining == 1) {
            consider();
            return;
        }
        for (auto it = divisors.rbegin(); it != divisors.rend(); ++it) {
            u64 d = *it;
            if (d > max_part) continue;
            if (remaining % d != 0) continue;
            if (!dag.at(d).has_value()) continue;
            parts.push_back(d);
            recurse(remaining / d, d);
            parts.pop_back();
        }
    }
};

} // namespace

MinPreimage min_preimage(const MultiplicativeRule& rule, u64 target, u64 partition_budget) {
    if (target <= 1) throw domain_error("min_preimage: N must be > 1");
    Factorization nf = factorize(target);
    for (const auto& e : nf.entries)
        if (rule.classify(e.prime) != PrimeClass::in_q)
            throw domain_error("min_preimage: N = " + std::to_string(target) +
                               " has the prime factor " + std::to_string(e.prime) +
                               " outside Q");

    PartitionSearch search{rule, {}, {}, {}, partition_budget, 0, 0, 0, false, {}, {}};
    // all divisors >= 2 of N
    std::vector<u64> divs{1};
    for (const auto& e : nf.entries) {
        std::size_t count = divs.size();
        u64 pe = 1;
        for (u32 i = 1; i <= e.exponent; ++i) {
            pe *= e.prime;
            for (std::size_t k = 0; k < count; ++k) divs.push_back(divs[k] * pe);
        }
    }
    std::sort(divs.begin(), divs.end());
    for (u64 d : divs)
        if (d >= 2) {
            search.divisors.push_back(d);
            search.dag[d] = g_dagger(rule.g(), d);
        }

    search.recurse(target, target);
    if (!search.found)
        throw domain_error("min_preimage: N = " + std::to_string(target) +
                           " is not a product of values of g (no preimage exists)");

    MinPreimage result;
    result.target = target;
    result.exponents = search.best_exps;
    for (std::size_t i = 0; i < search.best.primes.size(); ++i)
        result.m.entries.push_back({search.best.primes[i], (u32)search.best.exps[i]});
    long double err;
    result.log_m = (double)log_sum(search.best, err);
    result.partitions_seen = search.partitions;
    result.ties = search.ties;
    return result;
}

// ---------------------------------------------------------------------
// check_preimage_table
// ---------------------------------------------------------------------

PreimageTableReport check_preimage_table(const MultiplicativeRule& rule,
                                         const std::vector<MinPreimage>& table,
                                         u64 k_min, u64 k_max) {
    PreimageTableReport report;
    const GSpec& g = rule.g();
    double c_star = c_star_for(g);

    for (const auto& entry : table) {
        // (1) exponents non-increasing
        for (std::size_t i = 1; i < entry.exponents.size(); ++i) {
            if (entry.exponents[i] > entry.exponents[i - 1]) {
                report.violations.push_back({"exponent-order", entry.target, 0,
                                             "exponent rises at position " + std::to_string(i)});
                break;
            }
        }
        // f(m_N) = N, evaluated on the factored form
        u64 value = eval(rule, entry.m);
        if (value != entry.target)
            report.violations.push_back({"value", entry.target, value,
                                         "f(m) = " + std::to_string(value)});
        // (3) omega bound
        u64 r = entry.exponents.size();
        if (r >= 1 && k_max >= k_min) {
            u64 q1 = rule.nth_q(1);
            long double log_next = logl((long double)rule.nth_q(r + 1));
            for (u64 k = k_min; k <= k_max; ++k) {
                long double sk = (long double)c_star * powl((long double)q1, (long double)k);
                for (std::size_t j = 0; j < r; ++j) {
                    long double lhs = sk * logl((long double)entry.m.entries[j].prime);
                    if (lhs <= log_next * (1 + 1e-12L)) continue; // condition not (clearly) met
                    u64 gv = g(entry.exponents[j]);
                    u64 omega = omega_counts(factorize(gv)).big_omega;
                    if (omega > k)
                        report.violations.push_back(
                            {"omega-bound", entry.target, k,
                             "g(nu_" + std::to_string(j + 1) + ") = " + std::to_string(gv) +
                                 " has Omega = " + std::to_string(omega)});
                }
            }
        }
    }

    // (2) divisor monotonicity across the table
    for (std::size_t i = 0; i < table.size(); ++i) {
        for (std::size_t j = 0; j < table.size(); ++j) {
            if (i == j) continue;
            if (table[j].target % table[i].target != 0) continue;
            Candidate small, large;
            for (const auto& e : table[i].m.entries) {
                small.primes.push_back(e.prime);
                small.exps.push_back(e.exponent);
            }
            for (const auto& e : table[j].m.entries) {
                large.primes.push_back(e.prime);
                large.exps.push_back(e.exponent);
            }
            if (compare_products(small, large) > 0)
                report.violations.push_back({"divisor-monotonicity", table[i].target,
                                             table[j].target,
                                             "m_{N'} > m_N for N' | N"});
        }
    }
    return report;
}

// ---------------------------------------------------------------------
// Series constant
// ---------------------------------------------------------------------

double cs_series_term(const GSpec& g, u64 j) {
    if (j == 0) throw domain_error("cs_series_term: j must be >= 1");
    u64 lo = g(j - 1), hi = g(j);
    long double t = log1pl((long double)(hi - lo) / (long double)lo);
    return (double)(t * t);
}

// Upper bound on sum_{j > J} log^2(g(j)/g(j-1)); domain_error if divergent.
static long double series_tail_bound(const GSpec& g, u64 J) {
    if (g.is_affine()) {
        // log(1 + alpha/(alpha(j-1)+1)) <= 1/(j-1+1/alpha), so the tail is
        // at most sum_{i>=J} (i + 1/alpha)^{-2} <= 1/(J - 1 + 1/alpha).
        long double inv_alpha = 1.0L / (long double)g.alpha();
        return 1.0L / ((long double)J - 1.0L + inv_alpha);
    }
    u64 k = g.table().size();
    if (g.extension() == GSpec::Extension::geometric) {
        if (g.extension_param() > 1)
            throw domain_error("cs_constant: geometric growth makes the series diverge");
        return 0.0L; // ratio 1: g is constant beyond the table (J >= table size here)
    }
    // affine extension: g(j) = last + s*(j-k) for j >= k, so for j > J >= k+1
    // the term is below (s/g(j-1))^2 = 1/(last/s + j-1-k)^2.
    long double last_over_s = (long double)g.table().back() / (long double)g.extension_param();
    long double base = (long double)J - (long double)k - 1.0L + last_over_s;
    if (base <= 0) base = 0.5L;
    return 1.0L / base;
}

static SeriesConstant cs_constant_uncached(const GSpec& g, double tol) {
    if (tol <= 0) throw domain_error("cs_constant: tol must be positive");
    if (!g.is_affine() && g.extension() == GSpec::Extension::geometric &&
        g.extension_param() > 1)
        throw domain_error("cs_constant: geometric growth makes the series diverge");

    const bool affine = g.is_affine();
    const long double alpha = affine ? (long double)g.alpha() : 0.0L;
    u64 min_terms = affine ? 8 : g.table().size() + 2;
    long double sum = 0.0L, comp = 0.0L; // Kahan
    u64 j = 0;
    for (;;) {
        ++j;
        long double t;
        if (affine) { // log(g(j)/g(j-1)) = log1p(alpha / (alpha*(j-1) + 1))
            t = log1pl(alpha / (alpha * (long double)(j - 1) + 1.0L));
        } else {
            u64 lo = g(j - 1), hi = g(j);
            t = log1pl((long double)(hi - lo) / (long double)lo);
        }
        long double term = t * t;
        long double y = term - comp;
        long double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        if (j < min_terms) continue;
        if ((j & 1023) != 0) continue;
        long double tail = series_tail_bound(g, j);
        long double fp_slack = sum * (long double)j * 1e-18L;
        long double lo_c = sqrtl(8.0L * sum);
        long double hi_c = sqrtl(8.0L * (sum + tail + fp_slack));
        if ((hi_c - lo_c) / 2.0L <= (long double)tol) {
            SeriesConstant out;
            out.value = (double)((lo_c + hi_c) / 2.0L);
            out.half_width = (double)((hi_c - lo_c) / 2.0L);
            out.terms_used = j;
            return out;
        }
        if (j > (u64)1 << 33)
            throw capacity_error("cs_constant: tolerance unreachable within term budget");
    }
}

SeriesConstant cs_constant(const GSpec& g, double tol) {
    static std::mutex cache_mutex;
    static std::map<std::pair<std::string, double>, SeriesConstant> cache;
    auto key = std::make_pair(g.describe(), tol);
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    SeriesConstant out = cs_constant_uncached(g, tol);
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(key, out);
    return out;
}

// ---------------------------------------------------------------------
// Cauchy-Schwarz bound
// ---------------------------------------------------------------------

CsBound cs_bound(const GSpec& g, std::span<const u64> nu, double c_value) {
    CsBound out;
    long double lhs = 0.0L, weighted = 0.0L;
    for (std::size_t j = 0; j < nu.size(); ++j) {
        if (nu[j] == 0) throw domain_error("cs_bound: exponents must be positive");
        lhs += logl((long double)g(nu[j]));
        weighted += (long double)(j + 1) * (long double)nu[j];
    }
    std::vector<u64> sorted(nu.begin(), nu.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<u64>());
    long double weighted_sorted = 0.0L;
    for (std::size_t j = 0; j < sorted.size(); ++j)
        weighted_sorted += (long double)(j + 1) * (long double)sorted[j];
    out.lhs = (double)lhs;
    out.rhs_as_given = (double)(0.5L * (long double)c_value * sqrtl(weighted));
    out.rhs_sorted = (double)(0.5L * (long double)c_value * sqrtl(weighted_sorted));
    return out;
}

CsBound cs_bound(const GSpec& g, std::span<const u64> nu) {
    return cs_bound(g, nu, cs_constant(g, 1e-7).value);
}

// ---------------------------------------------------------------------
// Sparse-support diagnostic
// ---------------------------------------------------------------------

SparseValueBound sparse_value_bound(const MultiplicativeRule& rule, u64 n, double eps) {
    if (n < 2) throw domain_error("sparse_value_bound: n must be >= 2");
    if (eps <= 0) throw domain_error("sparse_value_bound: eps must be positive");
    Factorization f = factorize(n);
    u64 s = omega_q(rule, f);
    if (s < 2)
        throw domain_error("sparse_value_bound: omega_Q(n) = " + std::to_string(s) +
                           " but the bound requires >= 2");
    SparseValueBound out;
    out.f_value = eval(rule, f);
    out.omega_q = s;
    double cf = c_f_for(rule.g());
    out.bound = std::pow((cf + eps) * std::log((double)n) /
                             ((double)s * std::log((double)s)),
                         (double)s);
    return out;
}

double c_star_for(const GSpec& g) {
    if (g.is_affine()) return 1.0; // (b-1)/a + b(a-1)/a = (ab-1)/a exactly
    return 1.0;                    // default; the audit reports the measured value
}

double c_f_for(const GSpec& g) {
    if (g.is_affine()) return (double)g.alpha() + 1.0; // a*nu + 1 <= (a+1)*nu for nu >= 1
    u64 upto = std::max<u64>(g.table().size(), 64);
    double best = 0.0;
    for (u64 nu = 1; nu <= upto; ++nu) {
        try {
            best = std::max(best, (double)g(nu) / (double)nu);
        } catch (const overflow_error&) {
            break; // fast-growing tail: the probe stops at the width limit
        }
    }
    return best;
}

double c_dagger_for(const GSpec& g) {
    if (!g.is_affine())
        throw domain_error("c_dagger_for: only defined in closed form for affine g");
    return 1.0 / (double)g.alpha();
}

// ---------------------------------------------------------------------
// Witness construction
// ---------------------------------------------------------------------

// nu_j >= i  <=>  j <= t*log(1 + 1/(i-1+1/alpha))/log(alpha+1)
//            <=>  (alpha*i+1)^t >= (alpha+1)^j * (alpha*(i-1)+1)^t,
// decided exactly on big integers.
static bool witness_level_reaches(u64 alpha, u64 t, u64 j, u64 i) {
    BigUint lhs = BigUint::from_u64(1);
    lhs.mul_pow_u64(alpha * i + 1, t);
    BigUint rhs = BigUint::from_u64(1);
    rhs.mul_pow_u64(alpha + 1, j);
    rhs.mul_pow_u64(alpha * (i - 1) + 1, t);
    return BigUint::compare(lhs, rhs) >= 0;
}

u64 witness_exponent(u64 alpha, u64 t, u64 j) {
    if (alpha == 0 || t == 0 || j == 0 || j > t)
        throw domain_error("witness_exponent: need alpha >= 1, 1 <= j <= t");
    long double a = (long double)alpha;
    long double guess =
        1.0L - 1.0L / a +
        1.0L / (powl(a + 1.0L, (long double)j / (long double)t) - 1.0L);
    u64 i = guess < 1.0L ? 1 : (u64)guess;
    while (witness_level_reaches(alpha, t, j, i + 1)) ++i;
    while (i > 1 && !witness_level_reaches(alpha, t, j, i)) --i;
    return i;
}

u64 witness_level_count(u64 alpha, u64 t, u64 i) {
    if (alpha == 0 || t == 0 || i == 0)
        throw domain_error("witness_level_count: need alpha, t, i >= 1");
    long double a = (long double)alpha;
    long double guess = (long double)t *
                        log1pl(1.0L / ((long double)i - 1.0L + 1.0L / a)) /
                        logl(a + 1.0L);
    u64 j = guess < 0.0L ? 0 : (u64)guess;
    if (j > t) j = t;
    while (j < t && witness_level_reaches(alpha, t, j + 1, i)) ++j;
    while (j > 0 && !witness_level_reaches(alpha, t, j, i)) --j;
    return j;
}

ExtremalWitness build_witness(const MultiplicativeRule& rule, u64 x, double c_e) {
    const GSpec& g = rule.g();
    if (!g.is_affine())
        throw domain_error("build_witness: requires affine g");
    if (c_e <= 0) throw domain_error("build_witness: c_e must be positive");
    if (x < 16)
        throw domain_error("build_witness: x must exceed e^e (x >= 16)");
    u64 alpha = g.alpha();
    double c_value = cs_constant(g, 1e-7).value;

    auto t_of = [&](u64 xx) -> i64 {
        double lx = std::log((double)xx);
        double l2 = std::log(lx);
        double l3 = std::log(l2);
        double eps = c_e * l3 / l2;
        double tv = (8.0 * std::log((double)g(1)) / c_value - eps) * std::sqrt(lx) / l2;
        return (i64)std::floor(tv);
    };

    i64 t_signed = t_of(x);
    if (t_signed < 1) {
        // report the least x that admits the construction at this c_e
        u64 lo = 16, hi = lo;
        while (hi < (u64(1) << 62) && t_of(hi) < 1) hi *= 2;
        std::string hint;
        if (t_of(hi) >= 1) {
            while (lo + 1 < hi) {
                u64 mid = lo + (hi - lo) / 2;
                if (t_of(mid) >= 1) hi = mid; else lo = mid;
            }
            hint = "; minimal admissible x is " + std::to_string(hi);
        } else {
            hint = "; no admissible x in the 64-bit range for this c_e";
        }
        throw domain_error("build_witness: t < 1 at x = " + std::to_string(x) + hint);
    }
    u64 t = (u64)t_signed;

    ExtremalWitness w;
    w.t = t;
    double lx = std::log((double)x);
    double l2 = std::log(lx);
    double l3 = std::log(l2);
    w.epsilon = c_e * l3 / l2;
    w.nu.resize(t);
    for (u64 j = 1; j <= t; ++j) w.nu[j - 1] = witness_exponent(alpha, t, j);

    long double log_n = 0.0L, log_ffn = 0.0L;
    u64 index = 0;
    for (u64 j = 1; j <= t; ++j) {
        u64 qj = rule.nth_q(j);
        if ((qj - 1) % alpha != 0)
            throw domain_error("build_witness: g has no preimage of the Q prime " +
                               std::to_string(qj) + " (q != 1 mod alpha)");
        u64 dag = (qj - 1) / alpha; // g_dagger(q_j)
        if (g(dag) != qj)
            throw integrity_error("build_witness: g(g_dagger(q_j)) != q_j");
        for (u64 i = 0; i < w.nu[j - 1]; ++i) {
            ++index;
            u64 base = rule.nth_q(index);
            log_n += (long double)dag * logl((long double)base);
        }
        w.fn.entries.push_back({qj, (u32)w.nu[j - 1]});
        log_ffn += logl((long double)g(w.nu[j - 1]));
    }
    w.log_n = (double)log_n;
    w.log_ffn = (double)log_ffn;
    w.ratio = w.log_ffn * l2 / std::sqrt(lx);
    return w;
}

std::optional<u64> materialize_witness(const MultiplicativeRule& rule,
                                       const ExtremalWitness& witness) {
    const GSpec& g = rule.g();
    if (!g.is_affine()) return std::nullopt;
    u64 alpha = g.alpha();
    u128 n = 1;
    u64 index = 0;
    for (u64 j = 1; j <= witness.t; ++j) {
        u64 qj = rule.nth_q(j);
        u64 dag = (qj - 1) / alpha;
        for (u64 i = 0; i < witness.nu[j - 1]; ++i) {
            ++index;
            u64 base = rule.nth_q(index);
            for (u64 e = 0; e < dag; ++e) {
                n *= base;
                if (n > (u128)UINT64_MAX) return std::nullopt;
            }
        }
    }
    return (u64)n;
}

} // namespace itermax
