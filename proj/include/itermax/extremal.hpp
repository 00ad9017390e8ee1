#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "itermax/arith.hpp"
#include "itermax/mfunc.hpp"

namespace itermax {

inline constexpr u64 kDefaultScanCap = 100'000'000;
inline constexpr u64 kDefaultPartitionBudget = 1'000'000;

// ---------------------------------------------------------------------
// Exhaustive maximum of f(f(n)) over n <= x.
// ---------------------------------------------------------------------
struct MaxRecord {
    u64 x = 0;
    u64 max_value = 0;        // max f(f(n)), always >= 1 since n = 1 gives 1
    double log_max = 0.0;     // natural log of max_value
    std::vector<u64> argmax;  // every n <= x attaining the maximum, ascending
};

MaxRecord scan_max(const MultiplicativeRule& rule, u64 x, unsigned threads = 1,
                   u64 cap = kDefaultScanCap);

// ---------------------------------------------------------------------
// Least m with f(m) = N, by enumeration of multiplicative partitions of N
// into parts from the image of g: parts map to exponents through the
// pseudo-inverse, exponents sort descending onto the ascending primes of
// Q, and the winner minimizes sum nu_i * log q_i. Comparisons are decided
// by interval arithmetic on the log sums, with an exact big-integer
// product comparison when the intervals overlap.
// ---------------------------------------------------------------------
struct MinPreimage {
    u64 target = 0;             // N
    Factorization m;            // q_1^{nu_1} ... q_r^{nu_r}
    std::vector<u64> exponents; // nu_1 >= ... >= nu_r
    double log_m = 0.0;
    u64 partitions_seen = 0;
    u64 ties = 0; // exact-comparison ties (resolved toward the lexicographically smaller vector)
};

MinPreimage min_preimage(const MultiplicativeRule& rule, u64 target,
                         u64 partition_budget = kDefaultPartitionBudget);

// ---------------------------------------------------------------------
// Structure checks over a table of minimal preimages:
//   (1) exponents non-increasing, and f(m_N) = N,
//   (2) divisor monotonicity: N' | N implies m_{N'} <= m_N,
//   (3) for each k in [k_min, k_max]: whenever q_j > q_{r+1}^{1/s_k} with
//       s_k = c_star * q_1^k, the value g(nu_j) has at most k prime
//       factors counted with multiplicity.
// ---------------------------------------------------------------------
struct PreimageViolation {
    std::string kind; // "exponent-order" | "value" | "divisor-monotonicity" | "omega-bound"
    u64 target = 0;
    u64 other = 0;
    std::string detail;
};

struct PreimageTableReport {
    std::vector<PreimageViolation> violations;
    bool ok() const { return violations.empty(); }
};

PreimageTableReport check_preimage_table(const MultiplicativeRule& rule,
                                         const std::vector<MinPreimage>& table,
                                         u64 k_min, u64 k_max);

// ---------------------------------------------------------------------
// The series constant C = (8 * sum_{j>=1} log^2(g(j)/g(j-1)))^{1/2},
// with a certified interval: |value - C| <= half_width <= tol.
// Throws domain_error when the series diverges (geometric table tails).
// ---------------------------------------------------------------------
struct SeriesConstant {
    double value = 0.0;
    double half_width = 0.0;
    u64 terms_used = 0;
};

SeriesConstant cs_constant(const GSpec& g, double tol);

// j-th series term log^2(g(j)/g(j-1)), exposed for direct inspection.
double cs_series_term(const GSpec& g, u64 j);

// ---------------------------------------------------------------------
// Cauchy-Schwarz bound: sum log g(nu_j) <= (C/2) * sqrt(sum j*nu_j).
// The right side is reported both for the tuple as given and after
// sorting the exponents descending (which minimizes it).
// ---------------------------------------------------------------------
struct CsBound {
    double lhs = 0.0;
    double rhs_sorted = 0.0;
    double rhs_as_given = 0.0;
};

CsBound cs_bound(const GSpec& g, std::span<const u64> nu, double c_value);
CsBound cs_bound(const GSpec& g, std::span<const u64> nu); // computes C at tol 1e-7

// ---------------------------------------------------------------------
// Diagnostic bound for values with few Q prime factors:
// f(n) vs ((c_f + eps) log n / (s log s))^s with s = omega_Q(n) >= 2.
// Reports both sides; the comparison carries an implied constant, so no
// inequality is asserted.
// ---------------------------------------------------------------------
struct SparseValueBound {
    u64 f_value = 0;
    double bound = 0.0;
    u64 omega_q = 0;
};

SparseValueBound sparse_value_bound(const MultiplicativeRule& rule, u64 n, double eps);

// Canonical constants for affine g (throw domain_error otherwise where noted).
double c_star_for(const GSpec& g);   // 1 for affine
double c_f_for(const GSpec& g);      // alpha + 1 for affine; finite-range max otherwise
double c_dagger_for(const GSpec& g); // 1/alpha for affine; domain_error otherwise

// ---------------------------------------------------------------------
// Extremal witness: in factored form only, never materialized unless it
// fits 64 bits. For affine g with slope alpha and parameters x, c_e:
//   eps = c_e * log3 x / log2 x,
//   t   = floor((8 log g(1) / C - eps) * sqrt(log x) / log2 x),
//   nu_j = floor(1 - 1/alpha + 1/((alpha+1)^{j/t} - 1)),
//   n = prod_{j<=t} prod_{i<=nu_j} q_{nu_1+...+nu_{j-1}+i}^{gdagger(q_j)},
// so that f(n) = prod q_j^{nu_j} exactly.
// ---------------------------------------------------------------------
struct ExtremalWitness {
    u64 t = 0;
    std::vector<u64> nu;  // nu_1 >= ... >= nu_t >= 1
    double epsilon = 0.0;
    double log_n = 0.0;
    Factorization fn;     // the asserted f(n)
    double log_ffn = 0.0; // sum log g(nu_j)
    double ratio = 0.0;   // log_ffn * log2(x) / sqrt(log x)
};

ExtremalWitness build_witness(const MultiplicativeRule& rule, u64 x, double c_e);

// The witness integer itself when it fits in 64 bits.
std::optional<u64> materialize_witness(const MultiplicativeRule& rule,
                                       const ExtremalWitness& witness);

// Exact floor formulas behind the construction (decided by integer power
// comparisons, no floating point in the final decision):
//   witness_exponent(alpha, t, j)    = nu_j
//   witness_level_count(alpha, t, i) = floor(t * log(1 + 1/(i-1+1/alpha)) / log(alpha+1))
u64 witness_exponent(u64 alpha, u64 t, u64 j);
u64 witness_level_count(u64 alpha, u64 t, u64 i);

} // namespace itermax
