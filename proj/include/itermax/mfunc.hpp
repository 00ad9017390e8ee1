#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "itermax/arith.hpp"
#include "itermax/fields.hpp"

namespace itermax {

// How a prime behaves under the function: members of Q follow the exponent
// map g, everything else is pinned to one of the three {0,1}-valued rules.
enum class PrimeClass {
    in_q,         // f(p^v) = g(v)
    off_q_one,    // f(p^v) = 1
    off_q_parity, // f(p^v) = 1 for even v, 0 for odd v
    off_q_zero,   // f(p^v) = 0 for v >= 1
};

const char* to_string(PrimeClass c);

// ---------------------------------------------------------------------
// GSpec: the exponent map g with g(0) = 1, monotonically increasing.
// Either affine (g(v) = alpha*v + 1) or a table with an explicit total
// extension rule beyond the listed values.
// ---------------------------------------------------------------------
class GSpec {
public:
    enum class Kind { affine, table };
    enum class Extension { affine, geometric };

    static GSpec make_affine(u64 alpha);
    // values = g(1), ..., g(K); g(0) = 1 implicit. Beyond K:
    //   affine:    g(K+i) = g(K) + param * i
    //   geometric: g(K+i) = g(K) * param^i
    static GSpec make_table(std::vector<u64> values, Extension ext, u64 param);

    u64 operator()(u64 nu) const; // g(nu), overflow-checked

    Kind kind() const { return kind_; }
    bool is_affine() const { return kind_ == Kind::affine; }
    u64 alpha() const { return alpha_; }
    Extension extension() const { return ext_; }
    u64 extension_param() const { return ext_param_; }
    const std::vector<u64>& table() const { return table_; }

    std::string describe() const;

    friend bool operator==(const GSpec&, const GSpec&) = default;

private:
    Kind kind_ = Kind::affine;
    u64 alpha_ = 1;
    std::vector<u64> table_;
    Extension ext_ = Extension::affine;
    u64 ext_param_ = 1;
};

// Pseudo-inverse: least x >= 1 with g(x) = y, or nullopt when no such x
// exists (the infimum of an empty set; in particular g_dagger(1) is empty
// for affine g).
std::optional<u64> g_dagger(const GSpec& g, u64 y);

// ---------------------------------------------------------------------
// MultiplicativeRule: prime classifier + exponent map + the reciprocal
// density of Q (1 when Q is all primes, 2 for the split primes of a
// quadratic field). Immutable and cheap to copy; the lazily grown list of
// Q primes is shared between copies and guarded internally.
// ---------------------------------------------------------------------
class MultiplicativeRule {
public:
    PrimeClass classify(u64 p) const; // p must be prime
    const GSpec& g() const;
    double kappa_hint() const;
    const std::string& name() const;

    // j-th smallest prime of Q (j >= 1). Throws capacity_error when the
    // search bound is exhausted (explicit-list rules have a hard end).
    u64 nth_q(u64 j) const;
    // pi_Q(x): number of Q primes <= x.
    u64 count_q_upto(u64 x) const;

    u64 q_search_cap() const;
    void set_q_search_cap(u64 cap);

    struct Impl;
    explicit MultiplicativeRule(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}

private:
    std::shared_ptr<Impl> impl_;
};

// f(n) = d(n^alpha): every prime in Q, g affine with slope alpha.
MultiplicativeRule rule_divisor_power(u64 alpha);

// Ideal-norm counting rule of a quadratic field: ramified -> 1,
// split -> g(v) = v + 1, inert -> parity.
MultiplicativeRule rule_for_field(const QuadraticFieldSpec& field);

// ---------------------------------------------------------------------
// Synthetic rules, declared in a small text format (see README):
//   q all | q mod <m>: <r...> | q list: <p...>
//   off one|parity|zero
//   g affine <alpha> | g table <v...> ; affine <slope> | ; geometric <ratio>
//   kappa <real>
// ---------------------------------------------------------------------
struct SyntheticRuleSpec {
    enum class QKind { all, congruence, explicit_list };
    QKind q_kind = QKind::all;
    u64 modulus = 0;
    std::vector<u64> residues;
    std::vector<u64> q_primes; // explicit_list, ascending
    PrimeClass off_class = PrimeClass::off_q_one;
    GSpec g = GSpec::make_affine(1);
    double kappa = 0.0; // 0 = derive from the classifier
    std::string label;
};

SyntheticRuleSpec parse_rule_spec(std::string_view text);
MultiplicativeRule make_rule(const SyntheticRuleSpec& spec);

// "divisor:a" | "field:d" | "synthetic:<path>"
MultiplicativeRule rule_from_selector(std::string_view selector);

// ---------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------
u64 prime_power_value(const MultiplicativeRule& rule, u64 p, u64 nu);

// f(n) from its factorization: product of per-prime-power values, 0 if any
// factor vanishes. Overflow is a hard error.
u64 eval(const MultiplicativeRule& rule, const Factorization& f);

struct IteratedValue {
    u64 inner; // f(n)
    u64 outer; // f(f(n)), with f(0) = 1 when the inner value vanishes
};

IteratedValue eval_iterated(const MultiplicativeRule& rule, u64 n);
IteratedValue eval_iterated(const MultiplicativeRule& rule, u64 n, const SpfTable& table);

// Q-part of n (the largest divisor supported on Q) and its prime counts.
Factorization q_part(const MultiplicativeRule& rule, const Factorization& f);
u64 omega_q(const MultiplicativeRule& rule, const Factorization& f);

} // namespace itermax
