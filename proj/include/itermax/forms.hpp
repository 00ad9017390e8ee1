#pragma once

#include <vector>

#include "itermax/arith.hpp"
#include "itermax/mfunc.hpp"

namespace itermax {

enum class LatticeRestriction { all, non_negative };

// A positive definite binary quadratic form a x^2 + b xy + c y^2 together
// with the unit-group normalizer used to turn raw lattice counts into a
// multiplicative function.
struct FormSpec {
    i64 a, b, c;
    u64 normalizer;
    LatticeRestriction restriction;
};

// Validates positive definiteness (a > 0, 4ac - b^2 > 0) and the
// normalizer; throws domain_error otherwise.
FormSpec make_form(i64 a, i64 b, i64 c, u64 normalizer,
                   LatticeRestriction restriction = LatticeRestriction::all);

// Exact number of integer pairs (x, y) with a x^2 + b xy + c y^2 = n,
// restricted to x, y >= 0 for LatticeRestriction::non_negative. Exact
// integer arithmetic throughout; O(sqrt(n)) per call.
u64 count_raw(const FormSpec& form, u64 n);

// count_raw / normalizer for n >= 1 (throws integrity_error if the raw
// count is not divisible), and 1 for n = 0 by the f(0) = 1 convention.
u64 count_normalized(const FormSpec& form, u64 n);

struct FormMismatch {
    u64 n;
    u64 form_count; // count_normalized
    u64 rule_value; // eval(rule, n)
};

struct CrosscheckReport {
    u64 limit = 0;
    std::vector<FormMismatch> mismatches;
    bool ok() const { return mismatches.empty(); }
};

// Compare the normalized lattice count against the multiplicative rule for
// every n <= limit. Chunks are merged in index order, so the report is
// deterministic regardless of the worker count.
CrosscheckReport crosscheck_range(const FormSpec& form, const MultiplicativeRule& rule,
                                  u64 limit, unsigned threads = 1);

// Principal form of a fundamental discriminant d < 0 with the normalizer
// equal to the unit count of the corresponding imaginary quadratic order
// (6 for d = -3, 4 for d = -4, 2 otherwise).
FormSpec principal_form(i64 discriminant);

// The nine negative fundamental discriminants with class number one; for
// exactly these the normalized principal-form count is multiplicative and
// matches the field rule.
const std::vector<i64>& class_number_one_discriminants();

} // namespace itermax
