#pragma once

#include <map>
#include <string>
#include <vector>

#include "itermax/mfunc.hpp"

namespace itermax {

enum class AuditStatus { pass, fail, fit_only };

const char* to_string(AuditStatus s);

// One record per assumption. Finite checks (A2, A3, A4, A6) are
// pass/fail with a concrete counterexample on failure; asymptotic ones
// (A1, A5, A7) report least-squares fits and residuals only -- a finite
// audit cannot prove an O(.) claim.
struct AssumptionRecord {
    std::string id;    // "A1" .. "A7"
    std::string label; // what the assumption says, in words
    AuditStatus status = AuditStatus::pass;
    std::map<std::string, double> fitted; // kappa_hat, c_star, c_f, c_dagger, decay...
    std::string range;                    // what was audited
    std::string counterexample;           // non-empty iff status == fail
};

struct AuditReport {
    std::vector<AssumptionRecord> records; // exactly seven, A1..A7 in order
    bool all_finite_checks_pass() const;
    const AssumptionRecord& record(const std::string& id) const;
};

// j_lo..j_hi indexes the Q primes for the density and preimage fits;
// nu_lo..nu_hi is the exponent range for the g checks; ab_budget bounds
// the enumeration of the monoid generated by Q.
AuditReport audit(const MultiplicativeRule& rule, u64 j_lo, u64 j_hi, u64 nu_lo,
                  u64 nu_hi, u64 ab_budget);

} // namespace itermax
