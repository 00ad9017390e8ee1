#include "itermax/audit.hpp"

#include <algorithm>
#include <cmath>

#include "itermax/extremal.hpp"

namespace itermax {

const char* to_string(AuditStatus s) {
    switch (s) {
        case AuditStatus::pass: return "pass";
        case AuditStatus::fail: return "fail";
        case AuditStatus::fit_only: return "fit-only";
    }
    return "?";
}

bool AuditReport::all_finite_checks_pass() const {
    for (const auto& r : records)
        if (r.status == AuditStatus::fail) return false;
    return true;
}

const AssumptionRecord& AuditReport::record(const std::string& id) const {
    for (const auto& r : records)
        if (r.id == id) return r;
    throw domain_error("audit report has no record " + id);
}

// Elements of the monoid generated by the Q primes, up to bound, ascending
// (1 excluded).
static std::vector<u64> q_monoid_upto(const MultiplicativeRule& rule, u64 bound) {
    // count_q_upto raises a capacity error when bound exceeds the Q search
    // cap, instead of silently truncating the monoid
    u64 count = rule.count_q_upto(bound);
    std::vector<u64> q_primes;
    for (u64 j = 1; j <= count; ++j) q_primes.push_back(rule.nth_q(j));
    std::vector<bool> member(bound + 1, false);
    if (bound >= 1) member[1] = true;
    for (u64 q : q_primes)
        for (u64 m = q; m <= bound; m += q)
            if (member[m / q]) member[m] = true;
    std::vector<u64> out;
    for (u64 m = 2; m <= bound; ++m)
        if (member[m]) out.push_back(m);
    return out;
}

AuditReport audit(const MultiplicativeRule& rule, u64 j_lo, u64 j_hi, u64 nu_lo,
                  u64 nu_hi, u64 ab_budget) {
    if (j_lo == 0 || j_hi < j_lo || nu_hi < nu_lo || nu_lo == 0 || ab_budget < 4)
        throw domain_error("audit: empty or invalid ranges");
    const GSpec& g = rule.g();
    AuditReport report;

    // ----- A1: q_j ~ kappa * j (log j + log log j) ----------------------
    {
        AssumptionRecord r;
        r.id = "A1";
        r.label = "Q primes grow like kappa * j (log j + log log j)";
        r.status = AuditStatus::fit_only;
        r.range = "j in [" + std::to_string(j_lo) + ", " + std::to_string(j_hi) + "]";
        long double sxy = 0.0L, sxx = 0.0L;
        u64 used = 0;
        bool exhausted = false;
        for (u64 j = std::max<u64>(j_lo, 3); j <= j_hi; ++j) {
            u64 qj;
            try {
                qj = rule.nth_q(j);
            } catch (const capacity_error&) {
                exhausted = true;
                break;
            }
            long double lj = logl((long double)j);
            long double w = (long double)j * (lj + logl(lj));
            sxy += w * (long double)qj;
            sxx += w * w;
            ++used;
        }
        if (used >= 2) {
            double kappa_hat = (double)(sxy / sxx);
            r.fitted["kappa_hat"] = kappa_hat;
            r.fitted["kappa_hint"] = rule.kappa_hint();
            r.fitted["points"] = (double)used;
        } else {
            r.range += exhausted ? " (Q exhausted)" : " (too few points)";
        }
        report.records.push_back(std::move(r));
    }

    // ----- A2: g monotonically increasing -------------------------------
    {
        AssumptionRecord r;
        r.id = "A2";
        r.label = "g is monotonically increasing";
        r.range = "nu in [" + std::to_string(nu_lo) + ", " + std::to_string(nu_hi) + "]";
        r.status = AuditStatus::pass;
        for (u64 nu = std::max<u64>(nu_lo, 1); nu <= nu_hi; ++nu) {
            if (g(nu) < g(nu - 1)) {
                r.status = AuditStatus::fail;
                r.counterexample = "g(" + std::to_string(nu) + ") = " + std::to_string(g(nu)) +
                                   " < g(" + std::to_string(nu - 1) + ") = " +
                                   std::to_string(g(nu - 1));
                break;
            }
        }
        report.records.push_back(std::move(r));
    }

    // ----- A3: image of g covers the monoid generated by Q --------------
    std::vector<u64> monoid = q_monoid_upto(rule, ab_budget);
    {
        AssumptionRecord r;
        r.id = "A3";
        r.label = "every product of Q primes is a value of g";
        r.range = "monoid elements <= " + std::to_string(ab_budget) + " (" +
                  std::to_string(monoid.size()) + " elements)";
        r.status = AuditStatus::pass;
        for (u64 m : monoid) {
            if (!g_dagger(g, m).has_value()) {
                r.status = AuditStatus::fail;
                r.counterexample = std::to_string(m) + " is not a value of g";
                break;
            }
        }
        report.records.push_back(std::move(r));
    }

    // ----- A4: gdagger(b) + c_star * b * gdagger(a) <= gdagger(ab) ------
    {
        AssumptionRecord r;
        r.id = "A4";
        r.label = "superadditivity of the preimage map on Q-monoid pairs";
        r.status = AuditStatus::pass;
        u64 q1 = 0;
        try {
            q1 = rule.nth_q(1);
        } catch (const capacity_error&) {
        }
        if (q1 == 0 || report.record("A3").status == AuditStatus::fail) {
            r.status = AuditStatus::fail;
            r.counterexample = q1 == 0 ? "Q is empty below the search cap"
                                       : "A3 failed: gdagger not total on the monoid";
            r.range = "skipped";
        } else {
            double c_star = 1.0;
            u64 pairs = 0;
            u64 bad_a = 0, bad_b = 0;
            for (auto ia = std::lower_bound(monoid.begin(), monoid.end(), q1);
                 ia != monoid.end(); ++ia) {
                u64 a = *ia;
                if ((u128)a * a > ab_budget) break;
                for (auto ib = ia; ib != monoid.end(); ++ib) {
                    u64 b = *ib;
                    u128 ab = (u128)a * b;
                    if (ab > ab_budget) break;
                    auto da = g_dagger(g, a), db = g_dagger(g, b), dab = g_dagger(g, (u64)ab);
                    if (!da || !db || !dab) continue; // covered by A3
                    ++pairs;
                    // largest admissible constant for this pair
                    long double c_pair =
                        ((long double)*dab - (long double)*db) /
                        ((long double)b * (long double)*da);
                    if ((double)c_pair < c_star) {
                        c_star = (double)c_pair;
                        bad_a = a;
                        bad_b = b;
                    }
                }
            }
            r.range = "pairs a <= b with ab <= " + std::to_string(ab_budget) + " (" +
                      std::to_string(pairs) + " pairs)";
            r.fitted["c_star"] = c_star;
            r.fitted["threshold"] = 1.0 / (double)q1;
            if (!(c_star > 1.0 / (double)q1)) {
                r.status = AuditStatus::fail;
                r.counterexample = "c_star = " + std::to_string(c_star) +
                                   " <= 1/q_1 at (a, b) = (" + std::to_string(bad_a) +
                                   ", " + std::to_string(bad_b) + ")";
            }
        }
        report.records.push_back(std::move(r));
    }

    // ----- A5: g(i)/g(i-1) = 1 + O(i^{-1/2-eps}) -------------------------
    {
        AssumptionRecord r;
        r.id = "A5";
        r.label = "the ratio g(i)/g(i-1) - 1 decays polynomially";
        r.status = AuditStatus::fit_only;
        r.range = "i in [" + std::to_string(std::max<u64>(nu_lo, 2)) + ", " +
                  std::to_string(nu_hi) + "]";
        // fit log(ratio - 1) = const - beta * log(i)
        long double sx = 0, sy = 0, sxx = 0, sxy = 0;
        u64 used = 0;
        for (u64 i = std::max<u64>(nu_lo, 2); i <= nu_hi; ++i) {
            u64 lo = g(i - 1), hi = g(i);
            if (hi == lo) continue; // flat step: no decay information
            long double ratio = (long double)(hi - lo) / (long double)lo;
            long double xv = logl((long double)i), yv = logl(ratio);
            sx += xv;
            sy += yv;
            sxx += xv * xv;
            sxy += xv * yv;
            ++used;
        }
        if (used >= 2) {
            long double denom = (long double)used * sxx - sx * sx;
            long double slope = denom != 0 ? ((long double)used * sxy - sx * sy) / denom : 0;
            r.fitted["decay_exponent"] = (double)(-slope);
            r.fitted["epsilon_implied"] = (double)(-slope) - 0.5;
            r.fitted["points"] = (double)used;
        } else {
            r.fitted["decay_exponent"] = INFINITY; // g eventually constant on the range
        }
        report.records.push_back(std::move(r));
    }

    // ----- A6: g(x) <= c_f * x -------------------------------------------
    {
        AssumptionRecord r;
        r.id = "A6";
        r.label = "g grows at most linearly";
        r.range = "nu in [1, " + std::to_string(nu_hi) + "]";
        r.status = AuditStatus::pass;
        if (g.is_affine()) {
            // canonical sharp cap: alpha*nu + 1 <= (alpha+1)*nu for nu >= 1
            r.fitted["c_f"] = (double)g.alpha() + 1.0;
            for (u64 nu = 1; nu <= nu_hi; ++nu) {
                if (g(nu) > mul_checked(g.alpha() + 1, nu)) {
                    r.status = AuditStatus::fail;
                    r.counterexample = "g(" + std::to_string(nu) + ") > c_f * nu";
                    break;
                }
            }
        } else {
            // The cap must stabilize on the first half of the range; a ratio
            // still growing at the far end cannot be certified linear.
            u64 mid = std::max<u64>(1, nu_hi / 2);
            long double cap = 0.0L;
            for (u64 nu = 1; nu <= mid; ++nu)
                cap = std::max(cap, (long double)g(nu) / (long double)nu);
            r.fitted["c_f"] = (double)cap;
            for (u64 nu = 1; nu <= nu_hi; ++nu) {
                if ((long double)g(nu) > cap * (long double)nu) {
                    r.status = AuditStatus::fail;
                    r.counterexample = "g(" + std::to_string(nu) + ") = " +
                                       std::to_string(g(nu)) + " exceeds " +
                                       std::to_string((double)cap) + " * nu for every cap" +
                                       " fitted on [1, " + std::to_string(mid) + "]";
                    break;
                }
            }
        }
        report.records.push_back(std::move(r));
    }

    // ----- A7: gdagger(q) = c_dagger * q + O(q/log q) --------------------
    {
        AssumptionRecord r;
        r.id = "A7";
        r.label = "the preimage of Q primes is asymptotically linear";
        r.status = AuditStatus::fit_only;
        r.range = "j in [" + std::to_string(j_lo) + ", " + std::to_string(j_hi) + "]";
        bool affine_exact = g.is_affine();
        u64 alpha = g.is_affine() ? g.alpha() : 1;
        long double sxy = 0, sxx = 0, max_scaled_residual = 0;
        u64 used = 0;
        for (u64 j = j_lo; j <= j_hi; ++j) {
            u64 q;
            try {
                q = rule.nth_q(j);
            } catch (const capacity_error&) {
                break;
            }
            auto dag = g_dagger(g, q);
            if (!dag) {
                affine_exact = false;
                continue;
            }
            if (affine_exact && (q - 1) % alpha != 0) affine_exact = false;
            sxy += (long double)q * (long double)*dag;
            sxx += (long double)q * (long double)q;
            long double fitted_cd = g.is_affine() ? 1.0L / (long double)alpha : 0.0L;
            if (g.is_affine()) {
                long double resid = fabsl((long double)*dag - fitted_cd * (long double)q) *
                                    logl((long double)q) / (long double)q;
                max_scaled_residual = std::max(max_scaled_residual, resid);
            }
            ++used;
        }
        if (used >= 1) {
            if (g.is_affine() && affine_exact) {
                // gdagger(q) = (q-1)/alpha exactly once q = 1 mod alpha holds
                r.fitted["c_dagger"] = 1.0 / (double)alpha;
                r.fitted["max_scaled_residual"] = (double)max_scaled_residual;
                r.fitted["exact"] = 1.0;
            } else {
                r.fitted["c_dagger"] = (double)(sxy / sxx);
                r.fitted["exact"] = 0.0;
            }
            r.fitted["points"] = (double)used;
        } else {
            r.range += " (no Q primes in the image of g)";
        }
        report.records.push_back(std::move(r));
    }

    return report;
}

} // namespace itermax
