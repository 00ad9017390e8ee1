#include "itermax/forms.hpp"

#include <algorithm>
#include <string>

#include "itermax/parallel.hpp"

namespace itermax {

FormSpec make_form(i64 a, i64 b, i64 c, u64 normalizer, LatticeRestriction restriction) {
    if (a <= 0 || 4 * a * c - b * b <= 0)
        throw domain_error("make_form: form is not positive definite");
    if (normalizer != 1 && normalizer != 2 && normalizer != 4 && normalizer != 6)
        throw domain_error("make_form: normalizer must be one of 1, 2, 4, 6");
    return FormSpec{a, b, c, normalizer, restriction};
}

u64 count_raw(const FormSpec& form, u64 n) {
    if (n == 0) return 1; // origin only, by positive definiteness
    const i64 a = form.a, b = form.b, c = form.c;
    const i64 disc = 4 * a * c - b * b; // > 0
    if (n > (u64)(INT64_MAX / (8 * a))) // headroom for the bound search below
        throw capacity_error("count_raw: n too large for exact enumeration");
    // a x^2 + b x y + (c y^2 - n) = 0 in x:
    //   x = (-b y +- sqrt(4 a n - disc * y^2)) / (2a)
    // so |y| <= sqrt(4 a n / disc).
    const i64 nn = (i64)n;
    i64 ybound = (i64)isqrt((u64)(4 * a * nn / disc));
    while ((disc * (ybound + 1)) * (ybound + 1) <= 4 * a * nn) ++ybound;
    const bool nonneg = form.restriction == LatticeRestriction::non_negative;
    u64 count = 0;
    for (i64 y = nonneg ? 0 : -ybound; y <= ybound; ++y) {
        i64 rad = 4 * a * nn - disc * y * y;
        if (rad < 0) continue;
        i64 s = (i64)isqrt((u64)rad);
        if (s * s != rad) continue;
        for (i64 sign : {1, -1}) {
            if (s == 0 && sign < 0) break; // double root counts once
            i64 num = -b * y + sign * s;
            if (num % (2 * a) != 0) continue;
            i64 x = num / (2 * a);
            if (nonneg && x < 0) continue;
            ++count;
        }
    }
    return count;
}

u64 count_normalized(const FormSpec& form, u64 n) {
    if (n == 0) return 1;
    u64 raw = count_raw(form, n);
    if (raw % form.normalizer != 0)
        throw integrity_error("count_normalized: raw count " + std::to_string(raw) +
                              " at n = " + std::to_string(n) +
                              " is not divisible by normalizer " +
                              std::to_string(form.normalizer));
    return raw / form.normalizer;
}

CrosscheckReport crosscheck_range(const FormSpec& form, const MultiplicativeRule& rule,
                                  u64 limit, unsigned threads) {
    if (limit == 0) throw domain_error("crosscheck_range: limit must be >= 1");
    SpfTable table = sieve_spf(std::max<u64>(limit, 2));
    auto chunk = [&](u64 lo, u64 hi) {
        std::vector<FormMismatch> bad;
        for (u64 n = lo; n <= hi; ++n) {
            u64 fc = count_normalized(form, n);
            u64 rv = eval(rule, factorize(n, table));
            if (fc != rv) bad.push_back({n, fc, rv});
        }
        return bad;
    };
    auto parts = run_chunked<std::vector<FormMismatch>>(1, limit, threads, 4096, chunk);
    CrosscheckReport report;
    report.limit = limit;
    for (auto& part : parts)
        report.mismatches.insert(report.mismatches.end(), part.begin(), part.end());
    return report;
}

FormSpec principal_form(i64 discriminant) {
    QuadraticFieldSpec field = make_field(discriminant);
    i64 d = field.discriminant;
    if (d >= 0)
        throw domain_error("principal_form: discriminant must be negative");
    u64 units = d == -3 ? 6 : d == -4 ? 4 : 2;
    if (((d % 4) + 4) % 4 == 0)
        return make_form(1, 0, -d / 4, units);
    return make_form(1, 1, (1 - d) / 4, units);
}

const std::vector<i64>& class_number_one_discriminants() {
    static const std::vector<i64> list = {-3, -4, -7, -8, -11, -19, -43, -67, -163};
    return list;
}

} // namespace itermax
