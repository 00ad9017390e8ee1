#include "doctest.h"

#include "itermax/forms.hpp"

using namespace itermax;

namespace {

// full 2D box enumeration, independent of the production counting path
u64 box_count(const FormSpec& f, u64 n) {
    u64 count = 0;
    i64 bound = (i64)isqrt(4 * n) + 2;
    i64 lo = f.restriction == LatticeRestriction::non_negative ? 0 : -bound;
    for (i64 x = lo; x <= bound; ++x)
        for (i64 y = lo; y <= bound; ++y)
            if (f.a * x * x + f.b * x * y + f.c * y * y == (i64)n) ++count;
    return count;
}

} // namespace

TEST_CASE("form validation") {
    CHECK_THROWS_AS(make_form(0, 0, 1, 2), domain_error);
    CHECK_THROWS_AS(make_form(1, 3, 1, 2), domain_error);  // indefinite
    CHECK_THROWS_AS(make_form(-1, 0, -1, 2), domain_error);
    CHECK_THROWS_AS(make_form(1, 0, 1, 5), domain_error);  // bad normalizer
    CHECK_NOTHROW(make_form(1, 1, 41, 2));
}

TEST_CASE("count_raw examples") {
    FormSpec gauss = make_form(1, 0, 1, 4);
    CHECK(count_raw(gauss, 25) == 12);
    CHECK(count_raw(gauss, 0) == 1);
    CHECK(count_raw(gauss, 3) == 0);

    FormSpec eis = make_form(1, 1, 1, 6);
    CHECK(count_raw(eis, 1) == 6);

    FormSpec eis_nonneg = make_form(1, 1, 1, 1, LatticeRestriction::non_negative);
    CHECK(count_raw(eis_nonneg, 7) == 2); // (1,2) and (2,1)
    CHECK(count_raw(eis_nonneg, 0) == 1);
}

TEST_CASE("count_raw agrees with full box enumeration") {
    std::vector<FormSpec> forms;
    for (i64 d : class_number_one_discriminants()) forms.push_back(principal_form(d));
    forms.push_back(make_form(1, 1, 1, 1, LatticeRestriction::non_negative));
    forms.push_back(make_form(1, 0, 2, 2, LatticeRestriction::non_negative));
    forms.push_back(make_form(2, 1, 3, 1)); // a > 1 exercises the divisibility branch
    for (const auto& f : forms)
        for (u64 n = 0; n <= 300; ++n) CHECK(count_raw(f, n) == box_count(f, n));
}

TEST_CASE("count_normalized") {
    CHECK(count_normalized(make_form(1, 0, 1, 4), 25) == 3);
    CHECK(count_normalized(make_form(1, 1, 1, 6), 1) == 1);
    CHECK(count_normalized(make_form(1, 0, 1, 4), 0) == 1);
    // x^2 + 2y^2 = 3 has the four solutions (+-1, +-1); halving gives 2
    CHECK(count_raw(make_form(1, 0, 2, 2), 3) == 4);
    CHECK(count_normalized(make_form(1, 0, 2, 2), 3) == 2);
    // mismatched normalizer trips the divisibility check: x^2+2y^2 = 1 has 2 solutions
    CHECK_THROWS_AS(count_normalized(make_form(1, 0, 2, 4), 1), integrity_error);
}

TEST_CASE("Gauss circle sanity: summed counts fill the disk") {
    const u64 n_max = 10'000;
    u64 summed = 0;
    FormSpec gauss = make_form(1, 0, 1, 4);
    for (u64 n = 1; n <= n_max; ++n) summed += count_raw(gauss, n);
    u64 disk = 0; // lattice points with x^2 + y^2 <= n_max, counted row by row
    i64 r = (i64)isqrt(n_max);
    for (i64 x = -r; x <= r; ++x) disk += 2 * isqrt(n_max - (u64)(x * x)) + 1;
    CHECK(summed == disk - 1);
}

TEST_CASE("principal forms of the class-number-one discriminants") {
    struct Row { i64 d, a, b, c; u64 w; };
    const Row rows[] = {
        {-3, 1, 1, 1, 6}, {-4, 1, 0, 1, 4},  {-7, 1, 1, 2, 2},
        {-8, 1, 0, 2, 2}, {-11, 1, 1, 3, 2}, {-19, 1, 1, 5, 2},
        {-43, 1, 1, 11, 2}, {-67, 1, 1, 17, 2}, {-163, 1, 1, 41, 2},
    };
    for (const Row& r : rows) {
        FormSpec f = principal_form(r.d);
        CHECK(f.a == r.a);
        CHECK(f.b == r.b);
        CHECK(f.c == r.c);
        CHECK(f.normalizer == r.w);
        CHECK(4 * f.a * f.c - f.b * f.b == -r.d);
    }
    CHECK_THROWS_AS(principal_form(8), domain_error);  // positive discriminant
    CHECK_THROWS_AS(principal_form(-6), domain_error); // not fundamental
}

TEST_CASE("crosscheck_range validates the closed formulas") {
    CrosscheckReport r1 =
        crosscheck_range(principal_form(-4), rule_for_field(make_field(-4)), 10'000);
    CHECK(r1.ok());
    CrosscheckReport r2 =
        crosscheck_range(principal_form(-3), rule_for_field(make_field(-3)), 10'000);
    CHECK(r2.ok());
}

TEST_CASE("crosscheck_range flags a wrong pairing") {
    CrosscheckReport r =
        crosscheck_range(principal_form(-4), rule_divisor_power(1), 10);
    REQUIRE(!r.ok());
    // already n = 2 disagrees: delta(2) = 1 against d(2) = 2
    REQUIRE(r.mismatches.size() >= 2);
    CHECK(r.mismatches[0].n == 2);
    CHECK(r.mismatches[0].form_count == 1);
    CHECK(r.mismatches[0].rule_value == 2);
    CHECK(r.mismatches[1].n == 3);
    CHECK(r.mismatches[1].form_count == 0);
    CHECK(r.mismatches[1].rule_value == 2);
}

TEST_CASE("crosscheck_range is deterministic across worker counts") {
    FormSpec form = principal_form(-8);
    MultiplicativeRule rule = rule_for_field(make_field(-8));
    CrosscheckReport a = crosscheck_range(form, rule, 20'000, 1);
    CrosscheckReport b = crosscheck_range(form, rule, 20'000, 4);
    CHECK(a.limit == b.limit);
    REQUIRE(a.mismatches.size() == b.mismatches.size());
    for (std::size_t i = 0; i < a.mismatches.size(); ++i)
        CHECK(a.mismatches[i].n == b.mismatches[i].n);
    CHECK(a.ok());
}
