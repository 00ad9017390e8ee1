#include "doctest.h"

#include <cmath>

#include "itermax/fields.hpp"

using namespace itermax;

TEST_CASE("fundamental discriminant validation") {
    for (i64 d : {-3, -4, -7, -8, -11, -19, -43, -67, -163, 5, 8, 12, 13, -20})
        CHECK(is_fundamental_discriminant(d));
    for (i64 d : {0, 1, 2, 3, 4, -1, -2, 9, 16, -16, -12, -28, 25, 45})
        CHECK(!is_fundamental_discriminant(d));
    CHECK_THROWS_AS(make_field(0), domain_error);
    CHECK_THROWS_AS(make_field(1), domain_error);
    CHECK_THROWS_AS(make_field(48), domain_error);
    CHECK(make_field(-4).discriminant == -4);
}

TEST_CASE("splitting type examples") {
    QuadraticFieldSpec gauss = make_field(-4);
    CHECK(splitting_type(gauss, 2) == SplittingType::ramified);
    CHECK(splitting_type(gauss, 13) == SplittingType::split); // 13 = 4 + 9
    CHECK(splitting_type(gauss, 3) == SplittingType::inert);
    QuadraticFieldSpec eis = make_field(-3);
    CHECK(splitting_type(eis, 5) == SplittingType::inert); // 5 = 2 mod 3
    CHECK(splitting_type(eis, 3) == SplittingType::ramified);
    CHECK(splitting_type(eis, 7) == SplittingType::split);
    CHECK_THROWS_AS(splitting_type(gauss, 10), domain_error);
    CHECK_THROWS_AS(splitting_type(gauss, 1), domain_error);
}

TEST_CASE("splitting trichotomy: ramified exactly at divisors of the discriminant") {
    for (i64 d : {-4LL, -3LL, 8LL, -163LL}) {
        QuadraticFieldSpec field = make_field(d);
        u64 ad = (u64)(d < 0 ? -d : d);
        for_primes_up_to(100'000, [&](u64 p) {
            SplittingType t = splitting_type(field, p);
            bool divides = ad % p == 0;
            CHECK((t == SplittingType::ramified) == divides);
            return true;
        });
    }
}

TEST_CASE("split prime counting against congruence sieves") {
    // Q(i): split primes are exactly those = 1 mod 4
    u64 oracle = 0;
    for_primes_up_to(10'000, [&](u64 p) {
        if (p % 4 == 1) ++oracle;
        return true;
    });
    SplitPrimeCount c = split_prime_count(make_field(-4), 10'000);
    CHECK(c.count == oracle);

    CHECK(split_prime_count(make_field(-4), 2).count == 0); // 2 is ramified

    // discriminant 8 (Q(sqrt 2)): split iff p = +-1 mod 8
    u64 oracle8 = 0;
    for_primes_up_to(100, [&](u64 p) {
        if (p % 8 == 1 || p % 8 == 7) ++oracle8;
        return true;
    });
    CHECK(split_prime_count(make_field(8), 100).count == oracle8);

    // and the classification agrees with the congruence condition throughout
    QuadraticFieldSpec f8 = make_field(8);
    for_primes_up_to(5000, [&](u64 p) {
        bool split = splitting_type(f8, p) == SplittingType::split;
        CHECK(split == (p % 8 == 1 || p % 8 == 7));
        return true;
    });
}

TEST_CASE("nth split prime") {
    QuadraticFieldSpec gauss = make_field(-4);
    CHECK(nth_split_prime(gauss, 1) == 5);
    CHECK(nth_split_prime(gauss, 2) == 13);
    CHECK(nth_split_prime(make_field(-3), 1) == 7);
    u64 prev = 0;
    for (u64 j = 1; j <= 200; ++j) {
        u64 q = nth_split_prime(gauss, j);
        CHECK(q > prev);
        CHECK(q % 4 == 1);
        prev = q;
    }
    CHECK_THROWS_AS(nth_split_prime(gauss, 100, 50), capacity_error);
    CHECK_THROWS_AS(nth_split_prime(gauss, 0), domain_error);
}

TEST_CASE("logarithmic integral") {
    CHECK(log_integral(2.0) == doctest::Approx(1.04516378011749).epsilon(1e-12));
    CHECK(log_integral(1e6) == doctest::Approx(78627.549159).epsilon(1e-9));
    // derivative check: li(x+h) - li(x) close to h / log(midpoint)
    double x = 1e5, h = 1000;
    double diff = log_integral(x + h) - log_integral(x);
    CHECK(diff == doctest::Approx(h / std::log(x + h / 2)).epsilon(1e-5));
    CHECK_THROWS_AS(log_integral(1.5), domain_error);
}

TEST_CASE("split counts track li(x)/2 already at modest scale") {
    for (i64 d : {-4LL, -3LL, 8LL}) {
        SplitPrimeCount c = split_prime_count(make_field(d), 100'000);
        CHECK(std::abs((double)c.count / c.reference - 1.0) <= 0.02);
    }
}

TEST_CASE("split-prime growth sits near twice the all-primes rate") {
    // q_j / (j (log j + log log j)) stays within [1.6, 2.4] on the audited range
    QuadraticFieldSpec gauss = make_field(-4);
    for (u64 j : {1000ULL, 3000ULL, 10000ULL}) {
        u64 q = nth_split_prime(gauss, j);
        double lj = std::log((double)j);
        double kappa = (double)q / ((double)j * (lj + std::log(lj)));
        CHECK(kappa >= 1.6);
        CHECK(kappa <= 2.4);
    }
}
