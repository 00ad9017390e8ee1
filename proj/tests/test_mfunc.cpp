#include "doctest.h"

#include <numeric>
#include <random>

#include "itermax/mfunc.hpp"

using namespace itermax;

namespace {

// independent divisor count by full enumeration
u64 divisor_count_oracle(u64 n) {
    u64 c = 0;
    for (u64 d = 1; d * d <= n; ++d) {
        if (n % d == 0) c += (d * d == n) ? 1 : 2;
    }
    return c;
}

// signed lattice count of x^2 + y^2 = n over a full box
u64 sum_two_squares_oracle(u64 n) {
    u64 count = 0;
    i64 bound = (i64)isqrt(n);
    for (i64 x = -bound; x <= bound; ++x)
        for (i64 y = -bound; y <= bound; ++y)
            if ((u64)(x * x + y * y) == n) ++count;
    return count;
}

// non-negative pairs with x^2 + xy + y^2 = n
u64 eisenstein_nonneg_oracle(u64 n) {
    u64 count = 0;
    i64 bound = (i64)isqrt(n) + 1;
    for (i64 x = 0; x <= bound; ++x)
        for (i64 y = 0; y <= bound; ++y)
            if ((u64)(x * x + x * y + y * y) == n) ++count;
    return count;
}

u64 eval_on(const MultiplicativeRule& rule, u64 n) { return eval(rule, factorize(n)); }

} // namespace

TEST_CASE("divisor-power rules") {
    MultiplicativeRule d1 = rule_divisor_power(1);
    CHECK(eval_on(d1, 12) == 6);
    CHECK(eval_on(d1, 1) == 1);
    CHECK(d1.kappa_hint() == 1.0);
    CHECK(d1.classify(97) == PrimeClass::in_q);

    MultiplicativeRule d2 = rule_divisor_power(2);
    CHECK(divisor_count_oracle(144) == 15);
    CHECK(eval_on(d2, 12) == 15); // d(12^2)
    // d(n^2) for assorted n against the enumeration oracle
    for (u64 n : {2ULL, 30ULL, 64ULL, 97ULL, 360ULL, 1024ULL})
        CHECK(eval_on(d2, n) == divisor_count_oracle(n * n));
    CHECK_THROWS_AS(rule_divisor_power(0), domain_error);
}

TEST_CASE("field rules match lattice counts") {
    MultiplicativeRule delta = rule_for_field(make_field(-4));
    CHECK(sum_two_squares_oracle(325) == 24);
    CHECK(eval_on(delta, 325) == 6);
    CHECK(sum_two_squares_oracle(9) == 4);
    CHECK(eval_on(delta, 9) == 1);
    CHECK(eval_on(delta, 65) == 4); // 16 lattice points / 4
    CHECK(sum_two_squares_oracle(65) == 16);
    CHECK(eval_on(delta, 21) == 0); // 3 and 7 inert with odd exponent
    CHECK(sum_two_squares_oracle(21) == 0);
    CHECK(delta.kappa_hint() == 2.0);

    MultiplicativeRule qbar = rule_for_field(make_field(-3));
    CHECK(eisenstein_nonneg_oracle(7) == 2); // (1,2) and (2,1)
    CHECK(eval_on(qbar, 7) == 2);
    // The non-negative pair count double-counts the one orbit that meets
    // the axes: (k,0) and (0,k) are unit translates of each other. So the
    // closed-quadrant count exceeds the multiplicative value by exactly 1
    // at perfect squares and matches everywhere else.
    for (u64 n = 1; n <= 400; ++n) {
        u64 r = isqrt(n);
        u64 boundary = (r * r == n) ? 1 : 0;
        CHECK(eval_on(qbar, n) + boundary == eisenstein_nonneg_oracle(n));
    }
}

TEST_CASE("field rule against the sum-of-two-squares count on a range") {
    MultiplicativeRule delta = rule_for_field(make_field(-4));
    for (u64 n = 1; n <= 400; ++n) {
        u64 raw = sum_two_squares_oracle(n);
        CHECK(raw % 4 == 0);
        CHECK(eval_on(delta, n) == raw / 4);
    }
}

TEST_CASE("prime class behavior on prime powers") {
    MultiplicativeRule delta = rule_for_field(make_field(-4));
    // 2 ramified: always 1
    for (u64 e = 1; e <= 6; ++e) CHECK(prime_power_value(delta, 2, e) == 1);
    // 3 inert: parity
    CHECK(prime_power_value(delta, 3, 1) == 0);
    CHECK(prime_power_value(delta, 3, 2) == 1);
    CHECK(prime_power_value(delta, 3, 3) == 0);
    // 5 split: affine
    CHECK(prime_power_value(delta, 5, 4) == 5);
}

TEST_CASE("eval_iterated") {
    MultiplicativeRule delta = rule_for_field(make_field(-4));
    IteratedValue v = eval_iterated(delta, 625);
    CHECK(v.inner == 5);
    CHECK(v.outer == 2);

    MultiplicativeRule d1 = rule_divisor_power(1);
    CHECK(divisor_count_oracle(5040) == 60);
    CHECK(divisor_count_oracle(60) == 12);
    IteratedValue w = eval_iterated(d1, 5040);
    CHECK(w.inner == 60);
    CHECK(w.outer == 12);

    IteratedValue one = eval_iterated(d1, 1);
    CHECK(one.inner == 1);
    CHECK(one.outer == 1);

    // inner value 0 falls back to f(0) = 1
    IteratedValue z = eval_iterated(delta, 3);
    CHECK(z.inner == 0);
    CHECK(z.outer == 1);

    // the outer value itself may vanish: delta(25) = 3, delta(3) = 0
    IteratedValue zz = eval_iterated(delta, 25);
    CHECK(zz.inner == 3);
    CHECK(zz.outer == 0);

    SpfTable table = sieve_spf(10'000);
    CHECK(eval_iterated(delta, 625, table).outer == 2);
    CHECK_THROWS_AS(eval_iterated(d1, 0), domain_error);
}

TEST_CASE("g_dagger") {
    GSpec a1 = GSpec::make_affine(1);
    CHECK(g_dagger(a1, 5) == 4);
    CHECK(!g_dagger(a1, 1).has_value()); // infimum over x >= 1 of an empty set
    GSpec a2 = GSpec::make_affine(2);
    CHECK(!g_dagger(a2, 4).has_value());
    CHECK(g_dagger(a2, 7) == 3);

    // pseudo-inverse laws
    for (u64 alpha : {1ULL, 2ULL, 3ULL}) {
        GSpec g = GSpec::make_affine(alpha);
        for (u64 y = 2; y <= 300; ++y) {
            auto x = g_dagger(g, y);
            if (x) CHECK(g(*x) == y);
        }
        for (u64 x = 1; x <= 300; ++x) {
            auto back = g_dagger(g, g(x));
            REQUIRE(back.has_value());
            CHECK(*back <= x);
        }
    }
}

TEST_CASE("table-backed g") {
    GSpec pow2 = GSpec::make_table({2}, GSpec::Extension::geometric, 2);
    for (u64 nu = 0; nu <= 20; ++nu) CHECK(pow2(nu) == (1ULL << nu));
    CHECK(g_dagger(pow2, 32) == 5);
    CHECK(!g_dagger(pow2, 24).has_value());

    GSpec tab = GSpec::make_table({3, 5, 6}, GSpec::Extension::affine, 4);
    CHECK(tab(0) == 1);
    CHECK(tab(3) == 6);
    CHECK(tab(5) == 14);
    CHECK(g_dagger(tab, 14) == 5);
    CHECK(!g_dagger(tab, 4).has_value());

    CHECK_THROWS_AS(GSpec::make_table({3, 2}, GSpec::Extension::affine, 1), domain_error);
    CHECK_THROWS_AS(GSpec::make_table({}, GSpec::Extension::affine, 1), domain_error);
}

TEST_CASE("multiplicativity on random coprime pairs") {
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<u64> dist(1, 1'000'000);
    SpfTable table = sieve_spf(1'000'000);

    std::vector<MultiplicativeRule> rules;
    rules.push_back(rule_divisor_power(1));
    rules.push_back(rule_divisor_power(2));
    rules.push_back(rule_for_field(make_field(-4)));
    rules.push_back(rule_for_field(make_field(-3)));
    rules.push_back(rule_for_field(make_field(8)));
    rules.push_back(make_rule(parse_rule_spec("q mod 4: 1\noff zero\ng affine 1")));

    int done = 0;
    while (done < 10'000) {
        u64 m = dist(rng), n = dist(rng);
        if (std::gcd(m, n) != 1) continue;
        ++done;
        for (const auto& rule : rules) {
            u64 lhs = eval(rule, factorize(m * n));
            u64 rhs = mul_checked(eval(rule, factorize(m, table)), eval(rule, factorize(n, table)));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("synthetic rule parsing") {
    SyntheticRuleSpec spec = parse_rule_spec("# comment\nq mod 4: 1\noff zero\ng affine 1\n");
    MultiplicativeRule rule = make_rule(spec);
    CHECK(rule.classify(5) == PrimeClass::in_q);
    CHECK(rule.classify(3) == PrimeClass::off_q_zero);
    CHECK(eval_on(rule, 3) == 0);
    CHECK(eval_on(rule, 9) == 0);
    CHECK(eval_on(rule, 5) == 2);
    CHECK(eval_on(rule, 65) == 4);
    CHECK(rule.kappa_hint() == 2.0); // phi(4)/1 residue class

    MultiplicativeRule listed =
        make_rule(parse_rule_spec("q list: 3 7 11\noff one\ng affine 2\nkappa 1.5"));
    CHECK(listed.nth_q(1) == 3);
    CHECK(listed.nth_q(3) == 11);
    CHECK_THROWS_AS(listed.nth_q(4), capacity_error);
    CHECK(listed.kappa_hint() == 1.5);
    CHECK(eval_on(listed, 9) == 5); // g(2) = 5
    CHECK(eval_on(listed, 5) == 1); // off list

    MultiplicativeRule geom =
        make_rule(parse_rule_spec("q all\noff one\ng table 2 ; geometric 2"));
    CHECK(eval_on(geom, 1024) == 1024); // g(10) = 2^10

    CHECK_THROWS_AS(parse_rule_spec("g affine 1"), domain_error);        // no q
    CHECK_THROWS_AS(parse_rule_spec("q all"), domain_error);             // no g
    CHECK_THROWS_AS(parse_rule_spec("q mod 4:\ng affine 1"), domain_error);
    CHECK_THROWS_AS(parse_rule_spec("banana\ng affine 1"), domain_error);
    CHECK_THROWS_AS(make_rule(parse_rule_spec("q list: 4\ng affine 1")), domain_error); // 4 not prime
}

TEST_CASE("rule selectors") {
    CHECK(rule_from_selector("divisor:2").name() == "divisor:2");
    CHECK(rule_from_selector("field:-4").name() == "field:-4");
    CHECK_THROWS_AS(rule_from_selector("divisor"), domain_error);
    CHECK_THROWS_AS(rule_from_selector("field:7"), domain_error); // 7 = 3 mod 4
    CHECK_THROWS_AS(rule_from_selector("synthetic:/nonexistent/file"), domain_error);
}

TEST_CASE("Q enumeration") {
    MultiplicativeRule d1 = rule_divisor_power(1);
    u64 expected[] = {2, 3, 5, 7, 11};
    for (u64 j = 1; j <= 5; ++j) CHECK(d1.nth_q(j) == expected[j - 1]);

    MultiplicativeRule delta = rule_for_field(make_field(-4));
    CHECK(delta.nth_q(1) == 5);
    CHECK(delta.nth_q(2) == 13);
    CHECK(delta.nth_q(3) == 17);
    CHECK(delta.count_q_upto(100) == 11); // primes = 1 mod 4 up to 100
    CHECK(d1.count_q_upto(100) == 25);
}

TEST_CASE("Q-part and omega_Q") {
    MultiplicativeRule delta = rule_for_field(make_field(-4));
    Factorization f = factorize(90); // 2 * 3^2 * 5
    Factorization qp = q_part(delta, f);
    REQUIRE(qp.entries.size() == 1);
    CHECK(qp.entries[0] == FactorEntry{5, 1});
    CHECK(omega_q(delta, f) == 1);
    CHECK(omega_q(delta, factorize(65)) == 2);
    MultiplicativeRule d1 = rule_divisor_power(1);
    CHECK(omega_q(d1, factorize(90)) == 3);
}

TEST_CASE("Q search cap is a resumable capacity error") {
    MultiplicativeRule delta = rule_for_field(make_field(-4));
    delta.set_q_search_cap(30);
    CHECK(delta.nth_q(2) == 13); // still below the cap
    CHECK_THROWS_AS(delta.nth_q(50), capacity_error);
    CHECK_THROWS_AS(delta.count_q_upto(1000), capacity_error);
    delta.set_q_search_cap(kDefaultQSearchCap);
    CHECK(delta.nth_q(50) == 577); // raising the cap resumes the search
}

TEST_CASE("eval overflow is a hard error") {
    // g(nu) = alpha*nu + 1 with a huge slope overflows quickly
    MultiplicativeRule big =
        make_rule(parse_rule_spec("q all\ng affine 9223372036854775807"));
    CHECK_THROWS_AS(eval_on(big, 1 << 4), overflow_error);
}
