#include "doctest.h"

#include "itermax/audit.hpp"

using namespace itermax;

TEST_CASE("audit report shape") {
    AuditReport r = audit(rule_divisor_power(1), 10, 50, 1, 100, 200);
    REQUIRE(r.records.size() == 7);
    for (std::size_t i = 0; i < 7; ++i)
        CHECK(r.records[i].id == "A" + std::to_string(i + 1));
    for (const auto& rec : r.records)
        if (rec.status == AuditStatus::fail) CHECK(!rec.counterexample.empty());
    CHECK_THROWS_AS(audit(rule_divisor_power(1), 0, 10, 1, 10, 100), domain_error);
}

TEST_CASE("divisor rule passes the finite checks") {
    MultiplicativeRule d1 = rule_divisor_power(1);
    AuditReport r = audit(d1, 10, 300, 1, 500, 2000);
    CHECK(r.record("A2").status == AuditStatus::pass);
    CHECK(r.record("A3").status == AuditStatus::pass);
    CHECK(r.record("A4").status == AuditStatus::pass);
    CHECK(r.record("A6").status == AuditStatus::pass);
    CHECK(r.record("A4").fitted.at("c_star") == 1.0);
    CHECK(r.record("A6").fitted.at("c_f") == 2.0);
    CHECK(r.record("A7").fitted.at("c_dagger") == 1.0); // exact for affine
    CHECK(r.record("A7").fitted.at("exact") == 1.0);
    double kappa = r.record("A1").fitted.at("kappa_hat");
    CHECK(kappa > 0.7);
    CHECK(kappa < 1.1);
    double decay = r.record("A5").fitted.at("decay_exponent");
    CHECK(decay == doctest::Approx(1.0).epsilon(0.05)); // ratio - 1 ~ 1/i
    CHECK(r.record("A1").status == AuditStatus::fit_only);
    CHECK(r.record("A5").status == AuditStatus::fit_only);
    CHECK(r.record("A7").status == AuditStatus::fit_only);
}

TEST_CASE("field rule passes with the split-prime density") {
    MultiplicativeRule delta = rule_for_field(make_field(-4));
    AuditReport r = audit(delta, 10, 300, 1, 500, 2000);
    CHECK(r.record("A2").status == AuditStatus::pass);
    CHECK(r.record("A3").status == AuditStatus::pass);
    CHECK(r.record("A4").status == AuditStatus::pass);
    CHECK(r.record("A6").status == AuditStatus::pass);
    CHECK(r.record("A4").fitted.at("c_star") == 1.0);
    CHECK(r.record("A7").fitted.at("c_dagger") == 1.0);
    double kappa = r.record("A1").fitted.at("kappa_hat");
    CHECK(kappa > 1.5);
    CHECK(kappa < 2.5);
}

TEST_CASE("alpha = 2 preimage slope is reported exactly") {
    MultiplicativeRule odd2 = make_rule(parse_rule_spec("q mod 2: 1\ng affine 2"));
    AuditReport r = audit(odd2, 5, 200, 1, 300, 2000);
    CHECK(r.record("A3").status == AuditStatus::pass); // odd monoid = image of g
    CHECK(r.record("A4").status == AuditStatus::pass);
    CHECK(r.record("A7").fitted.at("c_dagger") == 0.5);
    CHECK(r.record("A7").fitted.at("exact") == 1.0);
}

TEST_CASE("exponential growth fails the linear cap with a counterexample") {
    MultiplicativeRule expo = make_rule(parse_rule_spec("q all\ng table 2 ; geometric 2"));
    AuditReport r = audit(expo, 5, 50, 1, 40, 200);
    CHECK(r.record("A6").status == AuditStatus::fail);
    CHECK(!r.record("A6").counterexample.empty());
    // 3 is in the monoid of all primes but never a power of two
    CHECK(r.record("A3").status == AuditStatus::fail);
    CHECK(r.record("A3").counterexample.find("3") != std::string::npos);
    // flat decay: the ratio g(i)/g(i-1) - 1 = 1 does not fall off
    CHECK(r.record("A5").fitted.at("decay_exponent") == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("all-primes Q with alpha = 2 fails coverage at the prime 2") {
    MultiplicativeRule bad = make_rule(parse_rule_spec("q all\ng affine 2"));
    AuditReport r = audit(bad, 5, 50, 1, 100, 100);
    CHECK(r.record("A3").status == AuditStatus::fail);
    CHECK(r.record("A3").counterexample.find("2") != std::string::npos);
}

TEST_CASE("audit is deterministic") {
    MultiplicativeRule d2 = rule_divisor_power(2);
    AuditReport a = audit(d2, 5, 120, 1, 200, 800);
    AuditReport b = audit(d2, 5, 120, 1, 200, 800);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].status == b.records[i].status);
        CHECK(a.records[i].fitted == b.records[i].fitted);
        CHECK(a.records[i].counterexample == b.records[i].counterexample);
    }
}
