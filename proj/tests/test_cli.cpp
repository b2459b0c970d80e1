#include "logvertex/cli.hpp"

#include <doctest.h>

#include <random>

using namespace logvertex;

TEST_CASE("parse_fock examples") {
    const FockVector a = parse_fock("e(1)*xi(1)^2");
    CHECK(a == FockVector(FockMonomial(1, {{1, 2}})));
    const FockVector b = parse_fock("1/2*xi(3) + e(-2)");
    CHECK(b == FockVector::xi(3) * Rational(1, 2) + FockVector::charge(-2));
    CHECK(parse_fock("e(-1)*xi(1)^2 + 1/2*xi(3)") ==
          FockVector(FockMonomial(-1, {{1, 2}})) + FockVector::xi(3) * Rational(1, 2));
    CHECK(parse_fock("-(xi(1) - 2)^2") ==
          -(FockVector::xi(1, 2) - FockVector::xi(1) * Rational(4) + FockVector(Rational(4))));
    CHECK(parse_fock("0").is_zero());
    CHECK(parse_fock(" 3/6 ") == FockVector(Rational(1, 2)));
    CHECK(parse_fock("e(0)") == FockVector(Rational(1)));
}

TEST_CASE("parse_fock errors carry a position") {
    auto position = [](const char* s) {
        try {
            parse_fock(s);
        } catch (const ParseError& e) {
            return static_cast<long>(e.position());
        }
        return -1L;
    };
    CHECK(position("xi(0)") == 3);
    CHECK(position("e(1/2)") == 2);
    CHECK(position("xi(1) +") == 7);
    CHECK(position("xi(1) xi(2)") == 6);
    CHECK(position("1/0") == 2);
    CHECK(position("xi(-1)") == 3);
    CHECK(position("xi(1)^-1") >= 0);
    CHECK(position("(xi(1)") == 6);
    CHECK(position("y(1)") == 0);
    CHECK(position("") == 0);
}

TEST_CASE("render round-trips through parse_fock") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7);
    const auto basis = basis_monomials(4, 2);
    for (int trial = 0; trial < 200; ++trial) {
        FockVector v;
        std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
        for (int t = 0; t < 4; ++t) v.add_term(basis[pick(rng)], Rational(num(rng), den(rng)));
        CHECK(parse_fock(render(v)) == v);
    }
    for (const auto& m : basis) CHECK(parse_fock(render(FockVector(m))) == FockVector(m));
}

TEST_CASE("config defaults and validation") {
    const auto fast = CliConfig::defaults(SuiteLevel::fast);
    CHECK(fast.window == 6);
    CHECK(fast.aux_order == 2);
    const auto full = CliConfig::defaults(SuiteLevel::full);
    CHECK(full.window == 8);
    CHECK(full.aux_order == 3);
    CliConfig bad = fast;
    bad.window = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = fast;
    bad.jobs = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("suite passes, is independent of jobs, and catches a sign flip") {
    CliConfig cfg = CliConfig::defaults(SuiteLevel::fast);
    cfg.window = 3;
    cfg.aux_order = 1;
    const SuiteResult one = run_suite(cfg);
    CHECK(one.pass);
    CHECK(one.entries.size() > 100);
    cfg.jobs = 3;
    const SuiteResult three = run_suite(cfg);
    CHECK(to_json(one).dump() == to_json(three).dump());

    cfg.inject = Mutation::flip_sign;
    const SuiteResult broken = run_suite(cfg);
    CHECK_FALSE(broken.pass);
    std::size_t failing = 0;
    for (const auto& e : broken.entries)
        if (!e.report.pass) {
            ++failing;
            CHECK(e.id == "delta/three-term");
            REQUIRE(e.report.witness.has_value());
        }
    CHECK(failing == 1);
}
