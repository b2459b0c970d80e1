#include "logvertex/fock.hpp"

#include <doctest.h>

#include <functional>

using namespace logvertex;

namespace {

FockVector mono(int charge, FockMonomial::Exponents e, Rational c = 1) { return FockVector(FockMonomial(charge, std::move(e)), c); }

// p_k = sum over partitions of k of prod_i xi_i^{m_i} / m_i!, straight from the exponential.
FockVector p_oracle(int k) {
    FockVector out;
    std::function<void(int, int, FockMonomial::Exponents&, Rational)> rec =
        [&](int rest, int maxp, FockMonomial::Exponents& cur, Rational c) {
            if (rest == 0) {
                out.add_term(FockMonomial(0, cur), c);
                return;
            }
            for (int part = std::min(rest, maxp); part >= 1; --part)
                for (int mult = 1; mult * part <= rest; ++mult) {
                    cur.emplace_back(part, mult);
                    rec(rest - mult * part, part - 1, cur, c / factorial(mult));
                    cur.pop_back();
                }
        };
    FockMonomial::Exponents cur;
    rec(k, k, cur, Rational(1));
    return out;
}

}  // namespace

TEST_CASE("fv_mul on monomials") {
    CHECK(FockVector::charge(1) * FockVector::charge(-1) == FockVector(Rational(1)));
    CHECK(FockVector::xi(1) * FockVector::xi(1) == FockVector::xi(1, 2));
    auto lhs = (FockVector::xi(1) + FockVector::charge(1) * Rational(2)) * FockVector::xi(2);
    auto rhs = mono(0, {{1, 1}, {2, 1}}) + mono(1, {{2, 1}}, 2);
    CHECK(lhs == rhs);
}

TEST_CASE("d_xi examples") {
    CHECK(d_xi(1, FockVector::xi(1, 2)) == FockVector::xi(1) * Rational(2));
    CHECK(d_xi(0, FockVector::charge(3)) == FockVector::charge(3) * Rational(3));
    CHECK(d_xi(2, mono(-1, {{1, 1}, {2, 2}})) == mono(-1, {{1, 1}, {2, 1}}, 2));
    CHECK(d_xi(5, FockVector::xi(1)).is_zero());
}

TEST_CASE("charge_decompose") {
    auto parts = charge_decompose(FockVector(Rational(1)) + FockVector::charge(1));
    REQUIRE(parts.size() == 2);
    CHECK(parts[0] == FockVector(Rational(1)));
    CHECK(parts[1] == FockVector::charge(1));
    auto single = charge_decompose(mono(-2, {{1, 1}}));
    REQUIRE(single.size() == 1);
    CHECK(single.begin()->first == -2);
    CHECK(charge_decompose(FockVector()).empty());
}

TEST_CASE("p_polynomials against hand expansion and the partition formula") {
    auto p = p_polynomials(8);
    REQUIRE(p.size() == 8);
    CHECK(p[0] == FockVector::xi(1));
    CHECK(p[1] == FockVector::xi(2) + FockVector::xi(1, 2) * Rational(1, 2));
    CHECK(p[2] == FockVector::xi(3) + mono(0, {{1, 1}, {2, 1}}) + FockVector::xi(1, 3) * Rational(1, 6));
    for (int k = 1; k <= 8; ++k) {
        CHECK(p[k - 1] == p_oracle(k));
        for (const auto& [m, c] : p[k - 1].terms()) CHECK(m.weight() == k);
    }
    CHECK_THROWS(p_polynomials(0));
}

TEST_CASE("algebra laws on sampled monomials") {
    auto basis = basis_monomials(4, 1);
    std::vector<FockVector> sample;
    for (std::size_t i = 0; i < basis.size(); i += 3) {
        Rational c(1 + static_cast<int>(i % 5), 2);
        c.canonicalize();
        sample.emplace_back(basis[i], c);
    }
    for (const auto& a : sample)
        for (const auto& b : sample) {
            CHECK(a * b == b * a);
            for (int n = 0; n <= 3; ++n) {
                CHECK(d_xi(n, a * b) == d_xi(n, a) * b + a * d_xi(n, b));
                for (int m = 0; m <= 3; ++m) CHECK(d_xi(n, d_xi(m, a)) == d_xi(m, d_xi(n, a)));
            }
        }
    for (std::size_t i = 0; i + 2 < sample.size(); i += 2)
        CHECK((sample[i] * sample[i + 1]) * sample[i + 2] == sample[i] * (sample[i + 1] * sample[i + 2]));
}

TEST_CASE("render is canonical") {
    auto v = mono(-1, {{1, 2}}) + FockVector::xi(3) * Rational(1, 2);
    CHECK(render(v) == "e(-1)*xi(1)^2 + 1/2*xi(3)");
    CHECK(render(FockVector()) == "0");
    CHECK(render(FockVector(Rational(-3, 4))) == "-3/4");
    CHECK(render(FockVector::xi(2) - FockVector::charge(2)) == "xi(2) - e(2)");
}

TEST_CASE("monomial invariants") {
    FockMonomial m(0, {{2, 1}, {1, 0}, {2, 2}});
    CHECK(m.exponent(1) == 0);
    CHECK(m.exponent(2) == 3);
    CHECK(m.weight() == 6);
    CHECK_THROWS(FockMonomial(0, {{0, 1}}));
    CHECK_THROWS(FockMonomial(0, {{1, -1}}));
}
