#include "helpers.hpp"
#include "logvertex/vertex.hpp"

#include <doctest.h>

#include <map>
#include <utility>

using namespace logvertex;
using testutil::key;

namespace {

FockVector e(int m) { return FockVector::charge(m); }
FockVector xi(int n, int p = 1) { return FockVector::xi(n, p); }

// bivariate polynomials in (x, z) over Xi, truncated to x^{<=ax} z^{<=az}
using Poly2 = std::map<std::pair<int, int>, FockVector>;

Poly2 mul(const Poly2& a, const Poly2& b, int ax, int az) {
    Poly2 out;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) {
            const int i = ka.first + kb.first, j = ka.second + kb.second;
            if (i > ax || j > az) continue;
            out[{i, j}] += ca * cb;
        }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

// exp(p) for p without constant term, by summing powers until they vanish
Poly2 exp_naive(const Poly2& p, int ax, int az) {
    Poly2 out{{{0, 0}, FockVector(Rational(1))}};
    Poly2 power = out;
    for (int j = 1; j <= ax + az + 1; ++j) {
        power = mul(power, p, ax, az);
        for (auto& [k, c] : power) c *= Rational(1, j);
        for (const auto& [k, c] : power) out[k] += c;
    }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

FockVector at(const Poly2& p, int i, int j) {
    auto it = p.find({i, j});
    return it == p.end() ? FockVector() : it->second;
}

}  // namespace

TEST_CASE("field factors") {
    const auto f = field_factors(FockMonomial(2, {{1, 2}, {3, 1}}));
    using K = FieldFactor::Kind;
    const std::vector<FieldFactor> want{{K::exp_charge, 2}, {K::level_deriv, 1}, {K::level_deriv, 1}, {K::level_deriv, 3}};
    CHECK(f == want);
    const auto one = field_factors(FockMonomial());
    REQUIRE(one.size() == 1);
    CHECK(one[0] == FieldFactor{K::exp_charge, 0});
}

TEST_CASE("h+ examples") {
    for (int n : {-2, 1, 3}) {
        auto s = h_plus_apply(e(n), -3, 3);
        const auto& ctx = *s.context();
        CHECK(s.coeff(key(ctx, {{"x", 0, 0, 1}})) == e(n) * Rational(2 * n));
        CHECK(s.coeff(key(ctx, {{"x", 0, 0, 0}})).is_zero());
    }
    auto s = h_plus_apply(xi(1), -3, 3);
    CHECK(s.coeff(key(*s.context(), {{"x", -1}})) == FockVector(Rational(-2)));
    CHECK(s.terms().size() == 1);
    CHECK(h_plus_apply(FockVector(Rational(1)), -3, 3).terms().empty());
}

TEST_CASE("h- examples") {
    auto s = h_minus_apply(FockVector(Rational(1)), -2, 6);
    const auto& ctx = *s.context();
    for (int m = -2; m <= 6; ++m) CHECK(s.coeff(key(ctx, {{"x", m}})) == (m >= 1 ? xi(m) : FockVector()));
    auto t = h_minus_apply(xi(1), -2, 6);
    CHECK(t.coeff(key(*t.context(), {{"x", 3}})) == xi(1) * xi(3));
    CHECK(charge_shift(e(2), -3) == e(-1));
}

TEST_CASE("normally ordered exponential on a charge state") {
    const int top = 5;
    for (auto [m, n] : {std::pair{1, -1}, {2, 1}, {-1, -2}}) {
        auto s = normal_ordered_apply(FockMonomial(m), e(n), -4, top);
        const auto& ctx = *s.context();
        Poly2 p;
        for (int k = 1; k <= top; ++k) p[{k, 0}] = xi(k) * Rational(m);
        const Poly2 ex = exp_naive(p, top, 0);
        for (int k = -4; k <= top; ++k) {
            REQUIRE(s.known_at({k}));
            CHECK(s.coeff(key(ctx, {{"x", k, 2 * m * n}})) == at(ex, k, 0) * e(m + n));
        }
        // nothing outside elog 2mn
        for (const auto& [k, c] : s.terms()) CHECK(k[ctx.elog_slot(0)] == 2 * m * n);
    }
    auto id = normal_ordered_apply(FockMonomial(), xi(2) * e(1), -3, 3);
    CHECK(id.coeff(key(*id.context(), {{"x", 0}})) == xi(2) * e(1));
    CHECK(id.terms().size() == 1);
}

TEST_CASE("modes of xi_1 are the modes of h'") {
    const FockVector v = e(1) * xi(1) * xi(2) + xi(3, 2) * Rational(1, 3);
    for (int n = -4; n <= 4; ++n) {
        FockVector want;
        if (n >= 1) want = d_xi(n, v) * Rational(2);
        else if (n == 0) want = d_xi(0, v) * Rational(2);
        else want = xi(-n) * v * Rational(-n);
        CHECK(mode(xi(1), n, v) == want);
    }
}

TEST_CASE("upsilon of xi_2 on the vacuum") {
    auto s = upsilon_apply(xi(2), FockVector(Rational(1)), -3, 6);
    const auto& ctx = *s.context();
    for (int k = -3; k <= 6; ++k) {
        REQUIRE(s.known_at({k}));
        CHECK(s.coeff(key(ctx, {{"x", k}})) == (k >= 0 ? xi(k + 2) * binom(Rational(k + 2), 2) : FockVector()));
    }
    CHECK(upsilon_apply(FockVector(), e(1), -3, 3).terms().empty());
}

TEST_CASE("upsilon of exp h-(z) is the shifted exponential") {
    // Upsilon(sum_k p_k z^k, x) 1 = exp(sum_n xi_n ((x+z)^n - x^n))
    const int zo = 3, ax = 4;
    auto ctx = SeriesContext::make({VarSpec::main("x", -3, ax), VarSpec::aux("z", zo)});
    const auto p = p_polynomials(zo);
    FSeries::Terms terms;
    terms[key(*ctx, {})] = FockVector(Rational(1));
    for (int k = 1; k <= zo; ++k) terms[key(*ctx, {{"z", k}})] = p[k - 1];
    const auto u = FSeries::finite(ctx, terms);
    FieldEngine eng(ctx);
    const auto lhs = eng.upsilon(u, ctx->index_of("x"), eng.vacuum());

    Poly2 expo;
    for (int n = 1; n <= ax + zo; ++n)
        for (int j = 1; j <= n; ++j) expo[{n - j, j}] += xi(n) * binom(Rational(n), j);
    std::erase_if(expo, [&](const auto& kv) { return kv.first.first > ax || kv.first.second > zo; });
    const Poly2 rhs = exp_naive(expo, ax, zo);
    for (int i = -3; i <= ax; ++i)
        for (int j = 0; j <= zo; ++j) {
            REQUIRE(lhs.known_at({i}));
            CHECK(lhs.coeff(key(*ctx, {{"x", i}, {"z", j}})) == at(rhs, i, j));
        }
}

TEST_CASE("Y(e^{xi_0}, x) e^{-xi_0}") {
    auto s = Y_apply(e(1), e(-1), -4, 3);
    const auto& ctx = *s.context();
    Poly2 p;
    for (int k = 1; k <= 5; ++k) p[{k, 0}] = xi(k);
    const Poly2 ex = exp_naive(p, 5, 0);
    for (int k = -4; k <= 3; ++k) CHECK(s.coeff(key(ctx, {{"x", k}})) == at(ex, k + 2, 0));
    CHECK(s.coeff(key(ctx, {{"x", 0}})) == xi(2) + xi(1, 2) * Rational(1, 2));

    CHECK(mode(e(1), 1, e(-1)) == FockVector(Rational(1)));
    CHECK(mode(e(1), -1, e(-1)) == xi(2) + xi(1, 2) * Rational(1, 2));
    CHECK(mode(e(1), 2, e(-1)).is_zero());
}

TEST_CASE("modes of the vacuum") {
    const FockVector v = e(-1) * xi(2) + xi(1);
    for (int n = -4; n <= 4; ++n) CHECK(mode(FockVector(Rational(1)), n, v) == (n == -1 ? v : FockVector()));
}

TEST_CASE("charge additivity and lower-bound soundness") {
    const auto basis = basis_monomials(2, 1);
    for (const auto& mu : basis)
        for (const auto& mv : basis) {
            const FockVector u(mu), v(mv);
            auto s = Y_apply(u, v, -6, 3);
            for (const auto& [k, c] : s.terms())
                for (const auto& [mono, r] : c.terms()) CHECK(mono.charge() == mu.charge() + mv.charge());
            const auto table = mode_table(u, v, 2);
            for (int p = table.lb - 3; p < table.lb; ++p) CHECK(mode(u, -p - 1, v).is_zero());
        }
}

TEST_CASE("commutator is 2 log(x-z), independent of v") {
    CHECK(commutator_check(FockVector(Rational(1)), 5).pass);
    auto r = commutator_check(xi(3) * e(2), 5);
    CHECK(r.pass);
    CHECK(r.compared > 0);
}

TEST_CASE("product formula") {
    CHECK(product_formula_check(0, 0, FockVector(Rational(1))).pass);
    auto r = product_formula_check(1, -1, FockVector(Rational(1)), -6, 4, 4);
    CHECK(r.pass);
    CHECK(r.compared > 0);
    CHECK(product_formula_check(2, 1, xi(1) * e(-1)).pass);
    auto bad = product_formula_check(1, 1, FockVector(Rational(1)), -6, 4, 4, Mutation::odd_exponent);
    CHECK_FALSE(bad.pass);
    CHECK(bad.witness.has_value());
}

TEST_CASE("exponential relation") {
    CHECK(exp_relation_check(0, 2, 3).pass);
    CHECK(exp_relation_check(1, 1, 3).pass);
    CHECK(exp_relation_check(-2, 1, 2).pass);
}

TEST_CASE("vacuum and creation") {
    CHECK(vacuum_and_creation_check(FockVector(Rational(1))).pass);
    CHECK(vacuum_and_creation_check(e(2) * xi(1)).pass);
    CHECK(vacuum_and_creation_check(xi(3)).pass);
    auto s = Y_apply(xi(3), FockVector(Rational(1)), -2, 4);
    for (int k = -2; k <= 4; ++k)
        CHECK(s.coeff(key(*s.context(), {{"x", k}})) == (k >= 0 ? xi(k + 3) * binom(Rational(k + 3), 3) : FockVector()));
}

TEST_CASE("Heisenberg relations") {
    ModeCache cache;
    for (const auto& w : basis_monomials(2, 1))
        for (int a = -3; a <= 3; ++a)
            for (int b = -3; b <= 3; ++b) CHECK(heisenberg_check(a, b, FockVector(w), cache).pass);
}

TEST_CASE("Jacobi components") {
    ModeCache cache;
    const FockVector one(Rational(1));
    for (int m = -2; m <= 2; ++m)
        for (int n = -2; n <= 2; ++n)
            for (int k = -2; k <= 2; ++k) {
                CHECK(jacobi_check(one, xi(2), e(1), m, n, k, cache).pass);
                CHECK(jacobi_check(xi(1), one, xi(1) * e(-1), m, n, k, cache).pass);
                CHECK(jacobi_check(xi(1), xi(1), one, m, n, k, cache).pass);
                CHECK(jacobi_check(e(1), e(-1), e(1), m, n, k, cache).pass);
            }
    // Heisenberg from the Jacobi form: m = a, n = 0 gives [(xi_1)_a, (xi_1)_k] on 1
    CHECK(jacobi_check(xi(1), xi(1), e(1) * xi(2), 1, 0, -1).pass);
}

TEST_CASE("generating Jacobi identity") {
    auto zero = jacobi_generating_check({0, 0, 0, 0}, 0, 2);
    CHECK(zero.pass);
    CHECK(zero.compared > 0);
    CHECK(jacobi_generating_check({1, 0, -1, 0}, 0, 2).pass);
    auto r = jacobi_generating_check({1, 1, -1, 0}, 2, 2);
    CHECK(r.pass);
    CHECK(r.compared > 0);
    CHECK(jacobi_generating_check({-1, 1, 0, -1}, 1, 1).pass);

    auto bad = jacobi_generating_check({1, 0, -1, 0}, 0, 2, Mutation::odd_exponent);
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->lhs != bad.witness->rhs);
}

TEST_CASE("evenness guard") {
    for (int k : {-4, -2, 0, 2, 4}) CHECK(evenness_check(k, 2, 3).pass);
    for (int k : {-3, -1, 1, 3}) CHECK_FALSE(evenness_check(k, 2, 3).pass);
}

TEST_CASE("compare_fock") {
    CHECK(compare_fock(xi(1) + e(1), e(1) + xi(1)).pass);
    auto r = compare_fock(xi(1), xi(1) * Rational(2));
    CHECK_FALSE(r.pass);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->lhs == "1/1");
    CHECK(r.witness->rhs == "2/1");
}
