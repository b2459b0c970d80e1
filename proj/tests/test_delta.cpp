#include "helpers.hpp"
#include "logvertex/delta.hpp"

#include <doctest.h>

using namespace logvertex;
using testutil::key;
using R = Series<Rational>;

TEST_CASE("shifted delta against the direct coefficient formula") {
    // y^{-1} delta((x-z)/y) = sum_n (x-z)^n y^{-n-1}; coefficient of x^a y^b z^c is binom(n,c)(-1)^c when a+c = n = -b-1
    auto ctx = delta_context(Window::uniform(5), 6);
    auto d = delta_expand(ctx, DeltaArg{0, 1, 2, -1}, 1);
    CHECK(d.coeff(key(*ctx, {{"x", 0}, {"y", -1}, {"z", 0}})) == 1);
    for (int a = -5; a <= 5; ++a)
        for (int b = -5; b <= 5; ++b)
            for (int c = -5; c <= 5; ++c) {
                REQUIRE(d.known_at({a, b, c}));
                const int n = -b - 1;
                Rational expect = (c >= 0 && a + c == n) ? binom(Rational(n), c) * sign_power(-1, c) : Rational(0);
                CHECK(d.coeff(key(*ctx, {{"x", a}, {"y", b}, {"z", c}})) == expect);
            }
}

TEST_CASE("two- and three-term identities") {
    auto two = two_term_check(Window::uniform(6));
    CHECK(two.pass);
    CHECK(two.compared > 0);
    auto three = three_term_check(Window::uniform(6));
    CHECK(three.pass);
    CHECK(three.compared > 0);

    auto empty = three_term_check(Window::uniform(-1));
    CHECK(empty.pass);
    CHECK(empty.compared == 0);
    CHECK(two_term_check(Window::uniform(-1)).compared == 0);
}

TEST_CASE("three-term pieces cancel in pairs") {
    auto ctx = delta_context(Window::uniform(4), 8);
    auto t = three_term_pieces(ctx);
    auto box = PowBox::uniform(*ctx, 4);
    CHECK(compare(t[0] - t[5], R(ctx), box).pass);
    CHECK(compare(t[2] + t[4], R(ctx), box).pass);
    CHECK(compare(t[1] - t[3], R(ctx), box).pass);
    // no piece vanishes by itself
    for (const auto& p : t) CHECK_FALSE(compare(p, R(ctx), box).pass);
}

TEST_CASE("mutations are caught") {
    auto flipped = three_term_check(Window::uniform(4), Mutation::flip_sign);
    CHECK_FALSE(flipped.pass);
    REQUIRE(flipped.witness);
    CHECK(flipped.witness->lhs != flipped.witness->rhs);
    CHECK_FALSE(two_term_check(Window::uniform(3), Mutation::flip_sign).pass);

    auto ctx = delta_context(Window::uniform(3), 6);
    auto single = delta_expand(ctx, DeltaArg{0, 1, 1, -1}, 2);
    CHECK_FALSE(compare(single, R(ctx), PowBox::uniform(*ctx, 3)).pass);
}

TEST_CASE("derivative identity") {
    for (int n = 0; n <= 4; ++n) CHECK(derivative_identity_check(n, Window::uniform(6)).pass);

    // oracle: (1/n!) d_y^n y^{-1}delta(x/y) = sum_l binom(-l-1, n) x^l y^{-l-1-n}
    auto ctx = SeriesContext::make({VarSpec::main("x", -8, 8), VarSpec::main("y", -8, 8)});
    for (int n = 1; n <= 3; ++n) {
        R lhs = binom_expand(ctx, -n - 1, 0, 1, 1, -1) - binom_expand(ctx, -n - 1, 1, -1, 0, 1);
        for (int a = -6; a <= 6; ++a)
            for (int b = -6; b <= 6; ++b) {
                Rational expect = (a + b == -1 - n) ? binom(Rational(-a - 1), n) : Rational(0);
                CHECK(lhs.coeff(key(*ctx, {{"x", a}, {"y", b}})) == expect);
            }
    }
}

TEST_CASE("logarithmic substitution") {
    CHECK(substitution_check({}, Window::uniform(4)).pass);
    CHECK(substitution_check({0, 1, 0, 0, 0, 0}, Window::uniform(4)).pass);
    CHECK(substitution_check({-1, 2, 1, -1, 0, 0}, Window::uniform(4)).pass);
    CHECK(substitution_check({2, -1, -2, 1, 1, 2}, Window::uniform(3)).pass);
}
