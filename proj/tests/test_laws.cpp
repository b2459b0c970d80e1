#include "logvertex/laws.hpp"

#include <doctest.h>

using namespace logvertex;

TEST_CASE("logarithmic Taylor theorem") {
    for (int k = -4; k <= 4; ++k)
        for (int j = 0; j <= 3; ++j) {
            CAPTURE(k);
            CAPTURE(j);
            auto r = log_taylor_check(k, j, 6);
            CHECK(r.pass);
            CHECK(r.compared > 0);
        }
}

TEST_CASE("expansion associativity") {
    for (int n = -3; n <= 3; ++n)
        for (int d = 0; d <= 5; ++d) {
            CAPTURE(n);
            CAPTURE(d);
            CHECK(associativity_check(n, d).pass);
        }
}

TEST_CASE("automorphism property") { CHECK(automorphism_check(4).pass); }

TEST_CASE("phi commutes with d/dx") {
    auto r = phi_derivative_check();
    CHECK(r.pass);
    CHECK(r.compared > 100);
}

TEST_CASE("exponential rules") { CHECK(exp_log_check(4).pass); }

TEST_CASE("p basis") {
    for (int n = 1; n <= 8; ++n) CHECK(p_basis_check(n).pass);
}
