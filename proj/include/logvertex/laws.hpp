#pragma once

// Identities of the series calculus, packaged as checks.

#include "logvertex/check_report.hpp"
#include "logvertex/series.hpp"

namespace logvertex {

/// e^{y d/dx} p against p(x+y) built from (x+y)^k and log(x+y) = log x + log(1+y/x),
/// for p = x^k (log x)^j, to y-order aux_order.
CheckReport log_taylor_check(int k, int j, int aux_order);

/// (x+(y+z))^n = ((x+y)+z)^n with y, z expanded to aux_order, plus the multinomial coefficients.
CheckReport associativity_check(int n, int aux_order);

/// e^{y d/dx}(ab) = (e^{y d/dx}a)(e^{y d/dx}b) over a fixed sample of a, b.
CheckReport automorphism_check(int aux_order);

/// phi_x d/dx = d/dx phi_x on monomials mixing pow/elog slots of x, a second main variable and an aux variable.
CheckReport phi_derivative_check();

/// e^{w1+w2} = e^{w1}e^{w2} and log(e^w) = w on sampled graded arguments.
CheckReport exp_log_check(int aux_order);

/// log(1 + sum_{k<=order} p_k y^k) = sum_{n<=order} xi_n y^n.
CheckReport p_basis_check(int order);

/// Every stored term respects the support metadata (no coefficient below lb etc.).
template <class C>
bool support_consistent(const Series<C>& s) {
    const auto& ctx = *s.context();
    for (const auto& [key, c] : s.terms()) {
        if (s.violates_support(ctx.pows_of(key))) return false;
        for (std::size_t pos = 0; pos < ctx.mains().size(); ++pos) {
            const auto v = ctx.mains()[pos];
            const auto& b = s.meta().main[pos];
            const int q = key[ctx.elog_slot(v)];
            if (q < b.elog_lo || q > b.elog_hi || key[ctx.log_slot(v)] > b.log_max) return false;
        }
    }
    return true;
}

}  // namespace logvertex
