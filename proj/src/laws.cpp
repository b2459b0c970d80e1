#include "logvertex/laws.hpp"

namespace logvertex {

namespace {

using R = Series<Rational>;
using F = Series<FockVector>;

PowBox caps_box(const SeriesContext& ctx) {
    PowBox b;
    for (auto v : ctx.mains()) {
        b.lo.push_back(ctx.var(v).lower_cap);
        b.hi.push_back(ctx.var(v).upper_cap);
    }
    return b;
}

// x^pow e^{elog log x} (log x)^log for main x = index 0, times aux^deg for aux index aux.
R xmono(const ContextPtr& ctx, int pow, int elog = 0, int log = 0, Rational c = 1) {
    auto k = ctx->zero_key();
    k[ctx->pow_slot(0)] = pow;
    k[ctx->elog_slot(0)] = elog;
    k[ctx->log_slot(0)] = log;
    return R::monomial(ctx, k, c);
}

R aux_power(const ContextPtr& ctx, std::size_t var, int deg, Rational c = 1) {
    auto k = ctx->zero_key();
    k[ctx->deg_slot(var)] = deg;
    return R::monomial(ctx, k, c);
}

R power(R base, int n) {
    R acc = R::constant(base.context(), 1);
    for (int i = 0; i < n; ++i) acc = s_mul(acc, base);
    return acc;
}

}  // namespace

CheckReport log_taylor_check(int k, int j, int aux_order) {
    auto ctx = SeriesContext::make(
        {VarSpec::main("x", std::min(k, 0) - aux_order - 1, std::max(k, 0) + 1), VarSpec::aux("y", aux_order)});
    const std::size_t x = 0, y = 1;
    const R shifted = taylor_shift(xmono(ctx, k, 0, j), x, y, 1);
    const R log_shift = xmono(ctx, 0, 0, 1) + log_expand(s_mul(xmono(ctx, -1), aux_power(ctx, y, 1)));
    const R direct = s_mul(binom_expand(ctx, k, x, 1, y, 1), power(log_shift, j));
    return compare(shifted, direct, caps_box(*ctx));
}

CheckReport associativity_check(int n, int aux_order) {
    const int d = aux_order;
    auto ctx = SeriesContext::make({VarSpec::main("x", std::min(n, 0) - 2 * d - 1, std::max(n, 0) + 1),
                                    VarSpec::aux("y", d), VarSpec::aux("z", d)});
    const std::size_t x = 0, y = 1, z = 2;
    const R yz = aux_power(ctx, y, 1) + aux_power(ctx, z, 1);
    R inner_first(ctx), outer_first(ctx);
    R yz_pow = R::constant(ctx, 1);
    for (int k = 0; k <= 2 * d; ++k) {
        // (x + (y+z))^n: binomial in x with (y+z) expanded
        inner_first += s_mul(xmono(ctx, n - k, 0, 0, binom(Rational(n), k)), yz_pow);
        // ((x+y) + z)^n: binomial in (x+y) with z expanded
        if (k <= d) outer_first += s_mul(binom_expand(ctx, n - k, x, 1, y, 1), aux_power(ctx, z, k, binom(Rational(n), k)));
        yz_pow = s_mul(yz_pow, yz);
    }
    R::Terms oracle;
    for (int a = 0; a <= d; ++a)
        for (int b = 0; b <= d; ++b) {
            auto key = ctx->zero_key();
            key[ctx->pow_slot(x)] = n - a - b;
            key[ctx->deg_slot(y)] = a;
            key[ctx->deg_slot(z)] = b;
            Rational c = binom(Rational(n), a + b) * binom(Rational(a + b), a);
            if (c != 0) oracle.emplace(key, c);
        }
    const auto box = caps_box(*ctx);
    CheckReport report = compare(inner_first, outer_first, box);
    report.merge(compare(inner_first, R::finite(ctx, oracle), box));
    return report;
}

CheckReport automorphism_check(int aux_order) {
    auto ctx = SeriesContext::make({VarSpec::main("x", -6 - aux_order, 8), VarSpec::aux("y", aux_order)});
    const std::size_t x = 0, y = 1;
    const std::vector<R> sample = {xmono(ctx, -2),         xmono(ctx, 3),    xmono(ctx, 0, 0, 1),
                                   xmono(ctx, -1, 0, 2),   xmono(ctx, 1, 1), xmono(ctx, 1, -2, 1, Rational(-3, 2))};
    CheckReport report;
    const auto box = caps_box(*ctx);
    for (const auto& a : sample)
        for (const auto& b : sample)
            report.merge(compare(taylor_shift(s_mul(a, b), x, y), s_mul(taylor_shift(a, x, y), taylor_shift(b, x, y)), box));
    return report;
}

CheckReport phi_derivative_check() {
    auto ctx = SeriesContext::make({VarSpec::main("x", -6, 6), VarSpec::main("y", -4, 4), VarSpec::aux("t", 2)});
    const std::size_t x = 0, y = 1;
    CheckReport report;
    const auto box = caps_box(*ctx);
    R mix(ctx);
    int count = 0;
    for (int n = -2; n <= 2; ++n)
        for (int m = -2; m <= 2; ++m)
            for (auto [p, q] : {std::pair{0, 0}, std::pair{1, -1}, std::pair{-1, 2}})
                for (int t = 0; t <= 1; ++t) {
                    auto k = ctx->zero_key();
                    k[ctx->pow_slot(x)] = n;
                    k[ctx->elog_slot(x)] = m;
                    k[ctx->pow_slot(y)] = p;
                    k[ctx->elog_slot(y)] = q;
                    k[ctx->deg_slot(2)] = t;
                    const R a = R::monomial(ctx, k, 1);
                    report.merge(compare(phi(x, s_derive(x, a)), s_derive(x, phi(x, a)), box));
                    report.merge(compare(phi(y, s_derive(x, a)), s_derive(x, phi(y, a)), box));
                    mix += a * Rational(++count);
                }
    report.merge(compare(phi(x, s_derive(x, mix)), s_derive(x, phi(x, mix)), box));
    return report;
}

CheckReport exp_log_check(int aux_order) {
    auto ctx = SeriesContext::make({VarSpec::main("x", -aux_order - 1, 1), VarSpec::aux("t", aux_order)});
    auto term = [&](int xpow, int tdeg, FockVector c) {
        auto k = ctx->zero_key();
        k[ctx->pow_slot(0)] = xpow;
        k[ctx->deg_slot(1)] = tdeg;
        return F::monomial(ctx, k, c);
    };
    const F one = F::constant(ctx, FockVector(Rational(1)));
    const F w1 = term(0, 1, FockVector::xi(1)) + term(0, 2, FockVector::xi(2) * Rational(1, 2));
    const F w2 = term(-1, 1, FockVector::xi(1) * FockVector::xi(2)) + term(0, 2, FockVector(Rational(3)));
    const auto box = caps_box(*ctx);
    CheckReport report = compare(s_exp(w1 + w2), s_mul(s_exp(w1), s_exp(w2)), box);
    for (const F& w : {w1, w2, w1 + w2}) report.merge(compare(log_expand(s_exp(w) - one), w, box));
    return report;
}

CheckReport p_basis_check(int order) {
    auto ctx = SeriesContext::make({VarSpec::aux("y", order)});
    const auto p = p_polynomials(order);
    F ps(ctx), xis(ctx);
    for (int k = 1; k <= order; ++k) {
        ps += F::monomial(ctx, {k}, p[static_cast<std::size_t>(k - 1)]);
        xis += F::monomial(ctx, {k}, FockVector::xi(k));
    }
    CheckReport report = compare(log_expand(ps), xis, PowBox{});
    report.merge(compare(s_exp(xis), ps + F::constant(ctx, FockVector(Rational(1))), PowBox{}));
    return report;
}

}  // namespace logvertex
