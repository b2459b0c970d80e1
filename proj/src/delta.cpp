#include "logvertex/delta.hpp"

#include "logvertex/window.hpp"

namespace logvertex {

namespace {

using R = Series<Rational>;

constexpr std::size_t X = 0, Y = 1, Z = 2;

CheckReport empty_pass() { return CheckReport{}; }

}  // namespace

ContextPtr delta_context(const Window& w, int margin) {
    auto spec = [&](const char* name, int cap) {
        const int c = std::max(cap, 0) + margin;
        return VarSpec::main(name, -c, c);
    };
    return SeriesContext::make({spec("x", w.cap_x), spec("y", w.cap_y), spec("z", w.cap_z)});
}

PowBox delta_box(const SeriesContext&, const Window& w) {
    return PowBox{{-w.cap_x, -w.cap_y, -w.cap_z}, {w.cap_x, w.cap_y, w.cap_z}};
}

CheckReport two_term_check(const Window& w, Mutation mut) {
    if (w.empty()) return empty_pass();
    return with_enlargement(
        [&](int margin) {
            auto ctx = delta_context(w, margin);
            R lhs = delta_expand(ctx, DeltaArg{X, 1, Z, -1}, Y);
            R rhs = delta_expand(ctx, DeltaArg{Y, 1, Z, 1}, X);
            if (mut == Mutation::flip_sign) rhs = -rhs;
            return compare(lhs, rhs, delta_box(*ctx, w));
        },
        std::max({w.cap_x, w.cap_y, w.cap_z, 2}));
}

std::vector<R> three_term_pieces(const ContextPtr& ctx) {
    std::vector<R> t;
    // ((x-y)-z)^{-1}, (z-(x-y))^{-1}
    t.push_back(taylor_shift(binom_expand(ctx, -1, X, 1, Z, -1), X, Y, -1));
    t.push_back(taylor_shift(binom_expand(ctx, -1, Z, 1, X, -1), X, Y, -1));
    // ((-y+x)-z)^{-1}, (z-(-y+x))^{-1}: write -y+x as -(y-x) and shift y by -x
    t.push_back(taylor_shift(binom_expand(ctx, -1, Y, -1, Z, -1), Y, X, -1));
    t.push_back(taylor_shift(binom_expand(ctx, -1, Z, 1, Y, 1), Y, X, -1));
    // ((y+z)-x)^{-1}, (x-(y+z))^{-1}
    t.push_back(taylor_shift(binom_expand(ctx, -1, Y, 1, X, -1), Y, Z, 1));
    t.push_back(taylor_shift(binom_expand(ctx, -1, X, 1, Y, -1), Y, Z, 1));
    return t;
}

CheckReport three_term_check(const Window& w, Mutation mut) {
    if (w.empty()) return empty_pass();
    return with_enlargement(
        [&](int margin) {
            auto ctx = delta_context(w, margin);
            const auto box = delta_box(*ctx, w);
            const R d1 = delta_expand(ctx, DeltaArg{X, 1, Y, -1}, Z);
            const R d2 = delta_expand(ctx, DeltaArg{Y, -1, X, 1}, Z);
            R d3 = delta_expand(ctx, DeltaArg{Y, 1, Z, 1}, X);
            auto t = three_term_pieces(ctx);
            if (mut == Mutation::flip_sign) {
                d3 = -d3;
                t[4] = -t[4];
                t[5] = -t[5];
            }
            CheckReport report = compare(d1 - d2, d3, box);
            report.merge(compare(t[0] + t[1] - t[2] - t[3], t[4] + t[5], box));
            report.merge(compare(d1, t[0] + t[1], box));
            report.merge(compare(d2, t[2] + t[3], box));
            report.merge(compare(d3, t[4] + t[5], box));
            if (mut == Mutation::none) {
                report.merge(compare(t[0], t[5], box));
                report.merge(compare(t[2], -t[4], box));
                report.merge(compare(t[1], t[3], box));
            }
            return report;
        },
        std::max({w.cap_x, w.cap_y, w.cap_z, 2}));
}

CheckReport derivative_identity_check(int n, const Window& w) {
    if (n < 0) throw std::invalid_argument("derivative order must be >= 0");
    if (w.empty()) return empty_pass();
    return with_enlargement(
        [&](int margin) {
            auto ctx = SeriesContext::make({VarSpec::main("x", -std::max(w.cap_x, 0) - margin, std::max(w.cap_x, 0) + margin),
                                            VarSpec::main("y", -std::max(w.cap_y, 0) - margin, std::max(w.cap_y, 0) + margin)});
            const PowBox box{{-w.cap_x, -w.cap_y}, {w.cap_x, w.cap_y}};
            const R d = delta_expand(ctx, DeltaArg{X, 1, std::nullopt, 1}, Y);
            R by_y = d, by_x = d;
            for (int i = 0; i < n; ++i) {
                by_y = s_derive(Y, by_y);
                by_x = s_derive(X, by_x);
            }
            by_y *= 1 / factorial(n);
            by_x *= sign_power(-1, n) / factorial(n);
            const R binomials = binom_expand(ctx, -n - 1, X, 1, Y, -1) - binom_expand(ctx, -n - 1, Y, -1, X, 1);
            CheckReport report = compare(by_y, by_x, box);
            report.merge(compare(by_y, binomials, box));
            report.merge(compare(by_x, binomials, box));
            return report;
        },
        std::max({w.cap_x, w.cap_y, n + 2}));
}

CheckReport substitution_check(const SubstExponents& f, const Window& w) {
    if (w.empty()) return empty_pass();
    const int reach = std::max({std::abs(f.l1) + std::abs(f.l2), std::abs(f.m1) + std::abs(f.m2),
                                std::abs(f.n1) + std::abs(f.n2)});
    return with_enlargement(
        [&](int margin) {
            auto ctx = delta_context(w, margin);
            auto mono = [&](std::vector<std::pair<std::size_t, std::pair<int, int>>> parts) {
                auto k = ctx->zero_key();
                for (const auto& [v, pe] : parts) {
                    k[ctx->pow_slot(v)] = pe.first;
                    k[ctx->elog_slot(v)] = pe.second;
                }
                return R::monomial(ctx, k, 1);
            };
            const R delta = delta_expand(ctx, DeltaArg{Y, 1, Z, 1}, X);
            const R fx = mono({{X, {f.l1, f.l2}}});
            const R fy = mono({{Y, {f.m1, f.m2}}});
            const R fz = mono({{Z, {f.n1, f.n2}}});
            auto phi_all = [&](const R& s) { return phi(X, phi(Y, phi(Z, s))); };

            const R direct = phi_all(s_mul(delta, s_mul(s_mul(fx, fy), fz)));
            // f(y+z, y, z): the x factor becomes e^{z d/dy} y^{l1} e^{l2 log y}
            const R x_sub = taylor_shift(mono({{Y, {f.l1, f.l2}}}), Y, Z, 1);
            const R via_x = phi_all(s_mul(delta, s_mul(s_mul(x_sub, fy), fz)));
            // f(x, x-z, z): the y factor becomes e^{-z d/dx} x^{m1} e^{m2 log x}
            const R y_sub = taylor_shift(mono({{X, {f.m1, f.m2}}}), X, Z, -1);
            const R via_y = phi_all(s_mul(delta, s_mul(s_mul(fx, y_sub), fz)));

            const auto box = delta_box(*ctx, w);
            CheckReport report = compare(direct, via_x, box);
            report.merge(compare(direct, via_y, box));
            return report;
        },
        std::max({w.cap_x, w.cap_y, w.cap_z, reach, 2}));
}

}  // namespace logvertex
