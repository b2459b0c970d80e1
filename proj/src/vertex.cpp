#include "logvertex/vertex.hpp"

#include "logvertex/window.hpp"

#include <algorithm>
#include <climits>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <tuple>

namespace logvertex {

namespace {

using R = Series<Rational>;

Rational frac(long a, long b) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

Rational parity(long n) { return sign_power(-1, std::labs(n)); }

bool exactly_finite(const FSeries& s) {
    if (s.is_zero_object()) return true;
    if (!s.fully_known()) return false;
    const auto& ctx = *s.context();
    for (std::size_t pos = 0; pos < ctx.mains().size(); ++pos) {
        const auto& b = s.meta().main[pos];
        const auto& v = ctx.var(ctx.mains()[pos]);
        if (b.lb < v.lower_cap || b.ub > v.upper_cap) return false;
    }
    const auto cap = ctx.pow_sum_cap();
    return !cap || s.pow_sum_range().second <= *cap;
}

// c0 x^{s0} (log x)^{l0} d/dxi_0 + sum_{k>=1} ck(k) x^{-k-shift} d/dxi_k, coefficient-wise.
struct LevelOperator {
    Rational c0 = 0;
    int s0 = 0;
    int l0 = 0;
    int shift = 0;
    std::function<Rational(int)> ck;
};

std::vector<int> levels_of(const FockVector& v) {
    std::vector<int> out;
    for (const auto& [m, c] : v.terms())
        for (const auto& [level, power] : m.exponents()) out.push_back(level);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

FSeries apply_level(const FSeries& s, std::size_t x, const LevelOperator& op) {
    const ContextPtr& ctxp = s.context();
    const auto& ctx = *ctxp;
    const bool has0 = op.c0 != 0;
    const bool hask = static_cast<bool>(op.ck);
    if (s.is_zero_object() || (!has0 && !hask)) return FSeries(ctxp);

    const std::size_t ps = ctx.pow_slot(x), ls = ctx.log_slot(x);
    FSeries::Terms terms;
    for (const auto& [key, c] : s.terms()) {
        if (has0) {
            FockVector d = d_xi(0, c);
            if (!d.is_zero()) {
                Exponents k = key;
                k[ps] += op.s0;
                k[ls] += op.l0;
                accumulate(terms, k, FockVector(d * op.c0));
            }
        }
        if (hask) {
            for (int level : levels_of(c)) {
                FockVector d = d_xi(level, c);
                if (d.is_zero()) continue;
                Exponents k = key;
                k[ps] -= level + op.shift;
                accumulate(terms, k, FockVector(d * op.ck(level)));
            }
        }
    }
    // polynomial input: the result is a finite sum, computed in full
    if (exactly_finite(s)) return FSeries::finite(ctxp, terms);

    for (auto it = terms.begin(); it != terms.end();) it = ctx.in_caps(it->first) ? std::next(it) : terms.erase(it);
    const std::size_t pos = ctx.main_pos(x);
    const int ub = s.ub(x);
    if (hask && ub >= kInf)
        throw SummabilityError("annihilation part: powers of " + ctx.var(x).name + " are not bounded above");

    const auto& sb = s.meta().main[pos];
    SeriesMeta meta = s.meta();
    auto& b = meta.main[pos];
    int lb = kInf, nub = -kInf, dlo = kInf, dhi = -kInf;
    if (has0) {
        lb = add_bound(sb.lb, op.s0);
        nub = add_bound(sb.ub, op.s0);
        dlo = add_bound(s.meta().deg_lo, op.s0);
        dhi = add_bound(s.meta().deg_hi, op.s0);
        b.log_max = sb.log_max + op.l0;
    }
    if (hask) {
        // each d/dxi_k removes weight k along with k powers of x
        lb = -kInf;
        nub = std::max(nub, add_bound(sb.ub, -1 - op.shift));
        dlo = std::min(dlo, add_bound(s.meta().deg_lo, -op.shift));
        dhi = std::max(dhi, add_bound(s.meta().deg_hi, -1 - op.shift));
    }
    b.lb = lb;
    b.ub = nub;
    meta.deg_lo = dlo;
    meta.deg_hi = dhi;

    auto mask = std::vector<std::uint8_t>(ctx.box_volume(), 0);
    for (std::size_t idx = 0; idx < mask.size(); ++idx) {
        auto q = ctx.box_point(idx);
        const int p = q[pos];
        bool ok = true;
        if (has0) {
            q[pos] = p - op.s0;
            ok = s.known_at(q);
        }
        for (int j = 1 + op.shift; ok && hask && p + j <= ub; ++j) {
            q[pos] = p + j;
            ok = s.known_at(q);
        }
        mask[idx] = ok ? 1 : 0;
    }
    return FSeries::from_parts(ctxp, std::move(terms), std::move(meta), std::move(mask));
}

LevelOperator derivative_sum() {
    LevelOperator d;
    d.ck = [](int k) -> Rational { return frac(-2, k); };
    return d;
}

// e^{m D}, D = sum_k (-2/k) x^{-k} d/dxi_k.  D strictly lowers the x-power,
// so only finitely many terms reach the box.
FSeries exp_derivative_sum(const FSeries& s, std::size_t x, int m) {
    const LevelOperator d = derivative_sum();
    const int lower = s.context()->var(x).lower_cap;
    FSeries out = s, term = s;
    for (int j = 1;; ++j) {
        term = apply_level(term, x, d) * frac(m, j);
        if (term.is_zero_object()) break;
        out += term;
        if (term.ub(x) < lower) break;
    }
    return out;
}

// e^{q c log x} on every charge-c monomial.
FSeries elog_shift(const FSeries& s, std::size_t x, int q) {
    if (q == 0 || s.is_zero_object()) return s;
    const auto& ctx = *s.context();
    const std::size_t es = ctx.elog_slot(x);
    FSeries::Terms terms;
    for (const auto& [key, c] : s.terms())
        for (const auto& [mono, r] : c.terms()) {
            Exponents k = key;
            k[es] += q * mono.charge();
            accumulate(terms, k, FockVector(mono, r));
        }
    SeriesMeta meta = s.meta();
    const int a = q * meta.charge_lo, b = q * meta.charge_hi;
    const int lo = std::min(a, b), hi = std::max(a, b);
    auto& mb = meta.main[ctx.main_pos(x)];
    mb.elog_lo += lo;
    mb.elog_hi += hi;
    meta.deg_lo = add_bound(meta.deg_lo, lo);
    meta.deg_hi = add_bound(meta.deg_hi, hi);
    return FSeries::from_parts(s.context(), std::move(terms), std::move(meta), s.known_mask());
}

bool trivial_in(const FSeries& s, std::size_t pos) {
    if (s.is_zero_object()) return true;
    const auto& b = s.meta().main[pos];
    return b.lb == 0 && b.ub == 0 && b.elog_lo == 0 && b.elog_hi == 0 && b.log_max == 0;
}

// coefficients free of xi_n and of charge: the annihilation parts act as zero
bool is_scalar_state(const FSeries& s) {
    if (!exactly_finite(s)) return false;
    for (const auto& [key, c] : s.terms())
        for (const auto& [mono, r] : c.terms())
            if (!mono.is_one()) return false;
    return true;
}

int reach_of(const FockVector& u, const FockVector& v) {
    auto max_abs_charge = [](const FockVector& w) {
        int c = 0;
        for (const auto& [m, r] : w.terms()) c = std::max(c, std::abs(m.charge()));
        return c;
    };
    return u.max_weight() + v.max_weight() + 2 * max_abs_charge(u) * max_abs_charge(v) + 1;
}

// Runs build on a one-variable engine with internal margins until the result
// is exact on [xmin, xmax].
FSeries in_window(int xmin, int xmax, int reach, const std::function<FSeries(FieldEngine&)>& build) {
    if (xmin > xmax) throw std::invalid_argument("empty x-window");
    auto target = SeriesContext::make({VarSpec::main("x", xmin, xmax)});
    return with_enlargement(
        [&](int margin) {
            auto ctx = SeriesContext::make(
                {VarSpec::main("x", std::min(xmin, -reach) - margin, std::max(xmax, 0) + margin)});
            FieldEngine engine(ctx);
            FSeries out = embed(build(engine), target, {0});
            if (!out.fully_known()) throw WindowError("x-window not exact");
            return out;
        },
        2);
}

nlohmann::json fock_exps_json(const FockMonomial& m) {
    nlohmann::json xi = nlohmann::json::object();
    for (const auto& [level, power] : m.exponents()) xi[std::to_string(level)] = power;
    return {{"charge", m.charge()}, {"xi", xi}};
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<FieldFactor> field_factors(const FockMonomial& u) {
    std::vector<FieldFactor> out{{FieldFactor::Kind::exp_charge, u.charge()}};
    for (const auto& [level, power] : u.exponents())
        for (int i = 0; i < power; ++i) out.push_back({FieldFactor::Kind::level_deriv, level});
    return out;
}

FockVector charge_shift(const FockVector& v, int m) {
    FockVector out;
    for (const auto& [mono, c] : v.terms()) out.add_term(mono.with_charge(mono.charge() + m), c);
    return out;
}

FSeries charge_shift(const FSeries& s, int m) {
    if (m == 0 || s.is_zero_object()) return s;
    FSeries::Terms terms;
    for (const auto& [key, c] : s.terms()) terms.emplace(key, charge_shift(c, m));
    SeriesMeta meta = s.meta();
    meta.charge_lo += m;
    meta.charge_hi += m;
    return FSeries::from_parts(s.context(), std::move(terms), std::move(meta), s.known_mask());
}

FieldEngine::FieldEngine(ContextPtr ctx) : ctx_(std::move(ctx)) {}

FSeries FieldEngine::state(const FockVector& v) const { return FSeries::constant(ctx_, v); }

const FSeries& FieldEngine::creation_series(std::size_t x, int n) {
    auto it = creation_.find({x, n});
    if (it != creation_.end()) return it->second;
    detail::require_main(*ctx_, x, "creation series");
    // sum_{j >= max(n,1)} binom(j,n) xi_j x^{j-n}
    FSeries::Terms terms;
    const int cap = ctx_->var(x).upper_cap;
    for (int j = std::max(n, 1); j - n <= cap; ++j) {
        auto k = ctx_->zero_key();
        k[ctx_->pow_slot(x)] = j - n;
        terms.emplace(k, FockVector::xi(j) * binom(Rational(j), n));
    }
    SeriesMeta meta;
    meta.zero = false;
    meta.main.assign(ctx_->mains().size(), MainBounds{});
    auto& b = meta.main[ctx_->main_pos(x)];
    b.lb = n == 0 ? 1 : 0;
    b.ub = kInf;
    meta.deg_lo = -n;
    meta.deg_hi = kInf;
    meta.aux_hi = 0;
    auto s = FSeries::from_parts(ctx_, std::move(terms), std::move(meta),
                                 std::vector<std::uint8_t>(ctx_->box_volume(), 1));
    return creation_.emplace(std::pair{x, n}, std::move(s)).first->second;
}

const FSeries& FieldEngine::exp_creation_series(std::size_t x, int m) {
    auto it = exp_creation_.find({x, m});
    if (it != exp_creation_.end()) return it->second;
    FSeries e = s_exp(creation_series(x, 0) * Rational(m));
    return exp_creation_.emplace(std::pair{x, m}, std::move(e)).first->second;
}

FSeries FieldEngine::h_plus(const FSeries& s, std::size_t x) const {
    detail::require_main(*ctx_, x, "h_plus");
    LevelOperator op = derivative_sum();
    op.c0 = 2;
    op.l0 = 1;
    return apply_level(s, x, op);
}

FSeries FieldEngine::h_minus(const FSeries& s, std::size_t x) { return s_mul(creation_series(x, 0), s); }

FSeries FieldEngine::annihilate(const FSeries& s, std::size_t x, int n) const {
    if (n < 1) throw std::invalid_argument("annihilate: level must be >= 1");
    detail::require_main(*ctx_, x, "annihilate");
    // (1/n!) d^n/dx^n of 2 log x and of -2 x^{-k}/k
    LevelOperator op;
    op.c0 = 2 * parity(n - 1) * frac(1, n);
    op.s0 = -n;
    op.shift = n;
    op.ck = [n](int k) -> Rational { return frac(-2, k) * binom(Rational(-k), n); };
    return apply_level(s, x, op);
}

FSeries FieldEngine::create(const FSeries& s, std::size_t x, int n) {
    if (n < 1) throw std::invalid_argument("create: level must be >= 1");
    return s_mul(creation_series(x, n), s);
}

FSeries FieldEngine::exp_plus(const FSeries& s, std::size_t x, int m) const {
    detail::require_main(*ctx_, x, "exp_plus");
    if (m == 0) return s;
    return elog_shift(exp_derivative_sum(s, x, m), x, 2 * m);
}

FSeries FieldEngine::exp_minus(const FSeries& s, std::size_t x, int m) {
    if (m == 0) return s;
    return charge_shift(s_mul(exp_creation_series(x, m), s), m);
}

FSeries FieldEngine::normal_ordered(const FockMonomial& u, std::size_t x, const FSeries& s) {
    detail::require_main(*ctx_, x, "normal_ordered");
    return exp_minus(normal_ordered_inner(u, x, s), x, u.charge());
}

// everything but the final e^{m h^-(x)}
FSeries FieldEngine::normal_ordered_inner(const FockMonomial& u, std::size_t x, const FSeries& s) {
    const int m = u.charge();
    const auto& ex = u.exponents();
    const FSeries base = exp_plus(s, x, m);
    FSeries total(ctx_);
    // l[i] copies of xi_{level i} contribute their creation part, the rest annihilate
    std::vector<int> l(ex.size(), 0);
    while (true) {
        FSeries t = base;
        Rational mult = 1;
        for (std::size_t i = 0; i < ex.size() && !t.is_zero_object(); ++i)
            for (int r = 0; r < ex[i].second - l[i] && !t.is_zero_object(); ++r) t = annihilate(t, x, ex[i].first);
        if (!t.is_zero_object()) {
            for (std::size_t i = 0; i < ex.size(); ++i) {
                for (int r = 0; r < l[i]; ++r) t = create(t, x, ex[i].first);
                mult *= binom(Rational(ex[i].second), l[i]);
            }
            total += t * mult;
        }
        std::size_t i = 0;
        for (; i < l.size(); ++i) {
            if (l[i] < ex[i].second) {
                ++l[i];
                break;
            }
            l[i] = 0;
        }
        if (i == l.size()) break;
    }
    return total;
}

// On a scalar state every annihilation part gives zero, so the image of
// prod xi_n^{a_n} is the product of creation parts; memoized by monomial.
const FSeries& FieldEngine::creation_chain(const FockMonomial& xi_part, std::size_t x, const FSeries& s,
                                           std::map<FockMonomial, FSeries>& memo) {
    auto it = memo.find(xi_part);
    if (it != memo.end()) return it->second;
    if (xi_part.exponents().empty()) return memo.emplace(xi_part, s).first->second;
    const int top = xi_part.max_level();
    FSeries next = create(creation_chain(xi_part.adjusted(top, -1), x, s, memo), x, top);
    return memo.emplace(xi_part, std::move(next)).first->second;
}

FSeries FieldEngine::upsilon(const FockVector& u, std::size_t x, const FSeries& s) {
    FSeries total(ctx_);
    for (const auto& [mono, c] : u.terms()) total += normal_ordered(mono, x, s) * c;
    return total;
}

FSeries FieldEngine::upsilon(const FSeries& u, std::size_t x, const FSeries& s) {
    const auto& ctx = *ctx_;
    detail::require_same_context(u.context(), ctx_);
    detail::require_same_context(s.context(), ctx_);
    detail::require_main(ctx, x, "upsilon");
    if (u.is_zero_object() || s.is_zero_object()) return FSeries(ctx_);
    // e^{m h^-(x)} commutes with the shifts by operator terms: apply it once per charge
    std::map<int, FSeries::Terms> parts;
    for (const auto& [key, c] : u.terms())
        for (const auto& [charge, piece] : charge_decompose(c)) parts[charge].emplace(key, piece);
    for (int m = u.meta().charge_lo; m <= u.meta().charge_hi; ++m) parts.try_emplace(m);
    const bool scalar = is_scalar_state(s);
    std::map<FockMonomial, FSeries> images, chain;
    FSeries total(ctx_);
    for (auto& [m, terms] : parts) {
        SeriesMeta meta = u.meta();
        meta.charge_lo = meta.charge_hi = m;
        const FSeries um = FSeries::from_parts(ctx_, std::move(terms), meta, u.known_mask());
        total += exp_minus(convolve_inner(um, x, s, scalar, images, chain), x, m);
    }
    return total;
}

FSeries FieldEngine::convolve_inner(const FSeries& u, std::size_t x, const FSeries& s, bool scalar,
                                    std::map<FockMonomial, FSeries>& images, std::map<FockMonomial, FSeries>& chain) {
    const auto& ctx = *ctx_;
    detail::require_same_context(u.context(), ctx_);
    detail::require_same_context(s.context(), ctx_);
    detail::require_main(ctx, x, "upsilon");
    const std::size_t m = ctx.mains().size();
    const std::size_t xpos = ctx.main_pos(x);
    if (!trivial_in(u, xpos)) throw std::invalid_argument("upsilon: operator series depends on its own variable");
    std::vector<bool> from_u(m, false);
    for (std::size_t pos = 0; pos < m; ++pos) {
        if (pos == xpos || trivial_in(u, pos)) continue;
        if (!trivial_in(s, pos)) throw std::invalid_argument("upsilon: operator and state share a main variable");
        from_u[pos] = true;
    }
    if (u.is_zero_object() || s.is_zero_object()) return FSeries(ctx_);

    std::map<std::vector<int>, std::vector<FockMonomial>> by_pows;
    for (const auto& [key, c] : u.terms()) {
        auto& list = by_pows[ctx.pows_of(key)];
        for (const auto& [mono, r] : c.terms()) {
            if (!images.count(mono))
                images.emplace(mono, scalar ? creation_chain(mono.with_charge(0), x, s, chain)
                                            : normal_ordered_inner(mono, x, s));
            list.push_back(mono);
        }
    }

    FSeries::Terms terms;
    const std::size_t ks = ctx.key_size();
    Exponents key(ks);
    for (const auto& [ku, c] : u.terms())
        for (const auto& [mono, r] : c.terms())
            for (const auto& [ki, ci] : images.at(mono).terms()) {
                for (std::size_t i = 0; i < ks; ++i) key[i] = ku[i] + ki[i];
                if (!ctx.in_caps(key)) continue;
                accumulate(terms, key, FockVector(ci * r));
            }

    SeriesMeta meta;
    meta.zero = false;
    meta.main.assign(m, MainBounds{});
    if (exactly_finite(u)) {
        // every operator term is stored: take the union of the shifted images
        bool first = true;
        for (const auto& [ku, c] : u.terms()) {
            int deg = 0;
            for (std::size_t pos = 0; pos < m; ++pos) {
                const std::size_t v = ctx.mains()[pos];
                deg += ku[ctx.pow_slot(v)] + ku[ctx.elog_slot(v)];
            }
            int aux = 0;
            for (std::size_t v : ctx.auxes()) aux += ku[ctx.deg_slot(v)];
            deg += aux;
            for (const auto& [mono, r] : c.terms()) {
                const auto& im = images.at(mono);
                if (im.is_zero_object()) continue;
                SeriesMeta sh = im.meta();
                for (std::size_t pos = 0; pos < m; ++pos) {
                    const std::size_t v = ctx.mains()[pos];
                    auto& b = sh.main[pos];
                    b.lb = add_bound(b.lb, ku[ctx.pow_slot(v)]);
                    b.ub = add_bound(b.ub, ku[ctx.pow_slot(v)]);
                    b.elog_lo += ku[ctx.elog_slot(v)];
                    b.elog_hi += ku[ctx.elog_slot(v)];
                    b.log_max += ku[ctx.log_slot(v)];
                }
                sh.deg_lo = add_bound(sh.deg_lo, deg);
                sh.deg_hi = add_bound(sh.deg_hi, deg);
                sh.aux_hi = add_bound(sh.aux_hi, aux);
                if (first) {
                    meta = sh;
                    first = false;
                    continue;
                }
                for (std::size_t pos = 0; pos < m; ++pos) {
                    auto& a = meta.main[pos];
                    const auto& b = sh.main[pos];
                    a.lb = std::min(a.lb, b.lb);
                    a.ub = std::max(a.ub, b.ub);
                    a.elog_lo = std::min(a.elog_lo, b.elog_lo);
                    a.elog_hi = std::max(a.elog_hi, b.elog_hi);
                    a.log_max = std::max(a.log_max, b.log_max);
                }
                meta.deg_lo = std::min(meta.deg_lo, sh.deg_lo);
                meta.deg_hi = std::max(meta.deg_hi, sh.deg_hi);
                meta.charge_lo = std::min(meta.charge_lo, sh.charge_lo);
                meta.charge_hi = std::max(meta.charge_hi, sh.charge_hi);
                meta.aux_hi = std::max(meta.aux_hi, sh.aux_hi);
            }
        }
        if (first) return FSeries(ctx_);
    } else {
        // Upsilon(e^{a xi_0}..., x) on charge c adds e^{2ac log x} and lowers
        // the weighted degree by the weight it consumes
        const int p[4] = {u.meta().charge_lo * s.meta().charge_lo, u.meta().charge_lo * s.meta().charge_hi,
                          u.meta().charge_hi * s.meta().charge_lo, u.meta().charge_hi * s.meta().charge_hi};
        const int plo = 2 * *std::min_element(p, p + 4), phi_ = 2 * *std::max_element(p, p + 4);
        for (std::size_t pos = 0; pos < m; ++pos) {
            const auto& a = u.meta().main[pos];
            const auto& b = s.meta().main[pos];
            auto& o = meta.main[pos];
            if (pos == xpos) {
                o.lb = scalar ? b.lb : -kInf;
                o.ub = kInf;
                o.elog_lo = b.elog_lo + (scalar ? 0 : plo);
                o.elog_hi = b.elog_hi + (scalar ? 0 : phi_);
                o.log_max = b.log_max;
            } else {
                o = MainBounds{add_bound(a.lb, b.lb), add_bound(a.ub, b.ub), a.elog_lo + b.elog_lo,
                               a.elog_hi + b.elog_hi, a.log_max + b.log_max};
            }
        }
        meta.deg_lo = add_bound(add_bound(u.meta().deg_lo, s.meta().deg_lo), std::min(plo, 0));
        meta.deg_hi = kInf;
        meta.charge_lo = s.meta().charge_lo;
        meta.charge_hi = s.meta().charge_hi;
        meta.aux_hi = add_bound(u.meta().aux_hi, s.meta().aux_hi);
    }

    std::vector<std::uint8_t> mask(ctx.box_volume(), 0);
    for (std::size_t idx = 0; idx < mask.size(); ++idx) {
        const auto p = ctx.box_point(idx);
        std::vector<int> q(m, 0), rest = p;
        for (std::size_t pos = 0; pos < m; ++pos)
            if (from_u[pos]) {
                q[pos] = p[pos];
                rest[pos] = 0;
            }
        bool ok = u.known_at(q);
        if (ok) {
            auto it = by_pows.find(q);
            if (it != by_pows.end())
                for (const auto& mono : it->second)
                    if (!(ok = images.at(mono).known_at(rest))) break;
        }
        mask[idx] = ok ? 1 : 0;
    }
    return FSeries::from_parts(ctx_, std::move(terms), std::move(meta), std::move(mask));
}

// ---------------------------------------------------------------------------

FSeries h_plus_apply(const FockVector& v, int xmin, int xmax) {
    return in_window(xmin, xmax, v.max_weight() + 1, [&](FieldEngine& e) { return e.h_plus(e.state(v), 0); });
}

FSeries h_minus_apply(const FockVector& v, int xmin, int xmax) {
    return in_window(xmin, xmax, 1, [&](FieldEngine& e) { return e.h_minus(e.state(v), 0); });
}

FSeries normal_ordered_apply(const FockMonomial& u, const FockVector& v, int xmin, int xmax) {
    return in_window(xmin, xmax, reach_of(FockVector(u), v),
                     [&](FieldEngine& e) { return e.normal_ordered(u, 0, e.state(v)); });
}

FSeries upsilon_apply(const FockVector& u, const FockVector& v, int xmin, int xmax) {
    return in_window(xmin, xmax, reach_of(u, v), [&](FieldEngine& e) { return e.upsilon(u, 0, e.state(v)); });
}

FSeries Y_apply(const FockVector& u, const FockVector& v, int xmin, int xmax) {
    return in_window(xmin, xmax, reach_of(u, v),
                     [&](FieldEngine& e) { return phi(0, e.upsilon(u, 0, e.state(v))); });
}

ModeTable mode_table(const FockVector& u, const FockVector& v, int top) {
    const int lo = -reach_of(u, v);
    const FSeries y = Y_apply(u, v, lo, std::max(top, lo));
    ModeTable t;
    t.top = top;
    if (y.is_zero_object()) {
        t.lb = top + 1;
        return t;
    }
    t.lb = y.lb(0);
    if (t.lb < lo) throw std::logic_error("mode_table: lower bound below the computed window");
    for (const auto& [key, c] : y.terms()) {
        const int p = key[y.context()->pow_slot(0)];
        if (p <= top) t.modes.emplace(-p - 1, c);
    }
    return t;
}

FockVector mode(const FockVector& u, int n, const FockVector& v) {
    ModeCache cache;
    return cache.mode(u, n, v);
}

const ModeCache::Entry& ModeCache::entry(const FockMonomial& u, const FockMonomial& v, int need_top) {
    auto it = memo_.find({u, v});
    if (it != memo_.end() && it->second.top >= need_top) return it->second;
    const FockVector fu(u), fv(v);
    const int reach = reach_of(fu, fv);
    int top = std::max(need_top, 2);
    if (it != memo_.end()) top = std::max(top, 2 * it->second.top + 2);

    Entry e;
    e.top = top;
    const FSeries y = Y_apply(fu, fv, -reach, top);
    if (y.is_zero_object()) {
        e.lb = kInf;
    } else {
        e.lb = y.lb(0);
        if (e.lb < -reach) throw std::logic_error("ModeCache: lower bound below the computed window");
        for (const auto& [key, c] : y.terms()) e.by_power.emplace(key[y.context()->pow_slot(0)], c);
    }
    return memo_.insert_or_assign({u, v}, std::move(e)).first->second;
}

FockVector ModeCache::mode(const FockVector& u, int n, const FockVector& v) {
    FockVector out;
    const int p = -n - 1;
    for (const auto& [um, uc] : u.terms())
        for (const auto& [vm, vc] : v.terms()) {
            const Entry& e = entry(um, vm, std::max(p, INT_MIN + 1));
            if (p < e.lb) continue;
            auto it = e.by_power.find(p);
            if (it != e.by_power.end()) out += it->second * (uc * vc);
        }
    return out;
}

int ModeCache::max_mode(const FockVector& u, const FockVector& v) {
    int best = INT_MIN;
    for (const auto& [um, uc] : u.terms())
        for (const auto& [vm, vc] : v.terms()) {
            const Entry& e = entry(um, vm, INT_MIN + 1);
            if (e.lb < kInf) best = std::max(best, -e.lb - 1);
        }
    return best;
}

CheckReport compare_fock(const FockVector& lhs, const FockVector& rhs) {
    CheckReport report;
    auto ia = lhs.terms().begin(), ib = rhs.terms().begin();
    const auto ea = lhs.terms().end(), eb = rhs.terms().end();
    while (ia != ea || ib != eb) {
        const FockMonomial* mono;
        Rational l = 0, r = 0;
        if (ib == eb || (ia != ea && ia->first < ib->first)) {
            mono = &ia->first;
            l = ia->second;
            ++ia;
        } else if (ia == ea || ib->first < ia->first) {
            mono = &ib->first;
            r = ib->second;
            ++ib;
        } else {
            mono = &ia->first;
            l = ia->second;
            r = ib->second;
            ++ia;
            ++ib;
        }
        ++report.compared;
        if (l != r && report.pass) {
            report.pass = false;
            report.witness = Witness{render(*mono), fock_exps_json(*mono), to_pq_string(l), to_pq_string(r)};
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// checks

CheckReport commutator_check(const FockVector& v, int caps) {
    if (caps < 0) return CheckReport{};
    return with_enlargement(
        [&](int margin) {
            const int c = caps + margin;
            auto ctx = SeriesContext::make({VarSpec::main("x", -c, c), VarSpec::main("z", -c, c)});
            const std::size_t X = 0, Z = 1;
            FieldEngine e(ctx);
            auto commutator = [&](const FSeries& s) {
                FSeries out = e.h_plus(e.h_minus(s, Z), X) - e.h_minus(e.h_plus(s, X), Z);
                // the xi_0 summand: e^{-xi_0} [h^+(x), e^{xi_0}]
                out += charge_shift(e.h_plus(charge_shift(s, 1), X), -1) - e.h_plus(s, X);
                return out;
            };
            auto lk = ctx->zero_key();
            lk[ctx->log_slot(X)] = 1;
            const R two_log = taylor_shift(R::monomial(ctx, lk, 2), X, Z, -1);
            const FSeries sv = e.state(v);
            const FSeries cv = commutator(sv);
            const PowBox box{{-caps, -caps}, {caps, caps}};
            CheckReport report = compare(cv, s_mul(promote(two_log), sv), box);
            report.merge(compare(cv, s_mul(commutator(e.vacuum()), sv), box));
            return report;
        },
        2);
}

CheckReport product_formula_check(int m, int n, const FockVector& v, int xmin, int xmax, int z_order, Mutation mut) {
    const int zmin = -v.max_weight();
    if (xmin > xmax || z_order < zmin) return CheckReport{};
    return with_enlargement(
        [&](int margin) {
            auto ctx = SeriesContext::make({VarSpec::main("x", xmin - margin, std::max(xmax, 0) + margin),
                                            VarSpec::main("z", zmin - margin, std::max(z_order, 0) + margin)});
            const std::size_t X = 0, Z = 1;
            FieldEngine e(ctx);
            const FSeries sv = e.state(v);
            const FSeries lhs = e.upsilon(FockVector::charge(m), X, e.upsilon(FockVector::charge(n), Z, sv));
            // joint normal ordering: both creation parts left of both annihilation parts
            const FSeries ann = e.exp_plus(e.exp_plus(sv, Z, n), X, m);
            const FSeries joint = e.exp_minus(e.exp_minus(ann, Z, n), X, m);
            auto k = ctx->zero_key();
            k[ctx->elog_slot(X)] = 2 * m * n + (mut == Mutation::odd_exponent ? 1 : 0);
            const R scalar = taylor_shift(R::monomial(ctx, k, 1), X, Z, -1);
            const FSeries rhs = s_mul(promote(scalar), joint);
            return compare(lhs, rhs, PowBox{{xmin, zmin}, {xmax, z_order}});
        },
        2);
}

CheckReport exp_relation_check(int m, int n, int aux_order) {
    const int d = std::max(aux_order, 0);
    auto ctx = SeriesContext::make({VarSpec::main("x", -d - 2, 2), VarSpec::aux("y", d)});
    const std::size_t X = 0, Y = 1;
    FieldEngine e(ctx);
    FSeries::Terms hy;
    for (int j = 1; j <= d; ++j) {
        auto k = ctx->zero_key();
        k[ctx->deg_slot(Y)] = j;
        hy.emplace(k, FockVector::xi(j) * Rational(n));
    }
    const FSeries ey = charge_shift(s_exp(FSeries::finite(ctx, hy)), n);
    auto k = ctx->zero_key();
    k[ctx->elog_slot(X)] = -2 * m * n;
    const FSeries rhs = s_mul(promote(taylor_shift(R::monomial(ctx, k, 1), X, Y, -1)), ey);
    const PowBox box{{-d - 2}, {2}};
    CheckReport report = compare(e.exp_plus(ey, X, -m), rhs, box);

    // y = 0
    const FSeries lhs0 = e.exp_plus(e.state(FockVector::charge(n)), X, -m);
    report.merge(compare(lhs0, FSeries::monomial(ctx, k, FockVector::charge(n)), box));
    return report;
}

CheckReport vacuum_and_creation_check(const FockVector& u) {
    const int w = u.max_weight();
    const FockVector one(Rational(1));
    const FSeries id = Y_apply(one, u, -2, 2);
    CheckReport report = compare(id, FSeries::constant(id.context(), u), PowBox{{-2}, {2}});

    const FSeries created = Y_apply(u, one, -w - 2, w + 2);
    if (!created.is_zero_object() && created.lb(0) < 0) {
        Witness wit{"lb(x)", nlohmann::json{{"x", created.lb(0)}}, std::to_string(created.lb(0)), ">= 0"};
        report.merge(CheckReport::failure(wit, 1));
    }
    report.merge(compare(created, FSeries(created.context()), PowBox{{-w - 2}, {-1}}));
    report.merge(compare(created, FSeries::constant(created.context(), u), PowBox{{0}, {0}}));
    return report;
}

CheckReport heisenberg_check(int a, int b, const FockVector& w, ModeCache& cache) {
    const FockVector x1 = FockVector::xi(1);
    const FockVector lhs = cache.mode(x1, a, cache.mode(x1, b, w)) - cache.mode(x1, b, cache.mode(x1, a, w));
    const FockVector rhs = a + b == 0 ? w * Rational(2 * a) : FockVector();
    return compare_fock(lhs, rhs);
}

CheckReport jacobi_check(const FockVector& u, const FockVector& v, const FockVector& w, int m, int n, int k,
                         ModeCache& cache) {
    auto md = [&](const FockVector& p, int j, const FockVector& q) { return cache.mode(p, j, q); };
    FockVector lhs, rhs;

    const int vw = cache.max_mode(v, w), uw = cache.max_mode(u, w);
    int imax = std::max(vw == INT_MIN ? -1 : vw - k, uw == INT_MIN ? -1 : uw - m);
    if (n >= 0) imax = std::min(imax, n);
    for (int i = 0; i <= imax; ++i) {
        const Rational c = parity(i) * binom(Rational(n), i);
        if (c == 0) continue;
        if (vw != INT_MIN && k + i <= vw) lhs += md(u, m + n - i, md(v, k + i, w)) * c;
        if (uw != INT_MIN && m + i <= uw) lhs -= md(v, n + k - i, md(u, m + i, w)) * (c * parity(n));
    }

    const int uv = cache.max_mode(u, v);
    int imax2 = uv == INT_MIN ? -1 : uv - n;
    if (m >= 0) imax2 = std::min(imax2, m);
    for (int i = 0; i <= imax2; ++i) {
        const Rational c = binom(Rational(m), i);
        if (c == 0) continue;
        rhs += md(md(u, n + i, v), m + k - i, w) * c;
    }
    return compare_fock(lhs, rhs);
}

CheckReport jacobi_check(const FockVector& u, const FockVector& v, const FockVector& w, int m, int n, int k) {
    ModeCache cache;
    return jacobi_check(u, v, w, m, n, k, cache);
}

namespace {

constexpr std::size_t GX = 0, GY = 1, GZ = 2, GX1 = 3, GY1 = 4;

ContextPtr generating_context(int caps, int aux_order) {
    return SeriesContext::make({VarSpec::main("x", -caps, caps), VarSpec::main("y", -caps, caps),
                                VarSpec::main("z", -caps, caps), VarSpec::aux("x1", aux_order),
                                VarSpec::aux("y1", aux_order)});
}

// (z + x_i - y_j)^{-k} by Taylor shifts of z^{-k}
R shifted_power(const ContextPtr& ctx, int k, bool with_x1, bool with_y1) {
    auto key = ctx->zero_key();
    key[ctx->pow_slot(GZ)] = -k;
    R out = R::monomial(ctx, key, 1);
    if (with_x1) out = taylor_shift(out, GZ, GX1, 1);
    if (with_y1) out = taylor_shift(out, GZ, GY1, -1);
    return out;
}

// (-z - x_i + y_j)^{-k}: binomial in -z with -x1 expanded, then z -> z - y1
R swapped_power(const ContextPtr& ctx, int k, bool with_x1, bool with_y1) {
    R out(ctx);
    if (with_x1) {
        out = binom_expand(ctx, -k, GZ, -1, GX1, -1);
    } else {
        auto key = ctx->zero_key();
        key[ctx->pow_slot(GZ)] = -k;
        out = R::monomial(ctx, key, sign_power(-1, std::labs(k)));
    }
    if (with_y1) out = taylor_shift(out, GZ, GY1, -1);
    return out;
}

// e^{c sum_{k>=1} xi_k t^k} for an aux variable t
FSeries aux_exponential(const ContextPtr& ctx, std::size_t t, int c) {
    if (c == 0) return FSeries::constant(ctx, FockVector(Rational(1)));
    FSeries::Terms terms;
    for (int j = 1; j <= ctx->var(t).upper_cap; ++j) {
        auto key = ctx->zero_key();
        key[ctx->deg_slot(t)] = j;
        terms.emplace(key, FockVector::xi(j) * Rational(c));
    }
    return s_exp(FSeries::finite(ctx, terms));
}

}  // namespace

CheckReport evenness_check(int k, int aux_order, int window) {
    const int d = std::max(aux_order, 0);
    return with_enlargement(
        [&](int margin) {
            auto ctx = generating_context(window + std::abs(k) + margin, d);
            const PowBox box = PowBox::uniform(*ctx, window + std::abs(k));
            CheckReport report;
            for (bool bx : {false, true})
                for (bool by : {false, true})
                    report.merge(compare(swapped_power(ctx, k, bx, by), shifted_power(ctx, k, bx, by), box));
            return report;
        },
        2 * d + 2);
}

CheckReport jacobi_generating_check(const GeneratingCharges& g, int aux_order, int window, Mutation mut) {
    const int d = std::max(aux_order, 0);
    if (window < 0) return CheckReport{};
    const int mi[2] = {g.m0, g.m1};
    const int nj[2] = {g.n0, g.n1};
    // polynomial factors first, so no partial product dips below the lower caps
    std::vector<std::tuple<int, bool, bool>> factors;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            int k = 2 * mi[i] * nj[j];
            if (mut == Mutation::odd_exponent && i == 0 && j == 0) k += 1;
            if (k != 0) factors.emplace_back(k, i == 1, j == 1);
        }
    std::sort(factors.begin(), factors.end());
    // the closed forms reach down to z^{-depth}
    int depth = 2 * d;
    for (const auto& f : factors) depth += std::max(std::get<0>(f), 0);
    return with_enlargement(
        [&](int margin) {
            // d1 is needed far below the box, the products reach depth further
            const int lo = -(2 * window + 1 + depth) - margin, hi = 3 * window + 1 + depth + d + margin;
            auto ctx = SeriesContext::make({VarSpec::main("x", lo, hi), VarSpec::main("y", lo, hi),
                                            VarSpec::main("z", lo, hi), VarSpec::aux("x1", d), VarSpec::aux("y1", d)},
                                           hi);
            FieldEngine e(ctx);
            const PowBox box = PowBox::uniform(*ctx, window);
            const FSeries one = e.vacuum();
            const FSeries a = charge_shift(aux_exponential(ctx, GX1, -g.m1), -(g.m0 + g.m1));
            const FSeries b = charge_shift(aux_exponential(ctx, GY1, g.n1), g.n0 + g.n1);
            // delta times s, then phi; only the part landing in box is formed
            auto times = [&](const FSeries& delta, const FSeries& s) {
                PowBox target = box;
                for (std::size_t k = 0; k < target.lo.size(); ++k) {
                    const auto& mb = s.meta().main[k];
                    target.lo[k] -= mb.elog_hi;
                    target.hi[k] -= mb.elog_lo;
                }
                return phi(GX, phi(GY, phi(GZ, s_mul_within(delta, s, target))));
            };

            const FSeries d1 = promote(delta_expand(ctx, DeltaArg{GX, 1, GY, -1}, GZ));
            const FSeries d2 = promote(delta_expand(ctx, DeltaArg{GY, 1, GX, -1}, GZ, -1));
            const FSeries d3 = promote(delta_expand(ctx, DeltaArg{GY, 1, GZ, 1}, GX));

            const FSeries l1 = times(d1, e.upsilon(a, GX, e.upsilon(b, GY, one)));
            const FSeries l2 = times(d2, e.upsilon(b, GY, e.upsilon(a, GX, one)));
            const FSeries l3 = times(d3, e.upsilon(e.upsilon(a, GZ, b), GY, one));

            // joint creation exponential :e^{-sum m_i h(x+x_i) + sum n_j h(y+y_j)}: 1
            const FSeries hx = e.h_minus(one, GX), hy = e.h_minus(one, GY);
            FSeries expo = hx * Rational(-g.m0) + hy * Rational(g.n0);
            if (g.m1 != 0) expo += taylor_shift(hx, GX, GX1, 1) * Rational(-g.m1);
            if (g.n1 != 0) expo += taylor_shift(hy, GY, GY1, 1) * Rational(g.n1);
            const FSeries joint = charge_shift(s_exp(expo), -g.m0 - g.m1 + g.n0 + g.n1);

            R prod = R::constant(ctx, 1), swapped = R::constant(ctx, 1);
            for (const auto& [k, bx, by] : factors) {
                prod = s_mul(prod, shifted_power(ctx, k, bx, by));
                swapped = s_mul(swapped, swapped_power(ctx, k, bx, by));
            }
            const FSeries pj = s_mul(promote(prod), joint);
            const FSeries sj = s_mul(promote(swapped), joint);

            auto labelled = [&](const char* what, const FSeries& lhs, const FSeries& rhs) {
                try {
                    return compare(lhs, rhs, box);
                } catch (const WindowError& err) {
                    throw WindowError(std::string(what) + ": " + err.what());
                }
            };
            CheckReport report = labelled("first product", l1, times(d1, pj));
            report.merge(labelled("second product", l2, times(d2, sj)));
            report.merge(labelled("third product", l3, times(d3, pj)));
            report.merge(labelled("sum", l1 - l2, l3));
            return report;
        },
        0);
}

}  // namespace logvertex
