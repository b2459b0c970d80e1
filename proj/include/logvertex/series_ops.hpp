#pragma once

// Template definitions for series.hpp. Not meant to be included directly.

namespace logvertex {

namespace detail {

/// Calls fn(point) for every integer point of [lo, hi] (inclusive, per coordinate).
/// Stops early and returns false as soon as fn returns false.
template <class Fn>
bool for_each_point(const std::vector<int>& lo, const std::vector<int>& hi, Fn&& fn) {
    const std::size_t n = lo.size();
    for (std::size_t i = 0; i < n; ++i)
        if (lo[i] > hi[i]) return true;
    std::vector<int> p = lo;
    while (true) {
        if (!fn(static_cast<const std::vector<int>&>(p))) return false;
        std::size_t i = 0;
        for (; i < n; ++i) {
            if (p[i] < hi[i]) {
                ++p[i];
                break;
            }
            p[i] = lo[i];
        }
        if (i == n) return true;
    }
}

template <class Fn>
std::vector<std::uint8_t> build_mask(const SeriesContext& ctx, Fn&& known) {
    std::vector<std::uint8_t> mask(ctx.box_volume(), 0);
    for (std::size_t idx = 0; idx < mask.size(); ++idx) mask[idx] = known(ctx.box_point(idx)) ? 1 : 0;
    return mask;
}

inline bool finite_lo(int b) { return b > -kInf; }
inline bool finite_hi(int b) { return b < kInf; }

inline void require_same_context(const ContextPtr& a, const ContextPtr& b) {
    if (a != b) throw std::invalid_argument("series belong to different contexts");
}

inline void require_main(const SeriesContext& ctx, std::size_t var, const char* what) {
    if (var >= ctx.var_count() || !ctx.is_main(var))
        throw std::invalid_argument(std::string(what) + ": not a main variable");
}

template <class C>
std::map<Exponents, C> derive_terms(const SeriesContext& ctx, std::size_t var, const std::map<Exponents, C>& terms) {
    std::map<Exponents, C> out;
    const std::size_t ps = ctx.pow_slot(var), es = ctx.elog_slot(var), ls = ctx.log_slot(var);
    const int lower = ctx.var(var).lower_cap;
    for (const auto& [key, c] : terms) {
        const int p = key[ps], q = key[es], r = key[ls];
        if (p - 1 < lower) continue;
        Exponents k = key;
        k[ps] = p - 1;
        if (p + q != 0) accumulate(out, k, C(c * Rational(p + q)));
        if (r > 0) {
            k[ls] = r - 1;
            accumulate(out, k, C(c * Rational(r)));
        }
    }
    return out;
}

/// Upper bound on the grade of any retained monomial, after checking that
/// every monomial of w, retained or not, has positive grade.  The grade counts
/// aux degrees plus powers of main variables with nonnegative lower bound.
/// Throws SeriesDomainError when this cannot be certified.
template <class C>
int grading_bound(const Series<C>& w, const char* what) {
    const auto& ctx = *w.context();
    std::vector<std::size_t> graded_pos;
    bool strict_main = false;
    bool covered = true;  // non-graded variables live inside the caps
    for (std::size_t pos = 0; pos < ctx.mains().size(); ++pos) {
        const std::size_t v = ctx.mains()[pos];
        const int lb = w.lb(v);
        if (lb >= 0) {
            graded_pos.push_back(pos);
            if (lb >= 1) strict_main = true;
            if (ctx.var(v).lower_cap > 0 || ctx.var(v).upper_cap < 0) covered = false;
        } else if (lb < ctx.var(v).lower_cap || w.ub(v) > ctx.var(v).upper_cap) {
            covered = false;
        }
    }
    for (const auto& [key, c] : w.terms()) {
        int grade = 0;
        for (std::size_t v : ctx.auxes()) grade += key[ctx.deg_slot(v)];
        for (std::size_t pos : graded_pos) grade += key[ctx.pow_slot(ctx.mains()[pos])];
        if (grade < 1)
            throw SeriesDomainError(std::string(what) + ": argument has a term of grade zero (" +
                                    render_key(ctx, key) + ")");
    }
    if (!strict_main) {
        // Outside the caps some graded power is positive; inside, the points with
        // all graded powers zero must be exact so the check above saw them.
        bool ok = covered;
        for (std::size_t idx = 0; ok && idx < ctx.box_volume(); ++idx) {
            const auto p = ctx.box_point(idx);
            bool zero_graded = true;
            for (std::size_t pos : graded_pos) zero_graded = zero_graded && p[pos] == 0;
            if (zero_graded && !w.known_at(p)) ok = false;
        }
        if (!ok) throw SeriesDomainError(std::string(what) + ": cannot certify the grading of the argument");
    }
    int bound = ctx.aux_total_cap();
    for (std::size_t pos : graded_pos) bound += std::max(0, ctx.var(ctx.mains()[pos]).upper_cap);
    return bound;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Series members

template <class C>
Series<C> Series<C>::finite(ContextPtr ctx, const Terms& terms) {
    Series out(std::move(ctx));
    const auto& c = *out.ctx_;
    bool first = true;
    for (const auto& [key, value] : terms) {
        if (coeff_is_zero(value)) continue;
        if (key.size() != c.key_size()) throw std::invalid_argument("exponent tuple has wrong length");
        for (std::size_t v : c.mains())
            if (key[c.log_slot(v)] < 0) throw std::invalid_argument("negative log-degree");
        for (std::size_t v : c.auxes())
            if (key[c.deg_slot(v)] < 0) throw std::invalid_argument("negative aux degree");
        int deg = 0;
        for (std::size_t pos = 0; pos < c.mains().size(); ++pos) {
            const std::size_t v = c.mains()[pos];
            const int p = key[c.pow_slot(v)], q = key[c.elog_slot(v)], r = key[c.log_slot(v)];
            deg += p + q;
            auto& b = out.meta_.main[pos];
            if (first) {
                b = MainBounds{p, p, q, q, r};
            } else {
                b.lb = std::min(b.lb, p);
                b.ub = std::max(b.ub, p);
                b.elog_lo = std::min(b.elog_lo, q);
                b.elog_hi = std::max(b.elog_hi, q);
                b.log_max = std::max(b.log_max, r);
            }
        }
        int aux = 0;
        for (std::size_t v : c.auxes()) aux += key[c.deg_slot(v)];
        deg += aux;
        const int wdeg = deg - coeff_max_weight(value);
        const auto [clo, chi] = coeff_charge_range(value);
        if (first) {
            out.meta_.deg_lo = wdeg;
            out.meta_.deg_hi = deg;
            out.meta_.charge_lo = clo;
            out.meta_.charge_hi = chi;
            out.meta_.aux_hi = aux;
        } else {
            out.meta_.deg_lo = std::min(out.meta_.deg_lo, wdeg);
            out.meta_.deg_hi = std::max(out.meta_.deg_hi, deg);
            out.meta_.charge_lo = std::min(out.meta_.charge_lo, clo);
            out.meta_.charge_hi = std::max(out.meta_.charge_hi, chi);
            out.meta_.aux_hi = std::max(out.meta_.aux_hi, aux);
        }
        first = false;
        // terms beyond the caps only shape the metadata; the box mask stays exact
        if (c.in_caps(key)) accumulate(out.terms_, key, value);
    }
    out.meta_.zero = first;
    return out;
}

template <class C>
Series<C> Series<C>::from_parts(ContextPtr ctx, Terms terms, SeriesMeta meta, std::vector<std::uint8_t> known) {
    Series out(std::move(ctx));
    if (known.size() != out.ctx_->box_volume()) throw std::logic_error("mask size mismatch");
    out.terms_ = std::move(terms);
    out.meta_ = std::move(meta);
    out.meta_.main.resize(out.ctx_->mains().size());
    out.tighten_bounds();
    out.known_ = std::move(known);
    out.drop_unknown();
    return out;
}

template <class C>
std::pair<int, int> Series<C>::pow_sum_range() const {
    if (meta_.zero) return {kInf, -kInf};
    if (ctx_->mains().empty()) return {-kInf, kInf};
    int elog_hi = 0, elog_lo = 0;
    for (const auto& b : meta_.main) {
        elog_hi += b.elog_hi;
        elog_lo += b.elog_lo;
    }
    const int aux = std::min(meta_.aux_hi, ctx_->aux_total_cap());
    const int lo = detail::finite_lo(meta_.deg_lo) ? meta_.deg_lo - elog_hi - aux : -kInf;
    const int hi = detail::finite_hi(meta_.deg_hi) ? meta_.deg_hi - elog_lo : kInf;
    return {lo, hi};
}

// A power of one variable is limited by the power-sum range once the others are bounded.
template <class C>
void Series<C>::tighten_bounds() {
    if (meta_.zero) return;
    auto& mb = meta_.main;
    const std::size_t m = mb.size();
    if (m < 2) return;
    for (bool changed = true; changed;) {
        changed = false;
        const auto [lo, hi] = pow_sum_range();
        for (std::size_t k = 0; k < m; ++k) {
            long ub_others = 0, lb_others = 0;
            bool ub_fin = true, lb_fin = true;
            for (std::size_t l = 0; l < m; ++l) {
                if (l == k) continue;
                if (detail::finite_hi(mb[l].ub)) ub_others += mb[l].ub; else ub_fin = false;
                if (detail::finite_lo(mb[l].lb)) lb_others += mb[l].lb; else lb_fin = false;
            }
            if (ub_fin && detail::finite_lo(lo) && lo - ub_others > mb[k].lb) {
                mb[k].lb = static_cast<int>(lo - ub_others);
                changed = true;
            }
            if (lb_fin && detail::finite_hi(hi) && hi - lb_others < mb[k].ub) {
                mb[k].ub = static_cast<int>(hi - lb_others);
                changed = true;
            }
        }
    }
}

template <class C>
bool Series<C>::violates_support(const std::vector<int>& pows) const {
    if (meta_.zero) return true;
    long sum = 0;
    for (std::size_t pos = 0; pos < pows.size(); ++pos) {
        const auto& b = meta_.main[pos];
        if (pows[pos] < b.lb || pows[pos] > b.ub) return true;
        sum += pows[pos];
    }
    const auto [lo, hi] = pow_sum_range();
    return sum < lo || sum > hi;
}

template <class C>
bool Series<C>::known_at(const std::vector<int>& pows) const {
    if (violates_support(pows)) return true;
    return ctx_->box_contains(pows) && known_[ctx_->box_index(pows)] != 0;
}

template <class C>
void Series<C>::drop_unknown() {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (coeff_is_zero(it->second)) {
            it = terms_.erase(it);
            continue;
        }
        const auto pows = ctx_->pows_of(it->first);
        if (!ctx_->box_contains(pows) || known_[ctx_->box_index(pows)] == 0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

template <class C>
Series<C>& Series<C>::operator+=(const Series& o) {
    detail::require_same_context(ctx_, o.ctx_);
    if (o.meta_.zero && o.terms_.empty()) return *this;
    auto mask = detail::build_mask(*ctx_, [&](const std::vector<int>& p) { return known_at(p) && o.known_at(p); });
    if (meta_.zero) {
        meta_ = o.meta_;
    } else if (!o.meta_.zero) {
        for (std::size_t pos = 0; pos < meta_.main.size(); ++pos) {
            auto& a = meta_.main[pos];
            const auto& b = o.meta_.main[pos];
            a.lb = std::min(a.lb, b.lb);
            a.ub = std::max(a.ub, b.ub);
            a.elog_lo = std::min(a.elog_lo, b.elog_lo);
            a.elog_hi = std::max(a.elog_hi, b.elog_hi);
            a.log_max = std::max(a.log_max, b.log_max);
        }
        meta_.deg_lo = std::min(meta_.deg_lo, o.meta_.deg_lo);
        meta_.deg_hi = std::max(meta_.deg_hi, o.meta_.deg_hi);
        meta_.charge_lo = std::min(meta_.charge_lo, o.meta_.charge_lo);
        meta_.charge_hi = std::max(meta_.charge_hi, o.meta_.charge_hi);
        meta_.aux_hi = std::max(meta_.aux_hi, o.meta_.aux_hi);
    }
    for (const auto& [k, c] : o.terms_) accumulate(terms_, k, c);
    known_ = std::move(mask);
    drop_unknown();
    return *this;
}

template <class C>
Series<C>& Series<C>::operator-=(const Series& o) {
    return *this += (o * Rational(-1));
}

template <class C>
Series<C>& Series<C>::operator*=(const Rational& c) {
    if (c == 0) {
        *this = Series(ctx_);
        return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
}

// ---------------------------------------------------------------------------

namespace detail {

template <class A, class B>
Series<product_t<A, B>> s_mul_impl(const Series<A>& a, const Series<B>& b, const PowBox* target) {
    using R = product_t<A, B>;
    detail::require_same_context(a.context(), b.context());
    const ContextPtr& ctxp = a.context();
    const SeriesContext& ctx = *ctxp;
    if (a.is_zero_object() || b.is_zero_object()) return Series<R>(ctxp);

    const std::size_t m = ctx.mains().size();
    const auto [alo, ahi] = a.pow_sum_range();
    const auto [blo, bhi] = b.pow_sum_range();

    // Recession directions r of {i : i in supp(a), p - i in supp(b)}; the
    // convolution is finite for every p iff only r = 0 survives.
    {
        std::vector<bool> pos_ok(m), neg_ok(m);
        for (std::size_t k = 0; k < m; ++k) {
            const auto& ba = a.meta().main[k];
            const auto& bb = b.meta().main[k];
            pos_ok[k] = !detail::finite_hi(ba.ub) && !detail::finite_lo(bb.lb);
            neg_ok[k] = !detail::finite_lo(ba.lb) && !detail::finite_hi(bb.ub);
        }
        const bool sum_pos = !detail::finite_hi(ahi) && !detail::finite_lo(blo);
        const bool sum_neg = !detail::finite_lo(alo) && !detail::finite_hi(bhi);
        bool unbounded = false;
        for (std::size_t k = 0; k < m && !unbounded; ++k) {
            if ((pos_ok[k] && sum_pos) || (neg_ok[k] && sum_neg)) unbounded = true;
            for (std::size_t l = 0; l < m && !unbounded; ++l)
                if (k != l && pos_ok[k] && neg_ok[l]) unbounded = true;
        }
        if (unbounded) {
            std::string names;
            for (std::size_t k = 0; k < m; ++k) names += (k ? "," : "") + ctx.var(ctx.mains()[k]).name;
            throw SummabilityError("product is not summable in main variables {" + names + "}");
        }
    }

    typename Series<R>::Terms out;
    const std::size_t ks = ctx.key_size();
    Exponents key(ks);
    std::vector<std::size_t> pow_slots(m);
    for (std::size_t k = 0; k < m; ++k) pow_slots[k] = ctx.pow_slot(ctx.mains()[k]);
    std::vector<int> pows(m);
    for (const auto& [ka, ca] : a.terms()) {
        for (const auto& [kb, cb] : b.terms()) {
            for (std::size_t s = 0; s < ks; ++s) key[s] = ka[s] + kb[s];
            if (target) {
                for (std::size_t k = 0; k < m; ++k) pows[k] = key[pow_slots[k]];
                if (!target->contains(pows)) continue;
            }
            if (!ctx.in_caps(key)) continue;
            accumulate(out, key, R(coeff_mul(ca, cb)));
        }
    }

    SeriesMeta meta;
    meta.zero = false;
    meta.main.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const auto& ba = a.meta().main[k];
        const auto& bb = b.meta().main[k];
        meta.main[k] = MainBounds{add_bound(ba.lb, bb.lb), add_bound(ba.ub, bb.ub), ba.elog_lo + bb.elog_lo,
                                  ba.elog_hi + bb.elog_hi, ba.log_max + bb.log_max};
    }
    meta.deg_lo = add_bound(a.meta().deg_lo, b.meta().deg_lo);
    meta.deg_hi = add_bound(a.meta().deg_hi, b.meta().deg_hi);
    meta.charge_lo = a.meta().charge_lo + b.meta().charge_lo;
    meta.charge_hi = a.meta().charge_hi + b.meta().charge_hi;
    meta.aux_hi = add_bound(a.meta().aux_hi, b.meta().aux_hi);

    const bool a_full = a.fully_known();
    const bool b_full = b.fully_known();
    auto mask = detail::build_mask(ctx, [&](const std::vector<int>& p) {
        if (target && !target->contains(p)) return false;
        std::vector<int> lo(m), hi(m);
        long psum = 0;
        for (std::size_t k = 0; k < m; ++k) {
            const auto& ba = a.meta().main[k];
            const auto& bb = b.meta().main[k];
            lo[k] = std::max(ba.lb, detail::finite_hi(bb.ub) ? p[k] - bb.ub : -kInf);
            hi[k] = std::min(ba.ub, detail::finite_lo(bb.lb) ? p[k] - bb.lb : kInf);
            if (lo[k] > hi[k]) return true;
            psum += p[k];
        }
        long slo = alo, shi = ahi;
        if (detail::finite_hi(bhi)) slo = std::max<long>(slo, psum - bhi);
        if (detail::finite_lo(blo)) shi = std::min<long>(shi, psum - blo);
        if (slo > shi) return true;
        std::vector<int> plo = lo, phi_ = hi;
        for (std::size_t k = 0; k < m; ++k) {
            long others_hi = 0, others_lo = 0;
            bool hi_fin = true, lo_fin = true;
            for (std::size_t l = 0; l < m; ++l) {
                if (l == k) continue;
                if (detail::finite_hi(hi[l])) others_hi += hi[l]; else hi_fin = false;
                if (detail::finite_lo(lo[l])) others_lo += lo[l]; else lo_fin = false;
            }
            if (slo > -kInf && hi_fin)
                plo[k] = static_cast<int>(std::max<long>(plo[k], slo - others_hi));
            if (shi < kInf && lo_fin) phi_[k] = static_cast<int>(std::min<long>(phi_[k], shi - others_lo));
            if (plo[k] > phi_[k]) return true;
        }
        for (std::size_t k = 0; k < m; ++k)
            if (!detail::finite_lo(plo[k]) || !detail::finite_hi(phi_[k]))
                throw std::logic_error("s_mul: unbounded convolution range despite summability");
        if (a_full && b_full) {
            // Only points outside the caps box can be unknown.
            bool inside = true;
            detail::for_each_point(plo, phi_, [&](const std::vector<int>& i) {
                std::vector<int> j(m);
                for (std::size_t k = 0; k < m; ++k) j[k] = p[k] - i[k];
                if (a.violates_support(i) || b.violates_support(j)) return true;
                inside = ctx.box_contains(i) && ctx.box_contains(j);
                return inside;
            });
            return inside;
        }
        std::vector<int> j(m);
        return detail::for_each_point(plo, phi_, [&](const std::vector<int>& i) {
            for (std::size_t k = 0; k < m; ++k) j[k] = p[k] - i[k];
            if (a.violates_support(i) || b.violates_support(j)) return true;
            return a.known_at(i) && b.known_at(j);
        });
    });
    return Series<R>::from_parts(ctxp, std::move(out), std::move(meta), std::move(mask));
}

}  // namespace detail

template <class A, class B>
Series<product_t<A, B>> s_mul(const Series<A>& a, const Series<B>& b) {
    return detail::s_mul_impl(a, b, nullptr);
}

template <class A, class B>
Series<product_t<A, B>> s_mul_within(const Series<A>& a, const Series<B>& b, const PowBox& target) {
    return detail::s_mul_impl(a, b, &target);
}

template <class C>
Series<C> s_derive(std::size_t var, const Series<C>& a) {
    const auto& ctx = *a.context();
    detail::require_main(ctx, var, "s_derive");
    if (a.is_zero_object()) return Series<C>(a.context());
    const std::size_t pos = ctx.main_pos(var);
    auto terms = detail::derive_terms(ctx, var, a.terms());
    SeriesMeta meta = a.meta();
    meta.main[pos].lb = add_bound(meta.main[pos].lb, -1);
    meta.main[pos].ub = add_bound(meta.main[pos].ub, -1);
    meta.deg_lo = add_bound(meta.deg_lo, -1);
    meta.deg_hi = add_bound(meta.deg_hi, -1);
    auto mask = detail::build_mask(ctx, [&](std::vector<int> p) {
        ++p[pos];
        return a.known_at(p);
    });
    return Series<C>::from_parts(a.context(), std::move(terms), std::move(meta), std::move(mask));
}

template <class C>
Series<C> taylor_shift(const Series<C>& a, std::size_t var, std::size_t dir, int sign) {
    const auto& ctx = *a.context();
    detail::require_main(ctx, var, "taylor_shift");
    if (dir >= ctx.var_count() || dir == var) throw std::invalid_argument("taylor_shift: bad direction variable");
    if (a.is_zero_object()) return Series<C>(a.context());
    const bool dir_main = ctx.is_main(dir);
    const std::size_t pos = ctx.main_pos(var);
    if (dir_main) {
        const auto& bd = a.meta().main[ctx.main_pos(dir)];
        if (bd.lb != 0 || bd.ub != 0 || bd.elog_lo != 0 || bd.elog_hi != 0 || bd.log_max != 0)
            throw SeriesDomainError("taylor_shift: series already depends on the direction variable");
    } else {
        for (const auto& [key, c] : a.terms())
            if (key[ctx.deg_slot(dir)] != 0)
                throw SeriesDomainError("taylor_shift: series already depends on the direction variable");
    }
    const int top = ctx.var(dir).upper_cap;
    const std::size_t dslot = dir_main ? ctx.pow_slot(dir) : ctx.deg_slot(dir);

    typename Series<C>::Terms out;
    auto d = a.terms();
    for (int k = 0; k <= top && !d.empty(); ++k) {
        const Rational factor = sign_power(sign, k) / factorial(k);
        for (const auto& [key, c] : d) {
            Exponents kk = key;
            kk[dslot] += k;
            if (!ctx.in_caps(kk)) continue;
            accumulate(out, kk, C(c * factor));
        }
        d = detail::derive_terms(ctx, var, d);
    }

    SeriesMeta meta = a.meta();
    auto& bv = meta.main[pos];
    const bool polynomial_type = bv.lb >= 0 && bv.elog_lo == 0 && bv.elog_hi == 0 && bv.log_max == 0;
    if (polynomial_type)
        bv.lb = 0;
    else if (dir_main || bv.lb <= -kInf)
        bv.lb = -kInf;
    else
        bv.lb -= top;  // at most top derivatives survive an aux shift
    if (dir_main)
        meta.main[ctx.main_pos(dir)] = MainBounds{0, kInf, 0, 0, 0};
    else
        meta.aux_hi = add_bound(meta.aux_hi, top);

    std::vector<std::uint8_t> mask;
    if (dir_main) {
        const std::size_t dpos = ctx.main_pos(dir);
        mask = detail::build_mask(ctx, [&](std::vector<int> p) {
            const int k = p[dpos];
            if (k < 0) return true;
            p[dpos] = 0;
            p[pos] += k;
            return a.known_at(p);
        });
    } else {
        mask = detail::build_mask(ctx, [&](std::vector<int> p) {
            for (int k = 0; k <= top; ++k) {
                if (!a.known_at(p)) return false;
                ++p[pos];
            }
            return true;
        });
    }
    return Series<C>::from_parts(a.context(), std::move(out), std::move(meta), std::move(mask));
}

template <class C>
Series<C> taylor_shift_series(const Series<C>& a, std::size_t var, const Series<Rational>& w) {
    const auto& ctx = *a.context();
    detail::require_main(ctx, var, "taylor_shift_series");
    detail::require_same_context(a.context(), w.context());
    if (!w.fully_known()) throw SeriesDomainError("taylor_shift_series: shift must be exact");
    for (const auto& [key, c] : w.terms()) {
        int deg = 0;
        for (std::size_t v : ctx.auxes()) deg += key[ctx.deg_slot(v)];
        for (std::size_t v : ctx.mains())
            if (key[ctx.pow_slot(v)] || key[ctx.elog_slot(v)] || key[ctx.log_slot(v)])
                throw SeriesDomainError("taylor_shift_series: shift may only involve aux variables");
        if (deg < 1) throw SeriesDomainError("taylor_shift_series: shift has a term of degree zero");
    }
    Series<C> result = a;
    Series<C> d = a;
    Series<Rational> wk = Series<Rational>::constant(a.context(), Rational(1));
    for (int k = 1; k <= ctx.aux_total_cap(); ++k) {
        wk = s_mul(wk, w) * Rational(1, k);
        if (wk.empty()) break;
        d = s_derive(var, d);
        result += s_mul(wk, d);
    }
    return result;
}

template <class C>
Series<C> phi(std::size_t var, const Series<C>& a) {
    const auto& ctx = *a.context();
    detail::require_main(ctx, var, "phi");
    if (a.is_zero_object()) return Series<C>(a.context());
    const std::size_t pos = ctx.main_pos(var);
    const auto& bv = a.meta().main[pos];
    if (bv.log_max != 0) throw SeriesDomainError("phi: series carries powers of log " + ctx.var(var).name);
    typename Series<C>::Terms out;
    for (const auto& [key, c] : a.terms()) {
        Exponents k = key;
        k[ctx.pow_slot(var)] += k[ctx.elog_slot(var)];
        k[ctx.elog_slot(var)] = 0;
        if (!ctx.in_caps(k)) continue;
        accumulate(out, k, c);
    }
    SeriesMeta meta = a.meta();
    auto& nb = meta.main[pos];
    nb.lb = add_bound(bv.lb, bv.elog_lo);
    nb.ub = add_bound(bv.ub, bv.elog_hi);
    nb.elog_lo = nb.elog_hi = 0;
    auto mask = detail::build_mask(ctx, [&](std::vector<int> p) {
        const int base = p[pos];
        for (int e = bv.elog_lo; e <= bv.elog_hi; ++e) {
            p[pos] = base - e;
            if (!a.known_at(p)) return false;
        }
        return true;
    });
    return Series<C>::from_parts(a.context(), std::move(out), std::move(meta), std::move(mask));
}

template <class C>
Series<C> negate_var(std::size_t var, const Series<C>& a) {
    const auto& ctx = *a.context();
    if (a.is_zero_object()) return a;
    if (ctx.is_main(var)) {
        const auto& bv = a.meta().main[ctx.main_pos(var)];
        if (bv.elog_lo != 0 || bv.elog_hi != 0 || bv.log_max != 0)
            throw SeriesDomainError("negate_var: logarithmic slots present");
    }
    const std::size_t slot = ctx.is_main(var) ? ctx.pow_slot(var) : ctx.deg_slot(var);
    auto terms = a.terms();
    for (auto& [key, c] : terms)
        if (key[slot] % 2 != 0) c *= Rational(-1);
    return a.with_terms(std::move(terms));
}

template <class C>
Series<C> s_exp(const Series<C>& w) {
    Series<C> one = Series<C>::constant(w.context(), coeff_one<C>());
    if (w.is_zero_object()) return one;
    const int n_max = detail::grading_bound(w, "s_exp");
    Series<C> sum = one;
    Series<C> power = one;
    for (int n = 1; n <= n_max; ++n) {
        power = s_mul(power, w) * Rational(1, n);
        if (power.empty() && power.fully_known()) break;
        sum += power;
    }
    return sum;
}

template <class C>
Series<C> log_expand(const Series<C>& w) {
    if (w.is_zero_object()) return Series<C>(w.context());
    const int n_max = detail::grading_bound(w, "log_expand");
    Series<C> sum(w.context());
    Series<C> power = w;
    for (int i = 1; i <= n_max; ++i) {
        if (i > 1) power = s_mul(power, w);
        if (power.empty() && power.fully_known()) break;
        sum += power * Rational(i % 2 == 1 ? 1 : -1, i);
    }
    return sum;
}

template <class C>
Series<C> embed(const Series<C>& s, const ContextPtr& target, const std::vector<std::size_t>& var_map) {
    const auto& src = *s.context();
    const auto& dst = *target;
    if (var_map.size() != src.var_count()) throw std::invalid_argument("embed: variable map has wrong size");
    for (std::size_t i = 0; i < var_map.size(); ++i)
        if (var_map[i] >= dst.var_count() || src.var(i).kind != dst.var(var_map[i]).kind)
            throw std::invalid_argument("embed: incompatible variable " + src.var(i).name);
    if (s.is_zero_object()) return Series<C>(target);

    typename Series<C>::Terms out;
    for (const auto& [key, c] : s.terms()) {
        Exponents k = dst.zero_key();
        for (std::size_t i = 0; i < var_map.size(); ++i) {
            const std::size_t t = var_map[i];
            if (src.is_main(i)) {
                k[dst.pow_slot(t)] = key[src.pow_slot(i)];
                k[dst.elog_slot(t)] = key[src.elog_slot(i)];
                k[dst.log_slot(t)] = key[src.log_slot(i)];
            } else {
                k[dst.deg_slot(t)] = key[src.deg_slot(i)];
            }
        }
        if (!dst.in_caps(k)) continue;
        accumulate(out, k, c);
    }
    SeriesMeta meta;
    meta.zero = false;
    meta.main.assign(dst.mains().size(), MainBounds{});
    std::vector<std::optional<std::size_t>> source_of(dst.var_count());
    for (std::size_t i = 0; i < var_map.size(); ++i) source_of[var_map[i]] = i;
    for (std::size_t i = 0; i < var_map.size(); ++i)
        if (src.is_main(i)) meta.main[dst.main_pos(var_map[i])] = s.meta().main[src.main_pos(i)];
    meta.deg_lo = s.meta().deg_lo;
    meta.deg_hi = s.meta().deg_hi;
    meta.charge_lo = s.meta().charge_lo;
    meta.charge_hi = s.meta().charge_hi;
    meta.aux_hi = s.meta().aux_hi;
    auto mask = detail::build_mask(dst, [&](const std::vector<int>& p) {
        std::vector<int> q(src.mains().size(), 0);
        for (std::size_t pos = 0; pos < dst.mains().size(); ++pos) {
            const auto& from = source_of[dst.mains()[pos]];
            if (!from) {
                if (p[pos] != 0) return true;
                continue;
            }
            q[src.main_pos(*from)] = p[pos];
        }
        return s.known_at(q);
    });
    return Series<C>::from_parts(target, std::move(out), std::move(meta), std::move(mask));
}

template <class C>
CheckReport compare(const Series<C>& lhs, const Series<C>& rhs, const PowBox& box) {
    detail::require_same_context(lhs.context(), rhs.context());
    const auto& ctx = *lhs.context();
    CheckReport report;
    if (box.empty()) return report;
    detail::for_each_point(box.lo, box.hi, [&](const std::vector<int>& p) {
        if (!lhs.known_at(p) || !rhs.known_at(p)) {
            std::ostringstream os;
            os << "comparison window not covered by exact coefficients at main powers (";
            for (std::size_t k = 0; k < p.size(); ++k) os << (k ? "," : "") << p[k];
            os << ") on the " << (!lhs.known_at(p) ? "left" : "right") << " side";
            throw WindowError(os.str());
        }
        return true;
    });
    auto in_box = [&](const Exponents& k) { return box.contains(ctx.pows_of(k)); };
    auto ia = lhs.terms().begin();
    auto ib = rhs.terms().begin();
    const auto ea = lhs.terms().end();
    const auto eb = rhs.terms().end();
    auto skip = [&](auto& it, const auto& end) {
        while (it != end && !in_box(it->first)) ++it;
    };
    skip(ia, ea);
    skip(ib, eb);
    while (ia != ea || ib != eb) {
        const Exponents* key;
        C left{}, right{};
        if (ib == eb || (ia != ea && ia->first < ib->first)) {
            key = &ia->first;
            left = ia->second;
            ++ia;
        } else if (ia == ea || ib->first < ia->first) {
            key = &ib->first;
            right = ib->second;
            ++ib;
        } else {
            key = &ia->first;
            left = ia->second;
            right = ib->second;
            ++ia;
            ++ib;
        }
        ++report.compared;
        if (!(left == right) && report.pass) {
            report.pass = false;
            report.witness =
                Witness{render_key(ctx, *key), key_to_json(ctx, *key), coeff_to_string(left), coeff_to_string(right)};
        }
        skip(ia, ea);
        skip(ib, eb);
    }
    return report;
}

template <class C>
nlohmann::json to_json(const Series<C>& s) {
    const auto& ctx = *s.context();
    nlohmann::json vars = nlohmann::json::array();
    nlohmann::json lb = nlohmann::json::object();
    for (std::size_t i = 0; i < ctx.var_count(); ++i) {
        const auto& v = ctx.var(i);
        if (v.kind == VarKind::main) {
            vars.push_back({{"name", v.name}, {"kind", "main"}, {"lower_cap", v.lower_cap}, {"upper_cap", v.upper_cap}});
            const int b = s.lb(i);
            lb[v.name] = (b <= -kInf || b >= kInf) ? nlohmann::json(nullptr) : nlohmann::json(b);
        } else {
            vars.push_back({{"name", v.name}, {"kind", "aux"}, {"cutoff", v.upper_cap}});
        }
    }
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [key, c] : s.terms()) terms.push_back({{"exps", key_to_json(ctx, key)}, {"coeff", coeff_to_json(c)}});
    return {{"vars", vars}, {"terms", terms}, {"lb", lb}};
}

}  // namespace logvertex
