#include "logvertex/series.hpp"

#include <numeric>
#include <set>

namespace logvertex {

ContextPtr SeriesContext::make(std::vector<VarSpec> vars, std::optional<int> pow_sum_cap) {
    return ContextPtr(new SeriesContext(std::move(vars), pow_sum_cap));
}

SeriesContext::SeriesContext(std::vector<VarSpec> vars, std::optional<int> pow_sum_cap)
    : vars_(std::move(vars)), sum_cap_(pow_sum_cap) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const auto& v = vars_[i];
        if (v.name.empty() || !seen.insert(v.name).second)
            throw std::invalid_argument("variable names must be unique and nonempty: '" + v.name + "'");
        slot_.push_back(key_size_);
        if (v.kind == VarKind::main) {
            if (v.lower_cap > v.upper_cap) throw std::invalid_argument("empty cap range for " + v.name);
            if (v.lower_cap <= -kInf / 4 || v.upper_cap >= kInf / 4) throw std::invalid_argument("cap too large");
            mains_.push_back(i);
            key_size_ += 3;
            volume_ *= static_cast<std::size_t>(v.upper_cap - v.lower_cap + 1);
        } else {
            if (v.upper_cap < 0) throw std::invalid_argument("negative aux cutoff for " + v.name);
            auxes_.push_back(i);
            key_size_ += 1;
            aux_total_ += v.upper_cap;
        }
    }
    if (sum_cap_) {
        inside_.resize(volume_);
        for (std::size_t idx = 0; idx < volume_; ++idx) {
            const auto p = box_point(idx);
            inside_[idx] = std::accumulate(p.begin(), p.end(), 0) <= *sum_cap_;
        }
    }
}

std::size_t SeriesContext::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return i;
    throw std::invalid_argument("unknown variable: " + std::string(name));
}

bool SeriesContext::has(std::string_view name) const {
    return std::any_of(vars_.begin(), vars_.end(), [&](const VarSpec& v) { return v.name == name; });
}

std::size_t SeriesContext::main_pos(std::size_t i) const {
    auto it = std::find(mains_.begin(), mains_.end(), i);
    if (it == mains_.end()) throw std::invalid_argument("not a main variable: " + vars_.at(i).name);
    return static_cast<std::size_t>(it - mains_.begin());
}

bool SeriesContext::in_caps(const Exponents& key) const {
    int sum = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        const auto& v = vars_[i];
        if (v.kind == VarKind::main) {
            const int p = key[slot_[i]];
            if (p < v.lower_cap || p > v.upper_cap || key[slot_[i] + 2] < 0) return false;
            sum += p;
        } else {
            const int d = key[slot_[i]];
            if (d < 0 || d > v.upper_cap) return false;
        }
    }
    return !sum_cap_ || sum <= *sum_cap_;
}

bool SeriesContext::box_contains(const std::vector<int>& pows) const {
    for (std::size_t k = 0; k < mains_.size(); ++k) {
        const auto& v = vars_[mains_[k]];
        if (pows[k] < v.lower_cap || pows[k] > v.upper_cap) return false;
    }
    return !sum_cap_ || std::accumulate(pows.begin(), pows.end(), 0) <= *sum_cap_;
}

std::size_t SeriesContext::box_index(const std::vector<int>& pows) const {
    std::size_t idx = 0, stride = 1;
    for (std::size_t k = 0; k < mains_.size(); ++k) {
        const auto& v = vars_[mains_[k]];
        idx += static_cast<std::size_t>(pows[k] - v.lower_cap) * stride;
        stride *= static_cast<std::size_t>(v.upper_cap - v.lower_cap + 1);
    }
    return idx;
}

std::vector<int> SeriesContext::box_point(std::size_t index) const {
    std::vector<int> p(mains_.size());
    for (std::size_t k = 0; k < mains_.size(); ++k) {
        const auto& v = vars_[mains_[k]];
        const auto w = static_cast<std::size_t>(v.upper_cap - v.lower_cap + 1);
        p[k] = v.lower_cap + static_cast<int>(index % w);
        index /= w;
    }
    return p;
}

std::vector<int> SeriesContext::pows_of(const Exponents& key) const {
    std::vector<int> p(mains_.size());
    for (std::size_t k = 0; k < mains_.size(); ++k) p[k] = key[slot_[mains_[k]]];
    return p;
}

Series<FockVector> promote(const Series<Rational>& s) {
    Series<FockVector>::Terms terms;
    for (const auto& [k, c] : s.terms()) terms.emplace(k, FockVector(c));
    return Series<FockVector>::from_parts(s.context(), std::move(terms), s.meta(), s.known_mask());
}

Series<Rational> binom_expand(const ContextPtr& ctxp, int r, std::size_t a, int sa, std::size_t b, int sb) {
    const auto& ctx = *ctxp;
    if (a >= ctx.var_count() || !ctx.is_main(a)) throw std::invalid_argument("binom_expand: first variable must be main");
    if (b >= ctx.var_count() || b == a) throw std::invalid_argument("binom_expand: bad second variable");
    const bool b_main = ctx.is_main(b);
    const int k_top = ctx.var(b).upper_cap;
    Series<Rational>::Terms terms;
    for (int k = 0; k <= k_top; ++k) {
        if (r >= 0 && k > r) break;
        const int pa = r - k;
        if (pa < ctx.var(a).lower_cap) break;
        if (pa > ctx.var(a).upper_cap) continue;
        Exponents key = ctx.zero_key();
        key[ctx.pow_slot(a)] = pa;
        key[b_main ? ctx.pow_slot(b) : ctx.deg_slot(b)] = k;
        const Rational c = binom(Rational(r), k) * sign_power(sa, pa) * sign_power(sb, k);
        if (c != 0) terms.emplace(std::move(key), c);
    }
    SeriesMeta meta;
    meta.zero = false;
    meta.main.assign(ctx.mains().size(), MainBounds{});
    // an aux b truncates the expansion, so the lead power stops at r - cap(b)
    const int a_lb = r >= 0 ? 0 : (b_main ? -kInf : r - k_top);
    meta.main[ctx.main_pos(a)] = MainBounds{a_lb, r, 0, 0, 0};
    if (b_main) meta.main[ctx.main_pos(b)] = MainBounds{0, r >= 0 ? r : kInf, 0, 0, 0};
    meta.deg_lo = meta.deg_hi = r;
    meta.aux_hi = b_main ? 0 : k_top;
    return Series<Rational>::from_parts(ctxp, std::move(terms), std::move(meta),
                                        std::vector<std::uint8_t>(ctx.box_volume(), 1));
}

Series<Rational> binom_expand(const ContextPtr& ctx, const Rational& r, std::size_t a, int sa, std::size_t b, int sb) {
    if (r.get_den() != 1)
        throw SeriesDomainError("binom_expand: exponent " + to_pq_string(r) + " leaves the integer-power lattice");
    if (!r.get_num().fits_sint_p()) throw SeriesDomainError("binom_expand: exponent out of range");
    return binom_expand(ctx, static_cast<int>(r.get_num().get_si()), a, sa, b, sb);
}

Rational binom_expand_coefficient(const Rational& r, int sb, int k) { return binom(r, k) * sign_power(sb, k); }

Series<Rational> delta_expand(const ContextPtr& ctxp, const DeltaArg& num, std::size_t den, int den_sign) {
    const auto& ctx = *ctxp;
    if (num.v1 == den || (num.v2 && (*num.v2 == den || *num.v2 == num.v1)))
        throw std::invalid_argument("delta_expand: variables must be distinct");
    if (!ctx.is_main(num.v1) || !ctx.is_main(den))
        throw std::invalid_argument("delta_expand: numerator lead and denominator must be main variables");
    // den^{-1} delta(v1/den) = (v1 - den)^{-1} + (den - v1)^{-1}
    Series<Rational> d = binom_expand(ctxp, -1, num.v1, 1, den, -1) + binom_expand(ctxp, -1, den, 1, num.v1, -1);
    if (num.s1 < 0) d = negate_var(num.v1, d);
    if (den_sign < 0) d = -negate_var(den, d);
    if (num.v2) d = taylor_shift(d, num.v1, *num.v2, num.s1 * num.s2);
    return d;
}

PowBox PowBox::uniform(const SeriesContext& ctx, int radius) {
    PowBox b;
    b.lo.assign(ctx.mains().size(), -radius);
    b.hi.assign(ctx.mains().size(), radius);
    return b;
}

bool PowBox::empty() const {
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (lo[k] > hi[k]) return true;
    return false;
}

bool PowBox::contains(const std::vector<int>& pows) const {
    for (std::size_t k = 0; k < lo.size(); ++k)
        if (pows[k] < lo[k] || pows[k] > hi[k]) return false;
    return true;
}

std::string render_key(const SeriesContext& ctx, const Exponents& key) {
    std::ostringstream os;
    for (std::size_t i = 0; i < ctx.var_count(); ++i) {
        const auto& name = ctx.var(i).name;
        if (i) os << "*";
        if (ctx.is_main(i)) {
            os << name << "^" << key[ctx.pow_slot(i)];
            if (int q = key[ctx.elog_slot(i)]) os << "*e^(" << q << "*log " << name << ")";
            if (int r = key[ctx.log_slot(i)]) os << "*(log " << name << ")^" << r;
        } else {
            os << name << "^" << key[ctx.deg_slot(i)];
        }
    }
    return os.str();
}

nlohmann::json key_to_json(const SeriesContext& ctx, const Exponents& key) {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < ctx.var_count(); ++i) {
        const auto& name = ctx.var(i).name;
        if (ctx.is_main(i))
            j[name] = {{"pow", key[ctx.pow_slot(i)]}, {"elog", key[ctx.elog_slot(i)]}, {"log", key[ctx.log_slot(i)]}};
        else
            j[name] = {{"deg", key[ctx.deg_slot(i)]}};
    }
    return j;
}

nlohmann::json coeff_to_json(const Rational& r) { return to_pq_string(r); }

nlohmann::json coeff_to_json(const FockVector& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [m, c] : v.terms()) {
        nlohmann::json xi = nlohmann::json::object();
        for (const auto& [level, power] : m.exponents()) xi[std::to_string(level)] = power;
        arr.push_back({{"charge", m.charge()}, {"xi", xi}, {"coeff", to_pq_string(c)}});
    }
    return arr;
}

nlohmann::json to_json(const CheckReport& r) {
    nlohmann::json j = {{"pass", r.pass}, {"compared", r.compared}};
    if (r.witness)
        j["witness"] = {{"monomial", r.witness->monomial},
                        {"exps", r.witness->exps},
                        {"lhs", r.witness->lhs},
                        {"rhs", r.witness->rhs}};
    else
        j["witness"] = nullptr;
    return j;
}

}  // namespace logvertex
