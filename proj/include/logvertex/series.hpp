#pragma once

// Truncated multivariate formal Laurent series with logarithmic variables.
//
// A context fixes an ordered list of variables.  A "main" variable x
// contributes three exponent slots per monomial,
//
//     x^pow * e^{elog * log x} * (log x)^log,     pow, elog in Z, log >= 0,
//
// so e^{log x} and x stay distinct until phi identifies them.  An "aux"
// variable contributes a single nonnegative degree and is truncated at a
// fixed cutoff; a series is understood as its aux-truncation.
//
// Main powers are retained inside per-variable caps.  Every series also
// carries sound support metadata (per-variable lower/upper bounds on the
// power, the range of e^{log} exponents, a bound on log-degree and a range
// for the total degree) and a mask over the box of retained main powers
// recording where the stored coefficients are exact.  Operations propagate
// both, so a coefficient is either known exactly or flagged unknown; nothing
// is silently truncated.  Comparisons throw WindowError when asked to look
// at an unknown coefficient, and products whose coefficients would be
// infinite sums throw SummabilityError.

#include "logvertex/check_report.hpp"
#include "logvertex/fock.hpp"
#include "logvertex/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace logvertex {

struct SummabilityError : std::domain_error {
    using std::domain_error::domain_error;
};

struct WindowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeriesDomainError : std::domain_error {
    using std::domain_error::domain_error;
};

enum class VarKind { main, aux };

struct VarSpec {
    std::string name;
    VarKind kind = VarKind::main;
    int lower_cap = 0;  // main only
    int upper_cap = 0;  // main: highest retained power; aux: cutoff degree

    static VarSpec main(std::string name, int lower_cap, int upper_cap) {
        return {std::move(name), VarKind::main, lower_cap, upper_cap};
    }
    static VarSpec aux(std::string name, int cutoff) { return {std::move(name), VarKind::aux, 0, cutoff}; }
};

using Exponents = std::vector<int>;

class SeriesContext;
using ContextPtr = std::shared_ptr<const SeriesContext>;

class SeriesContext {
public:
    /// pow_sum_cap, when given, also drops every term whose main powers sum
    /// above it; those points count as outside the box.
    static ContextPtr make(std::vector<VarSpec> vars, std::optional<int> pow_sum_cap = std::nullopt);

    std::size_t var_count() const { return vars_.size(); }
    const VarSpec& var(std::size_t i) const { return vars_[i]; }
    const std::vector<VarSpec>& vars() const { return vars_; }
    std::size_t index_of(std::string_view name) const;
    bool has(std::string_view name) const;
    bool is_main(std::size_t i) const { return vars_[i].kind == VarKind::main; }

    std::size_t key_size() const { return key_size_; }
    std::size_t pow_slot(std::size_t i) const { return slot_[i]; }
    std::size_t elog_slot(std::size_t i) const { return slot_[i] + 1; }
    std::size_t log_slot(std::size_t i) const { return slot_[i] + 2; }
    std::size_t deg_slot(std::size_t i) const { return slot_[i]; }

    /// Indices of main variables, in context order; box coordinates follow this order.
    const std::vector<std::size_t>& mains() const { return mains_; }
    const std::vector<std::size_t>& auxes() const { return auxes_; }
    /// Position of main variable i within mains().
    std::size_t main_pos(std::size_t i) const;
    int aux_total_cap() const { return aux_total_; }

    std::size_t box_volume() const { return volume_; }
    std::optional<int> pow_sum_cap() const { return sum_cap_; }
    /// Whether box point idx lies under the power-sum cap.
    bool index_inside(std::size_t idx) const { return inside_.empty() || inside_[idx] != 0; }
    bool in_caps(const Exponents& key) const;
    bool box_contains(const std::vector<int>& pows) const;
    std::size_t box_index(const std::vector<int>& pows) const;
    std::vector<int> box_point(std::size_t index) const;
    std::vector<int> pows_of(const Exponents& key) const;
    Exponents zero_key() const { return Exponents(key_size_, 0); }

private:
    SeriesContext(std::vector<VarSpec> vars, std::optional<int> pow_sum_cap);

    std::vector<VarSpec> vars_;
    std::vector<std::size_t> slot_;
    std::vector<std::size_t> mains_;
    std::vector<std::size_t> auxes_;
    std::size_t key_size_ = 0;
    std::size_t volume_ = 1;
    int aux_total_ = 0;
    std::optional<int> sum_cap_;
    std::vector<std::uint8_t> inside_;  // empty without a power-sum cap
};

inline constexpr int kInf = 1 << 28;

inline int add_bound(int a, int b) {
    if (a <= -kInf || b <= -kInf) return -kInf;
    if (a >= kInf || b >= kInf) return kInf;
    return a + b;
}

/// Support metadata of one main variable.
struct MainBounds {
    int lb = 0;        // power lower bound, -kInf if none
    int ub = 0;        // power upper bound, +kInf if none
    int elog_lo = 0;   // range of e^{log} exponents (always finite)
    int elog_hi = 0;
    int log_max = 0;   // bound on log-degree
};

// Total degree of a term is sum(pow + elog) over mains plus aux degrees.
// deg_lo bounds the degree minus the Fock weight of the coefficient monomial
// (weights are nonnegative, so it also bounds the plain degree); deg_hi bounds
// the plain degree.  The weighted lower bound survives the annihilation
// operators x^{-k} d/d xi_k, which the plain one does not.
struct SeriesMeta {
    bool zero = true;            // the represented object is exactly zero
    std::vector<MainBounds> main;  // indexed like SeriesContext::mains()
    int deg_lo = -kInf;
    int deg_hi = kInf;
    int charge_lo = 0;           // range of e^{xi_0} charges in the coefficients
    int charge_hi = 0;
    int aux_hi = kInf;           // bound on the total aux degree; kInf means the caps
};

// ---------------------------------------------------------------------------
// Coefficient plumbing

inline bool coeff_is_zero(const Rational& r) { return r == 0; }
inline bool coeff_is_zero(const FockVector& v) { return v.is_zero(); }
inline std::string coeff_to_string(const Rational& r) { return to_pq_string(r); }
inline std::string coeff_to_string(const FockVector& v) { return render(v); }

template <class C> C coeff_one();
template <> inline Rational coeff_one<Rational>() { return Rational(1); }
template <> inline FockVector coeff_one<FockVector>() { return FockVector(Rational(1)); }

inline int coeff_max_weight(const Rational&) { return 0; }
inline int coeff_max_weight(const FockVector& v) { return v.max_weight(); }
inline std::pair<int, int> coeff_charge_range(const Rational&) { return {0, 0}; }
inline std::pair<int, int> coeff_charge_range(const FockVector& v) {
    if (v.is_zero()) return {0, 0};
    return {v.terms().begin()->first.charge(), v.terms().rbegin()->first.charge()};
}

inline Rational coeff_mul(const Rational& a, const Rational& b) { return a * b; }
inline FockVector coeff_mul(const FockVector& a, const Rational& b) { return a * b; }
inline FockVector coeff_mul(const Rational& a, const FockVector& b) { return a * b; }
inline FockVector coeff_mul(const FockVector& a, const FockVector& b) { return fv_mul(a, b); }

template <class A, class B>
using product_t = decltype(coeff_mul(std::declval<const A&>(), std::declval<const B&>()));

template <class C>
void accumulate(std::map<Exponents, C>& terms, const Exponents& key, const C& value) {
    if (coeff_is_zero(value)) return;
    auto [it, inserted] = terms.try_emplace(key, value);
    if (!inserted) {
        it->second += value;
        if (coeff_is_zero(it->second)) terms.erase(it);
    }
}

// ---------------------------------------------------------------------------

template <class C>
class Series {
public:
    using Coeff = C;
    using Terms = std::map<Exponents, C>;

    /// The zero series, exact everywhere.
    explicit Series(ContextPtr ctx) : ctx_(std::move(ctx)), known_(ctx_->box_volume(), 1) {
        meta_.main.resize(ctx_->mains().size());
    }

    /// A finite series given by its terms, exact everywhere. Terms outside the caps are truncated away.
    static Series finite(ContextPtr ctx, const Terms& terms);
    static Series monomial(ContextPtr ctx, const Exponents& key, const C& coeff) {
        return finite(std::move(ctx), Terms{{key, coeff}});
    }
    static Series constant(ContextPtr ctx, const C& coeff) {
        auto key = ctx->zero_key();
        return monomial(std::move(ctx), key, coeff);
    }
    /// Low-level constructor; the caller vouches that meta is sound and known marks exact points.
    static Series from_parts(ContextPtr ctx, Terms terms, SeriesMeta meta, std::vector<std::uint8_t> known);

    const ContextPtr& context() const { return ctx_; }
    const Terms& terms() const { return terms_; }
    const SeriesMeta& meta() const { return meta_; }
    const std::vector<std::uint8_t>& known_mask() const { return known_; }
    bool is_zero_object() const { return meta_.zero; }
    bool empty() const { return terms_.empty(); }

    /// Stored coefficient (zero if absent). Does not check exactness.
    C coeff(const Exponents& key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? C{} : it->second;
    }

    /// Guaranteed lower bound on the power of main variable i (-kInf if none).
    int lb(std::size_t var) const { return meta_.zero ? kInf : meta_.main[ctx_->main_pos(var)].lb; }
    int ub(std::size_t var) const { return meta_.zero ? -kInf : meta_.main[ctx_->main_pos(var)].ub; }

    /// Power-sum range over main variables implied by the degree range.
    std::pair<int, int> pow_sum_range() const;
    /// True when no monomial with these main powers can occur in the exact object.
    bool violates_support(const std::vector<int>& pows) const;
    /// True when the coefficients at these main powers are exactly known.
    bool known_at(const std::vector<int>& pows) const;
    /// True when every point of the caps box is exact.
    bool fully_known() const {
        for (std::size_t i = 0; i < known_.size(); ++i)
            if (!known_[i] && ctx_->index_inside(i)) return false;
        return true;
    }

    /// Same metadata and mask, new terms. Caller guarantees soundness (linear pointwise maps).
    Series with_terms(Terms terms) const {
        Series out = *this;
        out.terms_ = std::move(terms);
        out.drop_unknown();
        return out;
    }

    Series& operator+=(const Series& o);
    Series& operator-=(const Series& o);
    Series& operator*=(const Rational& c);
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator-(Series a) { return a *= Rational(-1); }
    friend Series operator*(Series a, const Rational& c) { return a *= c; }
    friend Series operator*(const Rational& c, Series a) { return a *= c; }

    /// Removes stored terms at points not marked exact.
    void drop_unknown();

private:
    void tighten_bounds();

    ContextPtr ctx_;
    Terms terms_;
    SeriesMeta meta_;
    std::vector<std::uint8_t> known_;
};

// ---------------------------------------------------------------------------
// Operations (series_ops.hpp holds the template definitions)

/// Coefficient-wise product.  Throws SummabilityError when some output
/// coefficient would be an infinite sum.  The output is exact wherever every
/// contributing input coefficient was exact.
template <class A, class B>
Series<product_t<A, B>> s_mul(const Series<A>& a, const Series<B>& b);

struct PowBox;
/// The product restricted to main powers in target; unknown elsewhere.
template <class A, class B>
Series<product_t<A, B>> s_mul_within(const Series<A>& a, const Series<B>& b, const PowBox& target);

/// d/d var, with d(log x)/dx = x^{-1} and d(e^{q log x})/dx = q x^{-1} e^{q log x}.
template <class C>
Series<C> s_derive(std::size_t var, const Series<C>& a);

/// e^{sign * dir * d/d var} a = a(var + sign*dir), as a series in dir.
/// dir is an aux variable or a main variable on which a does not depend.
template <class C>
Series<C> taylor_shift(const Series<C>& a, std::size_t var, std::size_t dir, int sign = 1);

/// e^{w d/d var} a for w a series in aux variables only, each term of positive degree.
template <class C>
Series<C> taylor_shift_series(const Series<C>& a, std::size_t var, const Series<Rational>& w);

/// Substitutes var for e^{log var}. Rejects series with log-degree in var.
template <class C>
Series<C> phi(std::size_t var, const Series<C>& a);

/// var -> -var. Only defined without e^{log}/log slots in var.
template <class C>
Series<C> negate_var(std::size_t var, const Series<C>& a);

/// Formal exponential sum_n w^n/n!; w must raise a grading (see log_expand).
template <class C>
Series<C> s_exp(const Series<C>& w);

/// log(1 + w) = sum_{i>=1} (-1)^{i+1} w^i / i.  Every term of w must have
/// positive grade, where the grade counts aux degrees plus powers of main
/// variables whose lower bound is nonnegative.
template <class C>
Series<C> log_expand(const Series<C>& w);

/// Rational-to-Fock coefficient promotion.
Series<FockVector> promote(const Series<Rational>& s);

/// Re-expresses a series in another context; var_map[i] is the target index of source variable i.
template <class C>
Series<C> embed(const Series<C>& s, const ContextPtr& target, const std::vector<std::size_t>& var_map);

/// (sa*A + sb*B)^r with B expanded in nonnegative powers.
Series<Rational> binom_expand(const ContextPtr& ctx, int r, std::size_t a, int sa, std::size_t b, int sb);
/// Rational exponent entry point: rejects non-integer r (the result would leave the integer lattice).
Series<Rational> binom_expand(const ContextPtr& ctx, const Rational& r, std::size_t a, int sa, std::size_t b, int sb);
/// Coefficient of A^{r-k} B^k in (A + sb*B)^r for rational r.
Rational binom_expand_coefficient(const Rational& r, int sb, int k);

/// A signed sum s1*v1 + s2*v2 (v2 optional), v2 expanded in nonnegative powers.
struct DeltaArg {
    std::size_t v1;
    int s1 = 1;
    std::optional<std::size_t> v2;
    int s2 = 1;
};

/// den^{-1} delta(num / (den_sign * den)), built from the two binomial
/// expansions of den^{-1} delta(v1/den) followed by a sign change and a
/// Taylor shift.
Series<Rational> delta_expand(const ContextPtr& ctx, const DeltaArg& num, std::size_t den, int den_sign = 1);

/// Per main variable, an inclusive [lo, hi] range of powers; empty when lo > hi somewhere.
struct PowBox {
    std::vector<int> lo;
    std::vector<int> hi;

    static PowBox uniform(const SeriesContext& ctx, int radius);
    bool empty() const;
    bool contains(const std::vector<int>& pows) const;
};

/// Coefficient-wise comparison over every monomial whose main powers lie in box.
/// Throws WindowError if either side is not exact somewhere in the box.
template <class C>
CheckReport compare(const Series<C>& lhs, const Series<C>& rhs, const PowBox& box);

std::string render_key(const SeriesContext& ctx, const Exponents& key);
nlohmann::json key_to_json(const SeriesContext& ctx, const Exponents& key);

template <class C>
nlohmann::json to_json(const Series<C>& s);

nlohmann::json coeff_to_json(const Rational& r);
nlohmann::json coeff_to_json(const FockVector& v);

}  // namespace logvertex

#include "logvertex/series_ops.hpp"
