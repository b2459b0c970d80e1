#pragma once

// Fields on Xi and the vertex operator map.
//
// Fields act coefficient-wise on series with coefficients in Xi.  For a main
// variable x,
//
//     h^+(x) = 2 log x d/dxi_0 - 2 sum_{n>0} (x^{-n}/n) d/dxi_n
//     h^-(x) = sum_{m>0} xi_m x^m
//
// (the xi_0 summand of h^- only ever occurs exponentiated, as the charge
// shift e^{m xi_0}).  Upsilon(u, x) for u = e^{m xi_0} prod xi_n^{a_n} is the
// normally ordered product of :e^{m h(x)}: and the fields h^{(n)}(x)/n!, and
// Y(u, x) = phi_x Upsilon(u, x).

#include "logvertex/check_report.hpp"
#include "logvertex/delta.hpp"
#include "logvertex/series.hpp"

#include <map>
#include <utility>
#include <vector>

namespace logvertex {

using FSeries = Series<FockVector>;

struct FieldFactor {
    enum class Kind { exp_charge, level_deriv };
    Kind kind = Kind::exp_charge;
    int value = 0;  // the charge m, or the level n >= 1

    friend bool operator==(const FieldFactor&, const FieldFactor&) = default;
};

/// e^{m xi_0} prod xi_n^{a_n}  ->  ExpCharge(m) followed by LevelDeriv(n) repeated a_n times, levels ascending.
std::vector<FieldFactor> field_factors(const FockMonomial& u);

/// Multiplication by e^{m xi_0}.
FockVector charge_shift(const FockVector& v, int m);
FSeries charge_shift(const FSeries& s, int m);

/// Field operators inside one context.  The engine caches the creation
/// series it builds; use one engine per thread.
class FieldEngine {
public:
    explicit FieldEngine(ContextPtr ctx);
    const ContextPtr& context() const { return ctx_; }

    FSeries state(const FockVector& v) const;
    FSeries vacuum() const { return state(FockVector(Rational(1))); }

    /// h^+(x), including the 2 log x d/dxi_0 term.
    FSeries h_plus(const FSeries& s, std::size_t x) const;
    /// The m >= 1 part of h^-(x).
    FSeries h_minus(const FSeries& s, std::size_t x);
    /// Annihilation part of h^{(n)}(x)/n!, n >= 1.
    FSeries annihilate(const FSeries& s, std::size_t x, int n) const;
    /// Creation part of h^{(n)}(x)/n!: multiplication by sum_{j>=n} binom(j,n) xi_j x^{j-n}.
    FSeries create(const FSeries& s, std::size_t x, int n);
    /// e^{m h^+(x)}: e^{2m c log x} on charge c, after the terminating exponential of the derivative sum.
    FSeries exp_plus(const FSeries& s, std::size_t x, int m) const;
    /// e^{m h^-(x)}, charge shift included.
    FSeries exp_minus(const FSeries& s, std::size_t x, int m);

    /// Upsilon(u, x) s by the subset expansion of the normally ordered product.
    FSeries normal_ordered(const FockMonomial& u, std::size_t x, const FSeries& s);
    FSeries upsilon(const FockVector& u, std::size_t x, const FSeries& s);
    /// Upsilon(U, x) s for U a series in the other variables with coefficients
    /// in Xi, applied term by term.  U must not depend on x, and no other main
    /// variable may occur in both U and s.
    FSeries upsilon(const FSeries& u, std::size_t x, const FSeries& s);

private:
    FSeries normal_ordered_inner(const FockMonomial& u, std::size_t x, const FSeries& s);
    const FSeries& creation_chain(const FockMonomial& xi_part, std::size_t x, const FSeries& s,
                                  std::map<FockMonomial, FSeries>& memo);
    FSeries convolve_inner(const FSeries& u, std::size_t x, const FSeries& s, bool scalar,
                           std::map<FockMonomial, FSeries>& images, std::map<FockMonomial, FSeries>& chain);
    const FSeries& creation_series(std::size_t x, int n);
    const FSeries& exp_creation_series(std::size_t x, int m);

    ContextPtr ctx_;
    std::map<std::pair<std::size_t, int>, FSeries> creation_;
    std::map<std::pair<std::size_t, int>, FSeries> exp_creation_;
};

// One-variable entry points.  The result lives in a context with the single
// main variable "x" retained on [xmin, xmax] and is exact there; internal
// windows are enlarged as needed.

FSeries h_plus_apply(const FockVector& v, int xmin, int xmax);
FSeries h_minus_apply(const FockVector& v, int xmin, int xmax);
FSeries normal_ordered_apply(const FockMonomial& u, const FockVector& v, int xmin, int xmax);
FSeries upsilon_apply(const FockVector& u, const FockVector& v, int xmin, int xmax);
FSeries Y_apply(const FockVector& u, const FockVector& v, int xmin, int xmax);

/// Modes u_n v = coefficient of x^{-n-1} in Y(u,x)v, for -n-1 in [lb, top].
struct ModeTable {
    int lb = 0;    // Y(u,x)v has no power of x below lb
    int top = 0;
    std::map<int, FockVector> modes;
};

ModeTable mode_table(const FockVector& u, const FockVector& v, int top);
FockVector mode(const FockVector& u, int n, const FockVector& v);

/// Memoized modes per pair of basis monomials.  Not thread-safe.
class ModeCache {
public:
    FockVector mode(const FockVector& u, int n, const FockVector& v);
    /// Largest n for which u_n v can be nonzero; INT_MIN when Y(u,x)v = 0.
    int max_mode(const FockVector& u, const FockVector& v);
    std::size_t size() const { return memo_.size(); }

private:
    struct Entry {
        int lb = 0;
        int top = 0;
        std::map<int, FockVector> by_power;
    };
    const Entry& entry(const FockMonomial& u, const FockMonomial& v, int need_top);

    std::map<std::pair<FockMonomial, FockMonomial>, Entry> memo_;
};

/// Coefficient-wise comparison of two elements of Xi.
CheckReport compare_fock(const FockVector& lhs, const FockVector& rhs);

/// [h^+(x), h^-(z)] v = 2 log(x-z) v on |x|,|z| <= caps, with the xi_0 part
/// taken through the charge shift, plus centrality: the commutator on v is
/// the commutator on 1 times v.
CheckReport commutator_check(const FockVector& v, int caps);

/// :e^{m h(x)}::e^{n h(z)}: v = :e^{m h(x) + n h(z)}: e^{2mn log(x-z)} v on
/// x in [xmin, xmax] and z up to z_order.  Mutation::odd_exponent uses 2mn+1.
CheckReport product_formula_check(int m, int n, const FockVector& v, int xmin = -8, int xmax = 4, int z_order = 4,
                                  Mutation mut = Mutation::none);

/// e^{-m h^+(x)} e^{n h^-(y)} 1 = e^{-2mn log(x-y)} e^{n h^-(y)} 1 with y an aux
/// variable of order aux_order, and the y = 0 case on e^{n xi_0}.
CheckReport exp_relation_check(int m, int n, int aux_order);

/// Y(1,x)u = u, Y(u,x)1 has no negative powers, and its constant term is u.
CheckReport vacuum_and_creation_check(const FockVector& u);

/// (xi_1)_a (xi_1)_b w - (xi_1)_b (xi_1)_a w = 2a delta_{a+b,0} w.
CheckReport heisenberg_check(int a, int b, const FockVector& w, ModeCache& cache);

/// Component form of the Jacobi identity at x^{-m-1} y^{-k-1} z^{-n-1}.
CheckReport jacobi_check(const FockVector& u, const FockVector& v, const FockVector& w, int m, int n, int k,
                         ModeCache& cache);
CheckReport jacobi_check(const FockVector& u, const FockVector& v, const FockVector& w, int m, int n, int k);

struct GeneratingCharges {
    int m0 = 0, m1 = 0, n0 = 0, n1 = 0;
};

/// The generating form of the Jacobi identity for
/// A = e^{-m1 h^-(x1)} e^{-m0 xi_0}, B = e^{n1 h^-(y1)} e^{n0 xi_0} on the vacuum,
/// with x1, y1 aux variables of order aux_order, compared on |x|,|y|,|z| <= window.
/// Each of the three delta-multiplied products is checked against its closed
/// form built from prod (z + x_i - y_j)^{-2 m_i n_j}, and the first two minus
/// the third is checked to vanish.  Mutation::odd_exponent adds one to the
/// exponent of the (x, y) factor, making the sign swap wrong.
CheckReport jacobi_generating_check(const GeneratingCharges& c, int aux_order, int window,
                                    Mutation mut = Mutation::none);

/// (-z - x1 + y1)^{-k} = (z + x1 - y1)^{-k} for x1, y1 aux of order aux_order.
/// Holds exactly when k is even.
CheckReport evenness_check(int k, int aux_order, int window);

}  // namespace logvertex
