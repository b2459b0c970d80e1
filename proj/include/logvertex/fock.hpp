#pragma once

// Exact arithmetic on the Fock-type space
//
//     C[e^{xi_0}, e^{-xi_0}, xi_1, xi_2, ...]
//
// over the rationals.  xi_0 itself never appears; it only shows up
// exponentiated, as the integer charge of a monomial.

#include "logvertex/rational.hpp"

#include <compare>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace logvertex {

/// e^{charge * xi_0} * prod_n xi_n^{exps[n]}.
///
/// Exponents are kept as a sorted list of (level, power) pairs with
/// level >= 1 and power >= 1.  Ordering is by (charge, weight, exps),
/// which fixes the canonical print order of FockVector.
class FockMonomial {
public:
    using Exponents = std::vector<std::pair<int, int>>;

    FockMonomial() = default;
    explicit FockMonomial(int charge) : charge_(charge) {}
    FockMonomial(int charge, Exponents exps);

    static FockMonomial xi(int level, int power = 1);

    int charge() const { return charge_; }
    int weight() const { return weight_; }
    const Exponents& exponents() const { return exps_; }
    int exponent(int level) const;
    int max_level() const { return exps_.empty() ? 0 : exps_.back().first; }
    bool is_one() const { return charge_ == 0 && exps_.empty(); }

    FockMonomial operator*(const FockMonomial& other) const;
    FockMonomial with_charge(int charge) const;
    /// Exponent of xi_level changed by delta; the result must stay nonnegative.
    FockMonomial adjusted(int level, int delta) const;

    friend bool operator==(const FockMonomial&, const FockMonomial&) = default;
    friend std::strong_ordering operator<=>(const FockMonomial& a, const FockMonomial& b);

private:
    int charge_ = 0;
    int weight_ = 0;
    Exponents exps_;
};

/// Finite rational linear combination of FockMonomials. Zero coefficients are never stored.
class FockVector {
public:
    using Terms = std::map<FockMonomial, Rational>;

    FockVector() = default;
    FockVector(const Rational& scalar);  // NOLINT: implicit scalar promotion is intended
    FockVector(const FockMonomial& m, const Rational& c = 1);

    static FockVector charge(int m) { return FockVector(FockMonomial(m)); }
    static FockVector xi(int level, int power = 1) { return FockVector(FockMonomial::xi(level, power)); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Rational coefficient(const FockMonomial& m) const;

    /// Adds c*m in place.
    void add_term(const FockMonomial& m, const Rational& c);

    int max_weight() const;
    int max_level() const;

    FockVector& operator+=(const FockVector& o);
    FockVector& operator-=(const FockVector& o);
    FockVector& operator*=(const Rational& c);

    friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
    friend FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
    friend FockVector operator-(FockVector a) { return a *= Rational(-1); }
    friend FockVector operator*(FockVector a, const Rational& c) { return a *= c; }
    friend FockVector operator*(const Rational& c, FockVector a) { return a *= c; }
    friend FockVector operator*(const FockVector& a, const FockVector& b) { return fv_mul(a, b); }
    friend bool operator==(const FockVector&, const FockVector&) = default;

    friend FockVector fv_mul(const FockVector& a, const FockVector& b);

private:
    Terms terms_;
};

/// d/d xi_n.  For n = 0 this multiplies every monomial by its charge.
FockVector d_xi(int level, const FockVector& v);

/// Splits v into charge-homogeneous pieces; zero maps to an empty map.
std::map<int, FockVector> charge_decompose(const FockVector& v);

/// p_1 .. p_N, the coefficients of exp(sum_{n>=1} xi_n y^n) = sum_k p_k y^k.
///
/// Uses the recurrence k p_k = sum_{n=1}^{k} n xi_n p_{k-n}, obtained by
/// differentiating the generating function in y.
std::vector<FockVector> p_polynomials(int order);

/// Canonical text, e.g. "e(-1)*xi(1)^2 + 1/2*xi(3)". Zero prints as "0".
std::string render(const FockMonomial& m);
std::string render(const FockVector& v);

/// All basis monomials with weight <= max_weight and |charge| <= max_charge, in canonical order.
std::vector<FockMonomial> basis_monomials(int max_weight, int max_charge);

}  // namespace logvertex
