#pragma once

// Delta-function identities as coefficient-wise checks over x, y, z.

#include "logvertex/check_report.hpp"
#include "logvertex/series.hpp"

namespace logvertex {

/// Powers |x| <= cap_x etc. are compared; a negative cap means an empty window.
struct Window {
    int cap_x = 6;
    int cap_y = 6;
    int cap_z = 6;
    int deriv_order = 2;

    static Window uniform(int n, int deriv = 2) { return {n, n, n, deriv}; }
    bool empty() const { return cap_x < 0 || cap_y < 0 || cap_z < 0; }
};

// Deliberate breakages used to confirm that the checks can fail.
enum class Mutation { none, flip_sign, odd_exponent };

/// Context with main variables x, y, z and caps enlarged by margin around w.
ContextPtr delta_context(const Window& w, int margin);
PowBox delta_box(const SeriesContext& ctx, const Window& w);

/// y^{-1} delta((x-z)/y) = x^{-1} delta((y+z)/x).
CheckReport two_term_check(const Window& w, Mutation mut = Mutation::none);

/// z^{-1} delta((x-y)/z) - z^{-1} delta((-y+x)/z) = x^{-1} delta((y+z)/x), both as delta
/// expansions and through the six binomial terms, including the three cancelling pairs.
/// The mutation flips the sign of the last term.
CheckReport three_term_check(const Window& w, Mutation mut = Mutation::none);

/// The six binomial terms T1..T6 of the three-term identity in context ctx.
std::vector<Series<Rational>> three_term_pieces(const ContextPtr& ctx);

/// (1/n!) d_y^n y^{-1}delta(x/y) = ((-1)^n/n!) d_x^n y^{-1}delta(x/y) = (x-y)^{-n-1} - (-y+x)^{-n-1}.
CheckReport derivative_identity_check(int n, const Window& w);

struct SubstExponents {
    int l1 = 0, l2 = 0, m1 = 0, m2 = 0, n1 = 0, n2 = 0;
};

/// phi_{x,y,z}[x^{-1}delta((y+z)/x) f(x,y,z)] agrees with the same expression
/// after f(x,y,z) -> f(y+z,y,z) and after f(x,y,z) -> f(x,x-z,z), for
/// f = x^{l1}e^{l2 log x} y^{m1}e^{m2 log y} z^{n1}e^{n2 log z}.
CheckReport substitution_check(const SubstExponents& f, const Window& w);

}  // namespace logvertex
