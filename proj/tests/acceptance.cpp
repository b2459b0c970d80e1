// Acceptance run: one line per criterion, exit code 0 iff every line passes.
// All comparisons are exact; the only tolerances are the wall-time limits below.

#include "logvertex/delta.hpp"
#include "logvertex/laws.hpp"
#include "logvertex/vertex.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace logvertex;

namespace {

constexpr double kDeltaLimit = 10.0;     // seconds, criterion 1
constexpr double kJacobiLimit = 120.0;   // seconds, criterion 10

struct Outcome {
    bool pass = true;
    std::string detail;
};

Outcome from(const CheckReport& r, std::size_t runs) {
    Outcome o;
    o.pass = r.pass;
    o.detail = std::to_string(runs) + " checks, " + std::to_string(r.compared) + " coefficients";
    if (!r.pass && r.witness)
        o.detail += ", witness " + r.witness->monomial + ": " + r.witness->lhs + " vs " + r.witness->rhs;
    return o;
}

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body, double limit = 0) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = Outcome{false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = std::to_string(dt).substr(0, std::to_string(dt).find('.') + 3) + " s";
    if (limit > 0) {
        timing += " (limit " + std::to_string(static_cast<int>(limit)) + " s)";
        if (dt >= limit) o.pass = false;
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s: %s [%s; %s]\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
}

FockVector one() { return FockVector(Rational(1)); }

}  // namespace

int main() {
    criterion(1, "two- and three-term delta identities, caps 6", [] {
        CheckReport r = two_term_check(Window::uniform(6));
        r.merge(three_term_check(Window::uniform(6)));
        return from(r, 2);
    }, kDeltaLimit);

    criterion(2, "derivative identity n in [0,4], caps 6", [] {
        CheckReport r;
        for (int n = 0; n <= 4; ++n) r.merge(derivative_identity_check(n, Window::uniform(6)));
        return from(r, 5);
    });

    criterion(3, "logarithmic Taylor theorem, k in [-4,4], j in [0,3], aux order 6", [] {
        CheckReport r;
        for (int k = -4; k <= 4; ++k)
            for (int j = 0; j <= 3; ++j) r.merge(log_taylor_check(k, j, 6));
        return from(r, 36);
    });

    criterion(4, "expansion associativity, n in [-3,3], aux orders 0..5", [] {
        CheckReport r;
        for (int n = -3; n <= 3; ++n)
            for (int d = 0; d <= 5; ++d) r.merge(associativity_check(n, d));
        return from(r, 42);
    });

    criterion(5, "phi commutes with d/dx on the slot sample", [] { return from(phi_derivative_check(), 1); });

    criterion(6, "[h+(x), h-(z)] = 2 log(x-z), weight <= 4, |charge| <= 2, caps 6", [] {
        CheckReport r;
        std::size_t n = 0;
        for (const auto& b : basis_monomials(4, 2)) {
            r.merge(commutator_check(FockVector(b), 6));
            ++n;
        }
        return from(r, n);
    });

    criterion(7, "product formula, m,n in [-2,2], v in {1, xi(1)e(1)}, x in [-8,4], z-order 4", [] {
        CheckReport r;
        const FockVector vs[] = {one(), FockVector::xi(1) * FockVector::charge(1)};
        for (int m = -2; m <= 2; ++m)
            for (int n = -2; n <= 2; ++n)
                for (const auto& v : vs) r.merge(product_formula_check(m, n, v, -8, 4, 4));
        return from(r, 50);
    });

    criterion(8, "vacuum and creation, weight <= 4, |charge| <= 2", [] {
        CheckReport r;
        std::size_t n = 0;
        for (const auto& b : basis_monomials(4, 2)) {
            const FockVector u(b);
            r.merge(vacuum_and_creation_check(u));
            r.merge(compare_fock(mode(u, -1, one()), u));
            ++n;
        }
        return from(r, n);
    });

    criterion(9, "Heisenberg relations, |a|,|b| <= 3, weight <= 4", [] {
        CheckReport r;
        ModeCache cache;
        std::size_t n = 0;
        for (const auto& b : basis_monomials(4, 2))
            for (int a = -3; a <= 3; ++a)
                for (int c = -3; c <= 3; ++c, ++n) r.merge(heisenberg_check(a, c, FockVector(b), cache));
        return from(r, n);
    });

    criterion(10, "Jacobi components, 216 triples, (m,n,k) in [-2,2]^3", [] {
        const FockVector s[] = {one(),
                                FockVector::charge(1),
                                FockVector::charge(-1),
                                FockVector::xi(1),
                                FockVector::xi(2),
                                FockVector::xi(1) * FockVector::charge(1)};
        CheckReport r;
        ModeCache cache;
        std::size_t n = 0;
        for (const auto& u : s)
            for (const auto& v : s)
                for (const auto& w : s)
                    for (int m = -2; m <= 2; ++m)
                        for (int a = -2; a <= 2; ++a)
                            for (int k = -2; k <= 2; ++k, ++n) r.merge(jacobi_check(u, v, w, m, a, k, cache));
        return from(r, n);
    }, kJacobiLimit);

    criterion(11, "generating Jacobi, m_i,n_j in {-1,0,1}, aux order 0..2, window 1 (plus window 2 samples)", [] {
        CheckReport r;
        std::size_t n = 0;
        for (int d = 0; d <= 2; ++d)
            for (int m0 = -1; m0 <= 1; ++m0)
                for (int m1 = -1; m1 <= 1; ++m1)
                    for (int n0 = -1; n0 <= 1; ++n0)
                        for (int n1 = -1; n1 <= 1; ++n1, ++n)
                            r.merge(jacobi_generating_check({m0, m1, n0, n1}, d, 1));
        r.merge(jacobi_generating_check({0, 0, 0, 0}, 0, 2));
        r.merge(jacobi_generating_check({1, 0, -1, 0}, 0, 2));
        r.merge(jacobi_generating_check({1, 1, -1, 0}, 2, 2));
        return from(r, n + 3);
    });

    criterion(12, "p-basis identity to order 6, p_2 and p_3 closed forms", [] {
        CheckReport r = p_basis_check(6);
        const auto p = p_polynomials(6);
        const FockVector x1 = FockVector::xi(1), x2 = FockVector::xi(2), x3 = FockVector::xi(3);
        r.merge(compare_fock(p[1], x2 + x1 * x1 * Rational(1, 2)));
        r.merge(compare_fock(p[2], x3 + x1 * x2 + x1 * x1 * x1 * Rational(1, 6)));
        return from(r, 3);
    });

    criterion(13, "mode(e(1),1,e(-1)) = 1 and mode(e(1),-1,e(-1)) = xi(2) + 1/2 xi(1)^2", [] {
        CheckReport r = compare_fock(mode(FockVector::charge(1), 1, FockVector::charge(-1)), one());
        r.merge(compare_fock(mode(FockVector::charge(1), -1, FockVector::charge(-1)),
                             FockVector::xi(2) + FockVector::xi(1, 2) * Rational(1, 2)));
        return from(r, 2);
    });

    criterion(14, "mutations fail with a witness: sign-flipped three-term, odd k_ij products", [] {
        const CheckReport muts[] = {
            three_term_check(Window::uniform(6), Mutation::flip_sign),
            jacobi_generating_check({1, 0, -1, 0}, 0, 2, Mutation::odd_exponent),
            product_formula_check(1, -1, one(), -8, 4, 4, Mutation::odd_exponent),
        };
        Outcome o{true, ""};
        for (const auto& m : muts) {
            const bool caught = !m.pass && m.witness && m.witness->lhs != m.witness->rhs;
            o.pass = o.pass && caught;
            if (!o.detail.empty()) o.detail += "; ";
            o.detail += caught ? "caught at " + m.witness->monomial : std::string("NOT caught");
        }
        return o;
    });

    std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASS" : (std::to_string(failures) + " CRITERIA FAIL").c_str());
    return failures == 0 ? 0 : 1;
}
