#include "logvertex/cli.hpp"

#include "logvertex/laws.hpp"
#include "logvertex/vertex.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <functional>
#include <thread>

namespace logvertex {

// ---------------------------------------------------------------------------
// parsing

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    FockVector parse() {
        FockVector v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(pos_, what); }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    bool eat_word(std::string_view w) {
        skip();
        if (s_.substr(pos_, w.size()) != w) return false;
        pos_ += w.size();
        return true;
    }

    std::string digits() {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected a number");
        return std::string(s_.substr(start, pos_ - start));
    }

    // optional sign, then p or p/q
    Rational number() {
        skip();
        bool neg = false;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
        std::string text = digits();
        if (eat('/')) {
            const std::size_t at = pos_;
            std::string den = digits();
            if (mpz_class(den) == 0) throw ParseError(at, "zero denominator");
            text += "/" + den;
        }
        Rational r = parse_rational(text);
        return neg ? Rational(-r) : r;
    }

    int small_int(const char* what) {
        const std::size_t at = pos_;
        Rational r = number();
        if (r.get_den() != 1) throw ParseError(at, std::string("non-integer ") + what);
        if (!r.get_num().fits_sint_p()) throw ParseError(at, std::string(what) + " out of range");
        return static_cast<int>(r.get_num().get_si());
    }

    FockVector expr() {
        FockVector acc;
        bool neg = eat('-');
        if (!neg) eat('+');
        acc = neg ? -term() : term();
        while (true) {
            if (eat('+')) acc += term();
            else if (eat('-')) acc -= term();
            else return acc;
        }
    }

    FockVector term() {
        FockVector acc = factor();
        while (eat('*')) acc = acc * factor();
        return acc;
    }

    FockVector factor() {
        FockVector base = atom();
        if (!eat('^')) return base;
        const int k = small_int("exponent");
        if (k < 0) fail("negative exponent");
        FockVector out(Rational(1));
        for (int i = 0; i < k; ++i) out = out * base;
        return out;
    }

    FockVector atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        if (eat('(')) {
            FockVector v = expr();
            expect(')');
            return v;
        }
        if (eat_word("xi")) {
            expect('(');
            const std::size_t at = pos_;
            const int n = small_int("level");
            if (n == 0) throw ParseError(at, "xi(0) is not an element; charge is written e(m)");
            if (n < 0) throw ParseError(at, "negative level");
            expect(')');
            return FockVector::xi(n);
        }
        if (eat_word("e")) {
            expect('(');
            const int m = small_int("charge");
            expect(')');
            return FockVector::charge(m);
        }
        if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) return FockVector(number());
        fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

FockVector parse_fock(std::string_view expr) { return Parser(expr).parse(); }

// ---------------------------------------------------------------------------
// suite

CliConfig CliConfig::defaults(SuiteLevel level) {
    CliConfig c;
    c.level = level;
    c.window = level == SuiteLevel::fast ? 6 : 8;
    c.aux_order = level == SuiteLevel::fast ? 2 : 3;
    return c;
}

void CliConfig::validate() const {
    if (window <= 0) throw std::invalid_argument("window caps must be positive");
    if (aux_order < 0) throw std::invalid_argument("aux order must be nonnegative");
    if (jobs <= 0) throw std::invalid_argument("jobs must be positive");
}

namespace {

struct Task {
    std::string id;
    std::function<CheckReport()> run;
};

std::string mono_text(const FockVector& v) { return render(v); }

std::vector<Task> enumerate(const CliConfig& cfg) {
    std::vector<Task> t;
    const bool full = cfg.level == SuiteLevel::full;
    const int W = cfg.window, D = cfg.aux_order;
    auto add = [&](std::string id, std::function<CheckReport()> f) { t.push_back({std::move(id), std::move(f)}); };

    // delta
    add("delta/two-term", [W] { return two_term_check(Window::uniform(W)); });
    add("delta/three-term", [W, m = cfg.inject] { return three_term_check(Window::uniform(W), m); });
    for (int n = 0; n <= 4; ++n)
        add("delta/deriv n=" + std::to_string(n), [W, n] { return derivative_identity_check(n, Window::uniform(W)); });
    const std::vector<SubstExponents> subst{
        {0, 0, 0, 0, 0, 0}, {1, 0, -1, 0, 2, 0}, {0, 1, 0, -1, 0, 1}, {-1, 2, 1, 0, 0, -1}, {2, -1, 0, 1, -1, 0}};
    for (const auto& f : subst) {
        const std::string id = "delta/subst f=" + std::to_string(f.l1) + "," + std::to_string(f.l2) + "," +
                               std::to_string(f.m1) + "," + std::to_string(f.m2) + "," + std::to_string(f.n1) + "," +
                               std::to_string(f.n2);
        add(id, [f] { return substitution_check(f, Window::uniform(4)); });
    }

    // series laws
    for (int k = -4; k <= 4; ++k)
        for (int j = 0; j <= 3; ++j)
            add("laws/log-taylor k=" + std::to_string(k) + " j=" + std::to_string(j),
                [k, j, D] { return log_taylor_check(k, j, 2 * D); });
    for (int n = -3; n <= 3; ++n)
        add("laws/associativity n=" + std::to_string(n), [n, D] { return associativity_check(n, D); });
    add("laws/automorphism", [D] { return automorphism_check(D); });
    add("laws/phi-derivative", [] { return phi_derivative_check(); });
    add("laws/exp-log", [D] { return exp_log_check(D); });
    add("laws/p-basis", [] { return p_basis_check(6); });

    // vertex
    const int weight = full ? 4 : 2;
    for (const auto& b : basis_monomials(weight, 2)) {
        const FockVector v(b);
        add("vertex/commutator v=" + mono_text(v), [v, W] { return commutator_check(v, W); });
        add("vertex/vacuum-creation u=" + mono_text(v), [v] { return vacuum_and_creation_check(v); });
    }
    for (const auto& b : basis_monomials(weight, 1)) {
        const FockVector w(b);
        add("vertex/heisenberg w=" + mono_text(w), [w] {
            ModeCache cache;
            CheckReport r;
            for (int a = -3; a <= 3; ++a)
                for (int c = -3; c <= 3; ++c) r.merge(heisenberg_check(a, c, w, cache));
            return r;
        });
    }
    const std::vector<FockVector> pf_states{FockVector(Rational(1)), FockVector::xi(1) * FockVector::charge(1)};
    for (int m = -2; m <= 2; ++m)
        for (int n = -2; n <= 2; ++n) {
            for (const auto& v : pf_states)
                add("vertex/product m=" + std::to_string(m) + " n=" + std::to_string(n) + " v=" + mono_text(v),
                    [m, n, v] { return product_formula_check(m, n, v); });
            add("vertex/exp-relation m=" + std::to_string(m) + " n=" + std::to_string(n),
                [m, n, D] { return exp_relation_check(m, n, D); });
        }
    const std::vector<FockVector> triple_states{FockVector(Rational(1)),
                                                FockVector::charge(1),
                                                FockVector::charge(-1),
                                                FockVector::xi(1),
                                                FockVector::xi(2),
                                                FockVector::xi(1) * FockVector::charge(1)};
    for (const auto& u : triple_states)
        for (const auto& v : triple_states)
            for (const auto& w : triple_states)
                add("vertex/jacobi u=" + mono_text(u) + " v=" + mono_text(v) + " w=" + mono_text(w), [u, v, w] {
                    ModeCache cache;
                    CheckReport r;
                    for (int m = -2; m <= 2; ++m)
                        for (int n = -2; n <= 2; ++n)
                            for (int k = -2; k <= 2; ++k) r.merge(jacobi_check(u, v, w, m, n, k, cache));
                    return r;
                });
    for (int k = -4; k <= 4; k += 2)
        add("vertex/evenness k=" + std::to_string(k), [k, D] { return evenness_check(k, std::min(D, 2), 3); });

    // generating form: window 1 over every charge assignment, window 2 on a few
    auto gen_id = [](const GeneratingCharges& g, int d, int w) {
        return "vertex/generating m=" + std::to_string(g.m0) + "," + std::to_string(g.m1) +
               " n=" + std::to_string(g.n0) + "," + std::to_string(g.n1) + " D=" + std::to_string(d) +
               " window=" + std::to_string(w);
    };
    const int gen_top = full ? std::min(D, 2) : 0;
    for (int d = 0; d <= gen_top; ++d)
        for (int m0 = -1; m0 <= 1; ++m0)
            for (int m1 = -1; m1 <= 1; ++m1)
                for (int n0 = -1; n0 <= 1; ++n0)
                    for (int n1 = -1; n1 <= 1; ++n1) {
                        const GeneratingCharges g{m0, m1, n0, n1};
                        add(gen_id(g, d, 1), [g, d] { return jacobi_generating_check(g, d, 1); });
                    }
    for (auto [g, d] : {std::pair{GeneratingCharges{1, 0, -1, 0}, 0}, {GeneratingCharges{1, 1, -1, 0}, 2}})
        add(gen_id(g, d, 2), [g, d] { return jacobi_generating_check(g, d, 2); });
    return t;
}

CheckReport guarded(const Task& task) {
    try {
        return task.run();
    } catch (const std::exception& e) {
        return CheckReport::failure(Witness{"exception", nlohmann::json::object(), e.what(), ""}, 0);
    }
}

}  // namespace

SuiteResult run_suite(const CliConfig& cfg) {
    cfg.validate();
    const auto tasks = enumerate(cfg);
    SuiteResult res;
    res.entries.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < tasks.size();) {
            const auto t0 = std::chrono::steady_clock::now();
            CheckReport r = guarded(tasks[i]);
            const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            res.entries[i] = SuiteEntry{tasks[i].id, std::move(r), dt};
        }
    };
    const int n = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int j = 0; j < n; ++j) pool.emplace_back(worker);
    }
    for (const auto& e : res.entries) res.pass = res.pass && e.report.pass;
    return res;
}

nlohmann::json to_json(const SuiteResult& r) {
    nlohmann::json checks = nlohmann::json::array();
    std::size_t failed = 0;
    for (const auto& e : r.entries) {
        checks.push_back({{"id", e.id}, {"report", to_json(e.report)}});
        if (!e.report.pass) ++failed;
    }
    return {{"pass", r.pass}, {"total", r.entries.size()}, {"failed", failed}, {"checks", checks}};
}

}  // namespace logvertex
