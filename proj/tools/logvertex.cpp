// logvertex: command-line access to the checks and computations.
// Every subcommand prints one JSON document; the exit code is 0 iff the
// requested check passed (computations always exit 0 on success).

#include "logvertex/cli.hpp"
#include "logvertex/delta.hpp"
#include "logvertex/vertex.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>

using namespace logvertex;

namespace {

int emit(const nlohmann::json& doc, const std::string& path) {
    const std::string text = doc.dump(2);
    std::cout << text << "\n";
    if (!path.empty()) {
        std::ofstream out(path);
        if (!out) {
            std::cerr << "cannot write " << path << "\n";
            return 2;
        }
        out << text << "\n";
    }
    return 0;
}

int report_exit(const CheckReport& r, const std::string& path) {
    const int io = emit(to_json(r), path);
    return io ? io : (r.pass ? 0 : 1);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact series computations and identity checks on Xi"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string json_path;
    app.add_option("--json", json_path, "also write the JSON output to this path");

    // delta
    auto* delta = app.add_subcommand("delta", "delta-function identities");
    std::string which;
    int window = 6, n_deriv = 0;
    std::vector<int> f(6, 0);
    delta->add_option("--check", which, "identity to check")
        ->required()
        ->check(CLI::IsMember({"two-term", "three-term", "deriv", "subst"}));
    delta->add_option("--window", window, "caps |x|,|y|,|z| <= N")->check(CLI::NonNegativeNumber);
    delta->add_option("--n", n_deriv, "derivative order for deriv")->check(CLI::NonNegativeNumber);
    delta->add_option("--f", f, "exponents l1 l2 m1 m2 n1 n2 for subst")->expected(6);

    // apply
    auto* apply = app.add_subcommand("apply", "Y(u,x)v, or Upsilon(u,x)v with --upsilon");
    std::string u_text, v_text, w_text;
    int xmin = -6, xmax = 4;
    bool raw = false;
    apply->add_option("--u", u_text)->required();
    apply->add_option("--v", v_text)->required();
    apply->add_option("--xmin", xmin);
    apply->add_option("--xmax", xmax);
    apply->add_flag("--upsilon", raw, "keep e^{log x} slots (no phi)");

    // mode
    auto* mode_cmd = app.add_subcommand("mode", "u_n v");
    int n_mode = 0;
    mode_cmd->add_option("--u", u_text)->required();
    mode_cmd->add_option("--n", n_mode)->required();
    mode_cmd->add_option("--v", v_text)->required();

    // jacobi
    auto* jac = app.add_subcommand("jacobi", "component Jacobi identity");
    int jm = 0, jn = 0, jk = 0;
    jac->add_option("--u", u_text)->required();
    jac->add_option("--v", v_text)->required();
    jac->add_option("--w", w_text)->required();
    jac->add_option("--m", jm)->required();
    jac->add_option("--n", jn)->required();
    jac->add_option("--k", jk)->required();

    // suite
    auto* suite = app.add_subcommand("suite", "run every check");
    std::string level = "fast";
    std::optional<int> s_window, s_aux;
    int jobs = 1;
    suite->add_option("--level", level)->check(CLI::IsMember({"fast", "full"}));
    suite->add_option("--window", s_window, "caps (default 6 fast, 8 full)")->check(CLI::PositiveNumber);
    suite->add_option("--aux-order", s_aux, "D (default 2 fast, 3 full)")->check(CLI::NonNegativeNumber);
    suite->add_option("--jobs", jobs)->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*delta) {
            const Window w = Window::uniform(window);
            CheckReport r;
            if (which == "two-term") r = two_term_check(w);
            else if (which == "three-term") r = three_term_check(w);
            else if (which == "deriv") r = derivative_identity_check(n_deriv, w);
            else r = substitution_check(SubstExponents{f[0], f[1], f[2], f[3], f[4], f[5]}, w);
            return report_exit(r, json_path);
        }
        if (*apply) {
            const FockVector u = parse_fock(u_text), v = parse_fock(v_text);
            return emit(to_json(raw ? upsilon_apply(u, v, xmin, xmax) : Y_apply(u, v, xmin, xmax)), json_path);
        }
        if (*mode_cmd) {
            const FockVector u = parse_fock(u_text), v = parse_fock(v_text);
            const FockVector r = mode(u, n_mode, v);
            return emit({{"render", render(r)}, {"terms", coeff_to_json(r)}}, json_path);
        }
        if (*jac) {
            const FockVector u = parse_fock(u_text), v = parse_fock(v_text), w = parse_fock(w_text);
            return report_exit(jacobi_check(u, v, w, jm, jn, jk), json_path);
        }
        if (*suite) {
            CliConfig cfg = CliConfig::defaults(level == "full" ? SuiteLevel::full : SuiteLevel::fast);
            if (s_window) cfg.window = *s_window;
            if (s_aux) cfg.aux_order = *s_aux;
            cfg.jobs = jobs;
            if (!json_path.empty()) cfg.json_path = json_path;
            const auto t0 = std::chrono::steady_clock::now();
            const SuiteResult res = run_suite(cfg);
            const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            for (const auto& e : res.entries)
                if (!e.report.pass) std::cerr << "FAIL " << e.id << "\n";
            std::cerr << res.entries.size() << " checks, " << (res.pass ? "all pass" : "failures") << ", " << dt
                      << " s\n";
            const int io = emit(to_json(res), json_path);
            return io ? io : (res.pass ? 0 : 1);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
