#pragma once

// Expression parsing and suite orchestration behind the logvertex tool.

#include "logvertex/check_report.hpp"
#include "logvertex/delta.hpp"
#include "logvertex/fock.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace logvertex {

class ParseError : public std::invalid_argument {
public:
    ParseError(std::size_t pos, const std::string& what)
        : std::invalid_argument("parse error at " + std::to_string(pos) + ": " + what), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

/// Grammar: sums and differences of products of factors, each factor an
/// integer or p/q, e(m), xi(n) with n >= 1, or a parenthesized expression,
/// optionally raised to ^k with k >= 0.  Accepts everything render() prints.
FockVector parse_fock(std::string_view expr);

enum class SuiteLevel { fast, full };

struct CliConfig {
    SuiteLevel level = SuiteLevel::fast;
    int window = 6;      // caps of the delta and series-law windows
    int aux_order = 2;   // D
    std::optional<std::string> json_path;
    int jobs = 1;
    Mutation inject = Mutation::none;  // forwarded to the three-term delta check

    /// fast: caps 6, D = 2; full: caps 8, D = 3.
    static CliConfig defaults(SuiteLevel level);
    /// Throws std::invalid_argument on nonpositive caps or jobs, or negative D.
    void validate() const;
};

struct SuiteEntry {
    std::string id;
    CheckReport report;
    double seconds = 0;
};

struct SuiteResult {
    std::vector<SuiteEntry> entries;  // in enumeration order
    bool pass = true;
};

/// Every check of the library at the configured caps.  Entries come out in
/// enumeration order whatever cfg.jobs is; failures are reported, not thrown.
SuiteResult run_suite(const CliConfig& cfg);

/// Wall times are left out so that reruns are byte-identical.
nlohmann::json to_json(const SuiteResult& r);

}  // namespace logvertex
