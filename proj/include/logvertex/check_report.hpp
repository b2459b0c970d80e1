#pragma once

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <string>

namespace logvertex {

/// Where two sides of an identity first disagree.
struct Witness {
    std::string monomial;   // rendered exponent tuple, e.g. "x^0*y^-1*z^0"
    nlohmann::json exps;    // structured form of the same tuple
    std::string lhs;
    std::string rhs;
};

/// Result of an identity check. pass is true exactly when witness is empty.
struct CheckReport {
    bool pass = true;
    std::optional<Witness> witness;
    std::size_t compared = 0;

    static CheckReport failure(Witness w, std::size_t compared) {
        return CheckReport{false, std::move(w), compared};
    }

    /// Folds another report into this one; the first witness wins.
    void merge(const CheckReport& other) {
        compared += other.compared;
        if (pass && !other.pass) {
            pass = false;
            witness = other.witness;
        }
    }
};

nlohmann::json to_json(const CheckReport& r);

}  // namespace logvertex
