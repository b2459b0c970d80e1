#pragma once

#include "logvertex/series.hpp"

namespace logvertex {

/// Runs attempt(margin) with growing margins until no WindowError escapes.
/// The margin is the number of extra powers retained beyond the compared box.
template <class F>
auto with_enlargement(F&& attempt, int first_margin, int tries = 6) {
    int margin = first_margin;
    for (int t = 1;; ++t) {
        try {
            return attempt(margin);
        } catch (const WindowError&) {
            if (t >= tries) throw;
            margin = 2 * margin + 2;
        }
    }
}

}  // namespace logvertex
