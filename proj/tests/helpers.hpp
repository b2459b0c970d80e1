#pragma once

#include "logvertex/series.hpp"

#include <string>
#include <vector>

namespace testutil {

struct Slot {
    std::string var;
    int pow = 0;
    int elog = 0;
    int log = 0;
};

// Key from named slots; aux variables read pow as their degree.
inline logvertex::Exponents key(const logvertex::SeriesContext& ctx, const std::vector<Slot>& slots) {
    auto k = ctx.zero_key();
    for (const auto& s : slots) {
        const auto i = ctx.index_of(s.var);
        if (ctx.is_main(i)) {
            k[ctx.pow_slot(i)] = s.pow;
            k[ctx.elog_slot(i)] = s.elog;
            k[ctx.log_slot(i)] = s.log;
        } else {
            k[ctx.deg_slot(i)] = s.pow;
        }
    }
    return k;
}

inline logvertex::Series<logvertex::Rational> mono(const logvertex::ContextPtr& ctx, const std::vector<Slot>& slots,
                                                   logvertex::Rational c = 1) {
    return logvertex::Series<logvertex::Rational>::monomial(ctx, key(*ctx, slots), c);
}

}  // namespace testutil
