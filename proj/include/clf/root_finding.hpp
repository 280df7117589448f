#pragma once

#include <cmath>
#include <functional>

#include "clf/errors.hpp"

namespace clf {

struct Bracket {
    double lo;
    double hi;
};

/// Bisection for a monotone predicate.
///
/// `pred` must be false at `lo` and true at `hi` (or the reverse ordering of
/// the two ends, as long as it changes exactly once). Bisects until the
/// bracket can no longer shrink in floating point or `max_iter` halvings, and
/// returns the final bracket; `hi` always satisfies the predicate.
template <class Pred>
Bracket bisect_predicate(Pred&& pred, double lo, double hi, int max_iter = 400)
{
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi)
            break;
        if (pred(mid))
            hi = mid;
        else
            lo = mid;
    }
    return {lo, hi};
}

/// Expands `[lo, hi]` geometrically until `pred(lo)` is false and `pred(hi)`
/// is true. `pred` must be non-decreasing (false then true) in its argument.
template <class Pred>
Bracket expand_bracket(Pred&& pred, double lo, double hi, int max_expansions = 60)
{
    double width = std::max(hi - lo, 1.0);
    int n = 0;
    while (pred(lo)) {
        if (++n > max_expansions)
            throw BracketError("bracket expansion failed on the lower side");
        lo -= width;
        width *= 2;
    }
    width = std::max(hi - lo, 1.0);
    n = 0;
    while (!pred(hi)) {
        if (++n > max_expansions)
            throw BracketError("bracket expansion failed on the upper side");
        hi += width;
        width *= 2;
    }
    return {lo, hi};
}

} // namespace clf
