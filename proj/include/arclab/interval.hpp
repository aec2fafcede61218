#pragma once

#include <cmath>
#include <limits>

namespace arclab {

/// Open interval; endpoints may be +-infinity.
struct Interval {
    double lo = 0;
    double hi = 0;

    static constexpr double inf = std::numeric_limits<double>::infinity();

    bool contains(double s) const { return s > lo && s < hi; }
    bool empty() const { return !(lo < hi); }
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
    double length() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
};

}  // namespace arclab
