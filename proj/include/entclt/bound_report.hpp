#pragma once

#include <string>
#include <utility>

namespace entclt {

/// Default slack tolerance: a bound "passes" when rhs - lhs >= -tolerance.
/// Chosen to absorb float accumulation across ~1e5-cell sums.
inline constexpr double kBoundTolerance = 1e-9;

/// Outcome of one inequality check: lhs <= rhs up to a tolerance.
struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  ///< rhs - lhs
    bool pass = false;   ///< slack >= -tolerance used at construction
};

inline BoundReport make_bound_report(std::string name, double lhs, double rhs,
                                     double tolerance = kBoundTolerance) {
    BoundReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.pass = r.slack >= -tolerance;
    return r;
}

}  // namespace entclt
