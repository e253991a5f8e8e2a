#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "entclt/numeric.hpp"

namespace entclt {

/// Absolute tolerance for adaptive spatial quadrature.
inline constexpr double kQuadratureTolerance = 1e-9;

/// Subdivision depth limit; exceeding it with the tolerance unmet is a
/// numeric_error (non-convergence), not a silent acceptance.
inline constexpr int kQuadratureMaxDepth = 60;

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1] by Newton iteration on the Legendre
/// recurrence; exact for polynomials of degree 2m - 1.
inline QuadratureRule gauss_legendre(std::size_t m) {
    if (m == 0) throw std::invalid_argument("entclt::gauss_legendre: order must be >= 1");
    QuadratureRule rule;
    rule.nodes.assign(m, 0.0);
    rule.weights.assign(m, 0.0);
    const std::size_t half = (m + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double x = std::cos(pi_v * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(m) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= m; ++k) {
                const double pk = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 -
                                   (static_cast<double>(k) - 1.0) * p0) /
                                  static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(m) * (x * p1 - p0) / (x * x - 1.0);
            const double step = p1 / dp;
            x -= step;
            if (std::abs(step) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[m - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[m - 1 - i] = w;
    }
    return rule;
}

/// The same rule mapped affinely onto [a, b].
inline QuadratureRule gauss_legendre(std::size_t m, double a, double b) {
    QuadratureRule rule = gauss_legendre(m);
    const double mid = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);
    for (std::size_t i = 0; i < m; ++i) {
        rule.nodes[i] = mid + halfwidth * rule.nodes[i];
        rule.weights[i] *= halfwidth;
    }
    return rule;
}

namespace detail {

inline double adaptive_simpson_recurse(const std::function<double(double)>& f, double a, double b,
                                       double fa, double fm, double fb, double whole, double tol,
                                       double noise, int depth) {
    const double m = 0.5 * (a + b);
    // No representable point lies strictly inside [a, b]; the interval is at
    // floating-point resolution and whole is the best available estimate.
    if (!(a < m && m < b)) return whole;
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // Second clause: once the Richardson estimate falls to round-off scale
    // relative to the whole panel, the refinement difference measures noise
    // in evaluating f, which further halving cannot reduce.
    if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= noise)
        return left + right + delta / 15.0;
    if (depth <= 0)
        throw numeric_error("entclt::integrate_adaptive: subdivision limit reached on [" +
                            std::to_string(a) + ", " + std::to_string(b) + "]");
    return adaptive_simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, noise, depth - 1) +
           adaptive_simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, noise, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson integration of f over one interval to absolute
/// tolerance tol.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = kQuadratureTolerance,
                               int max_depth = kQuadratureMaxDepth) {
    if (!(b > a)) {
        if (b == a) return 0.0;
        throw std::invalid_argument("entclt::adaptive_simpson: interval reversed");
    }
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // Round-off floor for the refinement estimate, taken from the magnitude
    // of the integrand over the panel rather than the signed estimate, so
    // cancellation in whole cannot disable it.
    const double scale = (b - a) / 6.0 * (std::abs(fa) + 4.0 * std::abs(fm) + std::abs(fb));
    const double noise = 8.0 * eps_v * std::max(scale, std::abs(whole));
    return detail::adaptive_simpson_recurse(f, a, b, fa, fm, fb, whole, tol, noise, max_depth);
}

/// Integrates f over [breakpoints.front(), breakpoints.back()] panel by
/// panel, so features the caller knows about (plateau edges, kernel
/// centres) are never straddled by one coarse Simpson estimate.
inline double integrate_adaptive(const std::function<double(double)>& f,
                                 const std::vector<double>& breakpoints,
                                 double tol = kQuadratureTolerance,
                                 int max_depth = kQuadratureMaxDepth) {
    if (breakpoints.size() < 2)
        throw std::invalid_argument("entclt::integrate_adaptive: need at least two breakpoints");
    const double per_panel =
        tol / static_cast<double>(breakpoints.size() - 1);
    CompensatedSum acc;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (!(breakpoints[i + 1] >= breakpoints[i]))
            throw std::invalid_argument("entclt::integrate_adaptive: breakpoints must be sorted");
        if (breakpoints[i + 1] > breakpoints[i])
            acc.add(adaptive_simpson(f, breakpoints[i], breakpoints[i + 1], per_panel, max_depth));
    }
    return acc.value();
}

}  // namespace entclt
