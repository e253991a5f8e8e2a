#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "entclt/bound_report.hpp"
#include "entclt/entropy.hpp"
#include "entclt/lattice_pmf.hpp"
#include "entclt/normal.hpp"
#include "entclt/numeric.hpp"
#include "entclt/quadrature.hpp"

namespace entclt {

/// Two places the interpolation path can start from: the bare lattice
/// variable, or the lattice variable with a uniform cell fill added.
enum class SmoothKind { lattice_smoothed, lattice_uniform_smoothed };

/// |lhs - rhs| tolerance for the integral-identity check: two independent
/// numerical pipelines (closed-form discrete side vs. double quadrature)
/// meet here, so the budget is honest rather than tight.
inline constexpr double kDeBruijnTolerance = 1e-3;

inline constexpr std::size_t kDeBruijnDefaultNodes = 64;

/// Exact mixture form of sqrt(1-t) Y + sqrt(t) Z where Y is a lattice
/// variable (optionally with a uniform cell fill) and Z is an independent
/// Gaussian. Each mixture component is location + scaled uniform + Gaussian,
/// so the density and its derivative have closed forms.
class GaussianSmoothedDensity {
public:
    GaussianSmoothedDensity(SmoothKind kind, std::vector<double> locations,
                            std::vector<double> weights, double gaussian_variance,
                            double uniform_halfwidth, double t)
        : kind_(kind),
          locations_(std::move(locations)),
          weights_(std::move(weights)),
          gaussian_variance_(gaussian_variance),
          uniform_halfwidth_(uniform_halfwidth),
          t_(t) {
        if (locations_.empty() || locations_.size() != weights_.size())
            throw std::invalid_argument(
                "entclt::GaussianSmoothedDensity: locations/weights size mismatch");
        if (!(gaussian_variance_ > 0.0))
            throw std::invalid_argument(
                "entclt::GaussianSmoothedDensity: Gaussian component variance must be positive");
        if (kind_ == SmoothKind::lattice_uniform_smoothed ? !(uniform_halfwidth_ > 0.0)
                                                          : uniform_halfwidth_ != 0.0)
            throw std::invalid_argument(
                "entclt::GaussianSmoothedDensity: uniform halfwidth inconsistent with kind");
        if (!(t_ > 0.0) || !(t_ < 1.0))
            throw std::invalid_argument("entclt::GaussianSmoothedDensity: t must lie in (0, 1)");
        CompensatedSum mass;
        for (double w : weights_) {
            if (w < 0.0)
                throw std::invalid_argument(
                    "entclt::GaussianSmoothedDensity: weights must be nonnegative");
            mass.add(w);
        }
        if (std::abs(mass.value() - 1.0) > 1e-12)
            throw std::invalid_argument(
                "entclt::GaussianSmoothedDensity: weights must sum to 1");
    }

    SmoothKind kind() const noexcept { return kind_; }
    const std::vector<double>& component_locations() const noexcept { return locations_; }
    const std::vector<double>& component_weights() const noexcept { return weights_; }
    double gaussian_variance() const noexcept { return gaussian_variance_; }
    double uniform_halfwidth() const noexcept { return uniform_halfwidth_; }
    double t() const noexcept { return t_; }

    double density(double x) const {
        const double sigma = std::sqrt(gaussian_variance_);
        CompensatedSum acc;
        for (std::size_t j = 0; j < locations_.size(); ++j) {
            const double w = weights_[j];
            if (w <= 0.0) continue;
            if (kind_ == SmoothKind::lattice_smoothed) {
                acc.add(w * normal_pdf(x, locations_[j], gaussian_variance_));
            } else {
                acc.add(w *
                        gaussian_cell_mass(x - uniform_halfwidth_, x + uniform_halfwidth_,
                                           locations_[j], sigma) /
                        (2.0 * uniform_halfwidth_));
            }
        }
        return acc.value();
    }

    double density_derivative(double x) const {
        CompensatedSum acc;
        for (std::size_t j = 0; j < locations_.size(); ++j) {
            const double w = weights_[j];
            if (w <= 0.0) continue;
            if (kind_ == SmoothKind::lattice_smoothed) {
                const double z = (locations_[j] - x) / gaussian_variance_;
                acc.add(w * z * normal_pdf(x, locations_[j], gaussian_variance_));
            } else {
                acc.add(w *
                        (normal_pdf(x + uniform_halfwidth_, locations_[j], gaussian_variance_) -
                         normal_pdf(x - uniform_halfwidth_, locations_[j], gaussian_variance_)) /
                        (2.0 * uniform_halfwidth_));
            }
        }
        return acc.value();
    }

    double mean() const {
        CompensatedSum acc;
        for (std::size_t j = 0; j < locations_.size(); ++j) acc.add(weights_[j] * locations_[j]);
        return acc.value();
    }

    /// Exact variance from the mixture moments: spread of the locations plus
    /// the Gaussian variance plus the uniform component's (halfwidth)^2/3.
    double variance() const {
        const double mu = mean();
        CompensatedSum acc;
        for (std::size_t j = 0; j < locations_.size(); ++j) {
            const double c = locations_[j] - mu;
            acc.add(weights_[j] * c * c);
        }
        double v = acc.value() + gaussian_variance_;
        if (kind_ == SmoothKind::lattice_uniform_smoothed)
            v += uniform_halfwidth_ * uniform_halfwidth_ / 3.0;
        return v;
    }

private:
    SmoothKind kind_;
    std::vector<double> locations_;
    std::vector<double> weights_;
    double gaussian_variance_;
    double uniform_halfwidth_;
    double t_;
};

/// Mixture form of sqrt(1-t) Y + sqrt(t) Z with Y = X (or X + span * U when
/// with_uniform) and Z Gaussian with Y's mean and variance. U is uniform on
/// a unit cell [0, 1), matching the left-edge quantisation convention.
inline GaussianSmoothedDensity smooth(const LatticePmf& p, double t, bool with_uniform) {
    if (!(t > 0.0) || !(t < 1.0))
        throw std::invalid_argument("entclt::smooth: t must lie in (0, 1)");
    const Moments m = moments(p);
    const double h = p.span();
    const double mean_y = with_uniform ? m.mean + 0.5 * h : m.mean;
    const double var_y = with_uniform ? m.variance + h * h / 12.0 : m.variance;
    if (!(var_y > 0.0))
        throw std::invalid_argument("entclt::smooth: degenerate input (zero variance and no "
                                    "uniform component)");
    const double root_1mt = std::sqrt(1.0 - t);
    const double shift = std::sqrt(t) * mean_y;
    std::vector<double> locations(p.support_size());
    for (std::size_t j = 0; j < locations.size(); ++j) {
        const double centre = with_uniform ? p.point(j) + 0.5 * h : p.point(j);
        locations[j] = root_1mt * centre + shift;
    }
    return GaussianSmoothedDensity(
        with_uniform ? SmoothKind::lattice_uniform_smoothed : SmoothKind::lattice_smoothed,
        std::move(locations), p.weights(), t * var_y,
        with_uniform ? root_1mt * 0.5 * h : 0.0, t);
}

/// Panel breakpoints for spatial quadrature: a 12-standard-deviation window
/// around the component envelope, split at every plateau edge (uniform kind)
/// or kernel centre so the adaptive rule never straddles a feature.
inline std::vector<double> quadrature_breakpoints(const GaussianSmoothedDensity& d) {
    const double s = std::sqrt(d.gaussian_variance());
    const double uh = d.uniform_halfwidth();
    const auto [min_it, max_it] =
        std::minmax_element(d.component_locations().begin(), d.component_locations().end());
    const double lo = *min_it - uh - 12.0 * s;
    const double hi = *max_it + uh + 12.0 * s;
    std::vector<double> pts;
    pts.reserve(3 * d.component_locations().size() + 2);
    pts.push_back(lo);
    for (std::size_t j = 0; j < d.component_locations().size(); ++j) {
        if (d.component_weights()[j] <= 0.0) continue;
        const double c = d.component_locations()[j];
        if (d.kind() == SmoothKind::lattice_uniform_smoothed) {
            pts.push_back(c - uh);
            pts.push_back(c + uh);
        } else {
            pts.push_back(c);
        }
    }
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    std::vector<double> dedup;
    dedup.reserve(pts.size());
    const double min_gap = 1e-13 * (hi - lo);
    for (double x : pts)
        if (dedup.empty() || x - dedup.back() > min_gap) dedup.push_back(x);
    return dedup;
}

namespace detail {

template <typename Integrand>
double integrate_over_density(const GaussianSmoothedDensity& d, Integrand&& g, double tol) {
    const std::vector<double> breakpoints = quadrature_breakpoints(d);
    return integrate_adaptive([&](double x) { return g(x); }, breakpoints, tol);
}

}  // namespace detail

/// Total mass of the density by quadrature; 1 within 1e-10 for every
/// correctly constructed density (diagnostic).
inline double integrate_density(const GaussianSmoothedDensity& d,
                                double tol = kQuadratureTolerance) {
    return detail::integrate_over_density(d, [&](double x) { return d.density(x); }, tol);
}

/// Differential entropy -int f log f by quadrature.
inline double differential_entropy(const GaussianSmoothedDensity& d,
                                   double tol = kQuadratureTolerance) {
    return detail::integrate_over_density(
        d,
        [&](double x) {
            const double f = d.density(x);
            return f > 0.0 ? -f * std::log(f) : 0.0;
        },
        tol);
}

/// Fisher information I = int (f')^2 / f by adaptive quadrature over the
/// breakpoint window.
inline double fisher_information(const GaussianSmoothedDensity& d,
                                 double tol = kQuadratureTolerance) {
    return detail::integrate_over_density(
        d,
        [&](double x) {
            const double f = d.density(x);
            if (f < 1e-300) return 0.0;
            const double fp = d.density_derivative(x);
            return fp * fp / f;
        },
        tol);
}

/// Standardised Fisher information J = sigma^2 I - 1, zero exactly for a
/// Gaussian. Clamped to 0 when quadrature round-off leaves it in
/// [-1e-8, 0); more negative values indicate a genuine failure.
inline double standardized_fisher(const GaussianSmoothedDensity& d,
                                  double tol = kQuadratureTolerance) {
    const double j = d.variance() * fisher_information(d, tol) - 1.0;
    if (j < -1e-8)
        throw numeric_error("entclt::standardized_fisher: J = " + std::to_string(j) +
                            " below -1e-8");
    return std::max(0.0, j);
}

/// Both sides of the integral identity, kept for inspection alongside the
/// pass/fail report.
struct DeBruijnResult {
    double discrete_side = 0.0;  ///< D(Y) in closed form
    double smooth_side = 0.0;    ///< endpoint_term + integral_term
    double endpoint_term = 0.0;  ///< D(Y/sqrt(2) + Z/sqrt(2)) by quadrature
    double integral_term = 0.0;  ///< int_0^{1/2} J(path(t)) dt / (2(1-t))
    BoundReport report;
};

/// Integral form of the de Bruijn identity along the Gaussian interpolation:
/// D(Y) = D(Y/sqrt(2) + Z/sqrt(2)) + int_0^{1/2} J(sqrt(1-t) Y + sqrt(t) Z)
/// dt/(2(1-t)), with Y = S^_n + (h/sqrt(n)) U and Z matched to Y's mean and
/// variance. The substitution t = u^2 clusters quadrature nodes near t = 0,
/// where J blows up like 1/sqrt(t); the weight dt/(2(1-t)) is folded in, so
/// the u-integrand u J(u^2)/(1-u^2) stays bounded.
inline DeBruijnResult de_bruijn_check(const LatticePmf& p_sn, std::int64_t n, double h,
                                      double sigma2,
                                      std::size_t quad_points = kDeBruijnDefaultNodes,
                                      double pass_tolerance = kDeBruijnTolerance,
                                      double spatial_tol = kQuadratureTolerance) {
    if (quad_points == 0)
        throw std::invalid_argument("entclt::de_bruijn_check: quad_points must be >= 1");
    DeBruijnResult result;
    result.discrete_side = smoothed_relative_entropy(p_sn, n, h, sigma2);

    const LatticePmf view = detail::standardized_sum(p_sn, n, sigma2);

    const GaussianSmoothedDensity half = smooth(view, 0.5, true);
    result.endpoint_term =
        gaussian_entropy(half.variance()) - differential_entropy(half, spatial_tol);

    const QuadratureRule rule = gauss_legendre(quad_points, 0.0, 1.0 / std::sqrt(2.0));
    CompensatedSum integral;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = rule.nodes[i];
        const double j = standardized_fisher(smooth(view, u * u, true), spatial_tol);
        integral.add(rule.weights[i] * j * u / (1.0 - u * u));
    }
    result.integral_term = integral.value();
    result.smooth_side = result.endpoint_term + result.integral_term;
    result.report = make_bound_report(
        "de_bruijn", std::abs(result.discrete_side - result.smooth_side), pass_tolerance);
    return result;
}

}  // namespace entclt
