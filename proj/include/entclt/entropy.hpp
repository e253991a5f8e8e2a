#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "entclt/bound_report.hpp"
#include "entclt/lattice_pmf.hpp"
#include "entclt/normal.hpp"
#include "entclt/numeric.hpp"

namespace entclt {

/// Discrete (Shannon) entropy in nats: -sum w log w, with 0 log 0 = 0.
inline double entropy(const LatticePmf& p) {
    CompensatedSum acc;
    for (double w : p.weights())
        if (w > 0.0) acc.add(-w * std::log(w));
    return acc.value();
}

/// The Gaussian to be quantised, together with the target grid. Each lattice
/// cell [a + kh, a + (k+1)h) receives the Gaussian probability of that cell.
struct QuantizedGaussianSpec {
    double mean = 0.0;
    double variance = 1.0;
    double offset = 0.0;  ///< a
    double span = 1.0;    ///< h

    QuantizedGaussianSpec(double mean_, double variance_, double offset_, double span_)
        : mean(mean_), variance(variance_), offset(offset_), span(span_) {
        if (!(variance > 0.0))
            throw std::invalid_argument("entclt::QuantizedGaussianSpec: variance must be positive");
        if (!(span > 0.0))
            throw std::invalid_argument("entclt::QuantizedGaussianSpec: span must be positive");
    }
};

/// Inclusive range of lattice indices.
struct IndexRange {
    std::int64_t first = 0;
    std::int64_t last = 0;
};

/// Smallest index range whose cells cover [mean - 12 sigma, mean + 12 sigma].
inline IndexRange auto_index_range(const QuantizedGaussianSpec& spec) {
    const double sigma = std::sqrt(spec.variance);
    const double lo = spec.mean - 12.0 * sigma;
    const double hi = spec.mean + 12.0 * sigma;
    IndexRange r;
    r.first = static_cast<std::int64_t>(std::floor((lo - spec.offset) / spec.span));
    r.last = static_cast<std::int64_t>(std::ceil((hi - spec.offset) / spec.span));
    return r;
}

/// A quantised Gaussian: cell weights carry true Gaussian mass (no
/// renormalisation); the captured total is tracked for diagnostics.
struct QuantizedGaussian {
    LatticePmf pmf;
    double captured_mass = 0.0;
};

/// q(a + kh) = Phi((a+(k+1)h - mu)/sigma) - Phi((a+kh - mu)/sigma) for k in
/// the given range, each cell integrated from its tail-stable direction.
inline QuantizedGaussian quantized_gaussian(const QuantizedGaussianSpec& spec, IndexRange range) {
    if (range.last < range.first)
        throw std::invalid_argument("entclt::quantized_gaussian: empty index range");
    const double sigma = std::sqrt(spec.variance);
    std::vector<double> weights;
    weights.reserve(static_cast<std::size_t>(range.last - range.first + 1));
    CompensatedSum captured;
    for (std::int64_t k = range.first; k <= range.last; ++k) {
        const double lo = spec.offset + static_cast<double>(k) * spec.span;
        const double w = gaussian_cell_mass(lo, lo + spec.span, spec.mean, sigma);
        weights.push_back(w);
        captured.add(w);
    }
    const double total = captured.value();
    if (total < 1.0 - 1e-9)
        throw std::invalid_argument("entclt::quantized_gaussian: index range too small, captured mass " +
                                    std::to_string(total));
    return QuantizedGaussian{LatticePmf::unnormalized(spec.offset, spec.span, range.first, std::move(weights)),
                             total};
}

inline QuantizedGaussian quantized_gaussian(const QuantizedGaussianSpec& spec) {
    return quantized_gaussian(spec, auto_index_range(spec));
}

namespace detail {

/// Checks nondegeneracy and returns p's exact moments.
inline Moments matched_moments(const LatticePmf& p, const char* where) {
    const Moments m = moments(p);
    if (!(m.variance > 0.0))
        throw std::invalid_argument(std::string(where) + ": degenerate pmf (zero variance)");
    return m;
}

}  // namespace detail

/// D(p || q) = sum p log(p/q) against the quantised Gaussian q described by
/// spec, on p's own lattice. Cell masses of q enter through their logarithm,
/// so cells dozens of standard deviations out stay representable.
inline double relative_entropy_to_gaussian(const LatticePmf& p, const QuantizedGaussianSpec& spec) {
    if (spec.span != p.span())
        throw std::invalid_argument("entclt::relative_entropy_to_gaussian: spec span differs from pmf span");
    const double sigma = std::sqrt(spec.variance);
    CompensatedSum acc;
    for (std::size_t j = 0; j < p.support_size(); ++j) {
        const double w = p.weights()[j];
        if (w <= 0.0) continue;
        const double lo = p.point(j);
        const double log_q = log_gaussian_cell_mass(lo, lo + p.span(), spec.mean, sigma);
        acc.add(w * (std::log(w) - log_q));
    }
    const double d = acc.value();
    if (d < -kBoundTolerance)
        throw numeric_error("entclt::relative_entropy_to_gaussian: negative divergence " +
                            std::to_string(d));
    return std::max(0.0, d);
}

/// D(p) against the Gaussian matched to p's exact mean and variance.
inline double relative_entropy_to_gaussian(const LatticePmf& p) {
    const Moments m = detail::matched_moments(p, "entclt::relative_entropy_to_gaussian");
    return relative_entropy_to_gaussian(
        p, QuantizedGaussianSpec(m.mean, m.variance, p.offset(), p.span()));
}

/// Entropy deficit of S_n: (1/2) log(2 pi e sigma^2) - [H(S_n) - log(sqrt(n)/h)].
/// Nonnegative up to the lattice correction; tends to 0 when the summands
/// obey a central limit theorem on their lattice.
inline double entropy_gap(const LatticePmf& p_sn, std::int64_t n, double h, double sigma2) {
    if (n < 1) throw std::invalid_argument("entclt::entropy_gap: n must be >= 1");
    if (!(h > 0.0) || !(sigma2 > 0.0))
        throw std::invalid_argument("entclt::entropy_gap: h and sigma2 must be positive");
    if (p_sn.span() != h)
        throw std::invalid_argument("entclt::entropy_gap: p_sn span does not equal h");
    const double normalizer = std::log(std::sqrt(static_cast<double>(n)) / h);
    return gaussian_entropy(sigma2) - (entropy(p_sn) - normalizer);
}

namespace detail {

/// Standardised view of S_n centred with the base mean inferred from S_n's
/// own exact mean (mean(S_n)/n), so convolution round-off cannot misalign it.
inline LatticePmf standardized_sum(const LatticePmf& p_sn, std::int64_t n, double sigma2) {
    const Moments m_sn = moments(p_sn);
    return standardized_view(p_sn, n, Moments{m_sn.mean / static_cast<double>(n), sigma2});
}

}  // namespace detail

/// Entropy / relative-entropy solidarity: |D(S^_n) - deficit| is bounded by
/// (h/(sigma sqrt(n))) (1 + h/(2 sigma sqrt(n))).
inline BoundReport solidarity_check(const LatticePmf& p_sn, std::int64_t n, double h, double sigma2,
                                    double tolerance = kBoundTolerance) {
    const double deficit = entropy_gap(p_sn, n, h, sigma2);
    const double d = relative_entropy_to_gaussian(detail::standardized_sum(p_sn, n, sigma2));
    const double ratio = h / (std::sqrt(sigma2) * std::sqrt(static_cast<double>(n)));
    return make_bound_report("solidarity", std::abs(d - deficit), ratio * (1.0 + 0.5 * ratio),
                             tolerance);
}

/// Maximum-entropy bound: H(S_n) - log(sqrt(n)/h) <= (1/2) log(2 pi e (sigma^2 + h^2/12n)).
inline BoundReport max_entropy_check(const LatticePmf& p_sn, std::int64_t n, double h, double sigma2,
                                     double tolerance = kBoundTolerance) {
    if (n < 1) throw std::invalid_argument("entclt::max_entropy_check: n must be >= 1");
    if (p_sn.span() != h)
        throw std::invalid_argument("entclt::max_entropy_check: p_sn span does not equal h");
    const double lhs = entropy(p_sn) - std::log(std::sqrt(static_cast<double>(n)) / h);
    const double rhs = gaussian_entropy(sigma2 + h * h / (12.0 * static_cast<double>(n)));
    return make_bound_report("max_entropy", lhs, rhs, tolerance);
}

/// D(S^_n + (h/sqrt(n)) U) with U uniform on a unit cell, in closed form:
/// the smoothed variable's differential entropy equals H(S_n) - log(sqrt(n)/h)
/// and its variance is sigma^2 + h^2/12n, so the relative entropy is the
/// max-entropy slack itself.
inline double smoothed_relative_entropy(const LatticePmf& p_sn, std::int64_t n, double h,
                                        double sigma2) {
    const BoundReport r = max_entropy_check(p_sn, n, h, sigma2);
    if (r.slack < -kBoundTolerance)
        throw numeric_error("entclt::smoothed_relative_entropy: negative divergence " +
                            std::to_string(r.slack));
    return std::max(0.0, r.slack);
}

/// Discrete-vs-smoothed comparison: |D(S^_n) - D(S^_n + (h/sqrt(n)) U)| is
/// bounded by (h/(sigma sqrt(n))) (1 + 13h/(24 sigma sqrt(n))).
inline BoundReport uniform_smoothing_check(const LatticePmf& p_sn, std::int64_t n, double h,
                                           double sigma2, double tolerance = kBoundTolerance) {
    const double d_discrete = relative_entropy_to_gaussian(detail::standardized_sum(p_sn, n, sigma2));
    const double d_smoothed = smoothed_relative_entropy(p_sn, n, h, sigma2);
    const double ratio = h / (std::sqrt(sigma2) * std::sqrt(static_cast<double>(n)));
    return make_bound_report("uniform_smoothing", std::abs(d_discrete - d_smoothed),
                             ratio * (1.0 + (13.0 / 24.0) * ratio), tolerance);
}

namespace detail {

struct PinskerParts {
    double tv = 0.0;  ///< total variation between p and the quantised Gaussian
    double d = 0.0;   ///< relative entropy D(p || quantised Gaussian)
};

/// Computes TV and D against the quantised Gaussian described by spec, with
/// the Gaussian truncated only after capturing mass >= 1 - 1e-12.
inline PinskerParts pinsker_parts(const LatticePmf& p, const QuantizedGaussianSpec& spec) {
    if (spec.span != p.span() || spec.offset != p.offset())
        throw std::invalid_argument("entclt::pinsker_check: spec lattice differs from pmf lattice");
    IndexRange range = auto_index_range(spec);
    range.first = std::min(range.first, p.first_index());
    range.last = std::max(range.last, p.first_index() + static_cast<std::int64_t>(p.support_size()) - 1);
    const QuantizedGaussian q = quantized_gaussian(spec, range);
    if (q.captured_mass < 1.0 - 1e-12)
        throw numeric_error("entclt::pinsker_check: captured Gaussian mass below 1 - 1e-12");
    PinskerParts parts;
    parts.tv = total_variation(p, q.pmf);
    parts.d = relative_entropy_to_gaussian(p, spec);
    return parts;
}

}  // namespace detail

/// Pinsker's inequality: 2 TV(p, q)^2 <= D(p || q) for the quantised
/// Gaussian q described by spec (sharing p's lattice).
inline BoundReport pinsker_check(const LatticePmf& p, const QuantizedGaussianSpec& spec,
                                 double tolerance = kBoundTolerance) {
    const detail::PinskerParts parts = detail::pinsker_parts(p, spec);
    return make_bound_report("pinsker", 2.0 * parts.tv * parts.tv, parts.d, tolerance);
}

/// Pinsker's inequality against p's moment-matched quantised Gaussian.
inline BoundReport pinsker_check(const LatticePmf& p, double tolerance = kBoundTolerance) {
    const Moments m = detail::matched_moments(p, "entclt::pinsker_check");
    return pinsker_check(p, QuantizedGaussianSpec(m.mean, m.variance, p.offset(), p.span()),
                         tolerance);
}

}  // namespace entclt
