#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "entclt/fft.hpp"
#include "entclt/numeric.hpp"

namespace entclt {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Size threshold below which convolution runs the direct quadratic kernel
/// instead of the FFT one.
inline constexpr std::size_t kDirectConvolutionThreshold = 256;

/// Tail weights below this are dropped at construction and the mass
/// renormalised, so round-off dust cannot grow the support without bound.
inline constexpr double kTailTrimThreshold = 1e-300;

/// Total negative mass a transform-based convolution may clamp to zero
/// before it is treated as a genuine bug.
inline constexpr double kClampBudget = 1e-9;

/// A finitely supported probability mass function on the lattice
/// {offset + k*span : k integer}. Stored weight j belongs to lattice index
/// first_index + j. Immutable after construction; every operation below is
/// a pure function, so values can be shared freely across threads.
class LatticePmf {
public:
    double offset() const noexcept { return offset_; }
    double span() const noexcept { return span_; }
    std::int64_t first_index() const noexcept { return first_index_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::size_t support_size() const noexcept { return weights_.size(); }

    /// Lattice point carrying stored weight j.
    double point(std::size_t j) const noexcept {
        return offset_ + static_cast<double>(first_index_ + static_cast<std::int64_t>(j)) * span_;
    }

    double total_mass() const noexcept {
        CompensatedSum s;
        for (double w : weights_) s.add(w);
        return s.value();
    }

    /// Builds without normalising: the weights are kept exactly as given
    /// (zero tails trimmed). Quantised Gaussians use this path because their
    /// cells must carry true Gaussian mass, not a renormalised version.
    static LatticePmf unnormalized(double offset, double span, std::int64_t first_index,
                                   std::vector<double> weights) {
        validate_raw(span, weights, "entclt::LatticePmf::unnormalized");
        trim_zero_tails(first_index, weights, "entclt::LatticePmf::unnormalized");
        return LatticePmf(offset, span, first_index, std::move(weights));
    }

private:
    LatticePmf(double offset, double span, std::int64_t first_index, std::vector<double> weights)
        : offset_(offset), span_(span), first_index_(first_index), weights_(std::move(weights)) {}

    static void validate_raw(double span, const std::vector<double>& weights, const char* where) {
        if (!(span > 0.0)) throw std::invalid_argument(std::string(where) + ": span must be positive");
        if (weights.empty()) throw std::invalid_argument(std::string(where) + ": weights must be nonempty");
        for (double w : weights)
            if (w < 0.0 || !std::isfinite(w))
                throw std::invalid_argument(std::string(where) + ": weights must be finite and nonnegative");
    }

    static void trim_zero_tails(std::int64_t& first_index, std::vector<double>& weights, const char* where) {
        std::size_t lo = 0;
        while (lo < weights.size() && weights[lo] == 0.0) ++lo;
        if (lo == weights.size())
            throw std::invalid_argument(std::string(where) + ": at least one weight must be positive");
        std::size_t hi = weights.size();
        while (hi > lo && weights[hi - 1] == 0.0) --hi;
        if (lo > 0 || hi < weights.size()) {
            weights = std::vector<double>(weights.begin() + static_cast<std::ptrdiff_t>(lo),
                                          weights.begin() + static_cast<std::ptrdiff_t>(hi));
            first_index += static_cast<std::int64_t>(lo);
        }
    }

    friend LatticePmf make_pmf(double, double, std::vector<double>, std::int64_t);
    friend LatticePmf detail_make_clamped(double, double, std::int64_t, std::vector<double>, double,
                                          const char*);

    double offset_;
    double span_;
    std::int64_t first_index_;
    std::vector<double> weights_;
};

/// Normalising constructor: trims tails below kTailTrimThreshold, rescales
/// the remaining mass to 1. Rejects negative weights outright.
inline LatticePmf make_pmf(double offset, double span, std::vector<double> weights,
                           std::int64_t first_index = 0) {
    LatticePmf::validate_raw(span, weights, "entclt::make_pmf");

    std::size_t lo = 0;
    while (lo < weights.size() && weights[lo] < kTailTrimThreshold) ++lo;
    if (lo == weights.size())
        throw std::invalid_argument("entclt::make_pmf: at least one weight must be positive");
    std::size_t hi = weights.size();
    while (hi > lo && weights[hi - 1] < kTailTrimThreshold) --hi;
    std::vector<double> trimmed(weights.begin() + static_cast<std::ptrdiff_t>(lo),
                                weights.begin() + static_cast<std::ptrdiff_t>(hi));
    first_index += static_cast<std::int64_t>(lo);

    const double total = compensated_total(trimmed);
    if (!(total > 0.0)) throw std::invalid_argument("entclt::make_pmf: weights sum to zero");
    for (double& w : trimmed) w /= total;
    return LatticePmf(offset, span, first_index, std::move(trimmed));
}

/// Internal path for convolution outputs: clamps round-off negatives to zero
/// (erroring when the clamped mass exceeds the budget), then normalises.
inline LatticePmf detail_make_clamped(double offset, double span, std::int64_t first_index,
                                      std::vector<double> weights, double clamp_budget,
                                      const char* where) {
    CompensatedSum clamped;
    for (double& w : weights) {
        if (w < 0.0) {
            clamped.add(-w);
            w = 0.0;
        }
    }
    if (clamped.value() > clamp_budget)
        throw numeric_error(std::string(where) + ": clamped negative mass " +
                            std::to_string(clamped.value()) + " exceeds budget");
    return make_pmf(offset, span, std::move(weights), first_index);
}

inline Moments moments(const LatticePmf& p) {
    CompensatedSum mean_acc;
    for (std::size_t j = 0; j < p.support_size(); ++j) mean_acc.add(p.weights()[j] * p.point(j));
    const double mean = mean_acc.value();
    CompensatedSum var_acc;
    for (std::size_t j = 0; j < p.support_size(); ++j) {
        const double d = p.point(j) - mean;
        var_acc.add(p.weights()[j] * d * d);
    }
    return Moments{mean, std::max(0.0, var_acc.value())};
}

struct SpanReduction {
    LatticePmf pmf;
    std::int64_t gcd_gap = 1;     ///< gcd of index gaps; 1 when already maximal
    bool maximal_defined = true;  ///< false for single-point support
};

/// Rewrites p on the coarsest lattice its support fits: new span = span * g
/// with g the gcd of the index gaps between support points. The gcd runs on
/// integer indices only; the real-valued span is never inferred from
/// floating offsets. A point mass is returned unchanged with the
/// maximal-span-undefined flag cleared.
inline SpanReduction reduce_to_maximal_span(const LatticePmf& p) {
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < p.support_size(); ++j)
        if (p.weights()[j] > 0.0) support.push_back(j);
    if (support.size() <= 1) return SpanReduction{p, 1, false};

    std::int64_t g = 0;
    for (std::size_t i = 1; i < support.size(); ++i)
        g = std::gcd(g, static_cast<std::int64_t>(support[i] - support[i - 1]));
    if (g == 1) return SpanReduction{p, 1, true};

    std::vector<double> reduced;
    reduced.reserve((support.back() - support.front()) / static_cast<std::size_t>(g) + 1);
    for (std::size_t j = support.front(); j <= support.back(); j += static_cast<std::size_t>(g))
        reduced.push_back(p.weights()[j]);
    // Anchor the reduced pmf so its first support point sits at index 0.
    const double new_offset = p.point(support.front());
    return SpanReduction{LatticePmf::unnormalized(new_offset, p.span() * static_cast<double>(g), 0,
                                                  std::move(reduced)),
                         g, true};
}

namespace detail {

inline std::vector<double> convolve_weights_direct(const std::vector<double>& a,
                                                   const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const std::size_t i_lo = k >= b.size() - 1 ? k - (b.size() - 1) : 0;
        const std::size_t i_hi = std::min(k, a.size() - 1);
        long double acc = 0.0L;
        for (std::size_t i = i_lo; i <= i_hi; ++i) acc += static_cast<long double>(a[i]) * b[k - i];
        out[k] = static_cast<double>(acc);
    }
    return out;
}

inline void require_matching_span(const LatticePmf& p, const LatticePmf& q, const char* where) {
    if (p.span() != q.span())
        throw std::invalid_argument(std::string(where) + ": spans differ (" +
                                    std::to_string(p.span()) + " vs " + std::to_string(q.span()) +
                                    "); rescale first");
}

}  // namespace detail

/// Exact law of the independent sum X + Y. Direct quadratic kernel below the
/// size threshold, FFT above it; both agree within 1e-12 per entry.
inline LatticePmf convolve(const LatticePmf& p, const LatticePmf& q,
                           std::size_t direct_threshold = kDirectConvolutionThreshold) {
    detail::require_matching_span(p, q, "entclt::convolve");
    const std::size_t out_size = p.support_size() + q.support_size() - 1;
    std::vector<double> raw = out_size < direct_threshold
                                  ? detail::convolve_weights_direct(p.weights(), q.weights())
                                  : detail::fft_convolve(p.weights(), q.weights());
    return detail_make_clamped(p.offset() + q.offset(), p.span(),
                               p.first_index() + q.first_index(), std::move(raw), kClampBudget,
                               "entclt::convolve");
}

inline LatticePmf convolve_direct(const LatticePmf& p, const LatticePmf& q) {
    return convolve(p, q, static_cast<std::size_t>(-1));
}

inline LatticePmf convolve_transform(const LatticePmf& p, const LatticePmf& q) {
    return convolve(p, q, 0);
}

/// Law of S_n = X_1 + ... + X_n by binary exponentiation over convolve.
/// support_cap bounds the output support of any intermediate convolution.
inline LatticePmf self_convolve(const LatticePmf& p, std::int64_t n,
                                std::size_t support_cap = 2'000'000,
                                std::size_t direct_threshold = kDirectConvolutionThreshold) {
    if (n < 1) throw std::invalid_argument("entclt::self_convolve: n must be >= 1");
    auto checked_convolve = [&](const LatticePmf& a, const LatticePmf& b) {
        const std::size_t out = a.support_size() + b.support_size() - 1;
        if (out > support_cap)
            throw numeric_error("entclt::self_convolve: support size " + std::to_string(out) +
                                " exceeds cap " + std::to_string(support_cap));
        return convolve(a, b, direct_threshold);
    };
    std::optional<LatticePmf> acc;
    LatticePmf base = p;
    while (n > 0) {
        if (n & 1) acc = acc ? checked_convolve(*acc, base) : base;
        n >>= 1;
        if (n > 0) base = checked_convolve(base, base);
    }
    return *acc;
}

/// Law of (S_n - n*mu)/sqrt(n): identical weights on the lattice with span
/// h/sqrt(n). Discrete entropy is invariant under this relabeling.
inline LatticePmf standardized_view(const LatticePmf& p_sn, std::int64_t n, Moments base) {
    if (n < 1) throw std::invalid_argument("entclt::standardized_view: n must be >= 1");
    const double rt = std::sqrt(static_cast<double>(n));
    return LatticePmf::unnormalized((p_sn.offset() - static_cast<double>(n) * base.mean) / rt,
                                    p_sn.span() / rt, p_sn.first_index(),
                                    p_sn.weights());
}

/// Total variation distance (1/2) sum |p - q| over the union of supports.
/// Requires equal spans and offsets differing by an integer number of steps.
inline double total_variation(const LatticePmf& p, const LatticePmf& q) {
    detail::require_matching_span(p, q, "entclt::total_variation");
    const double delta = (q.offset() - p.offset()) / p.span();
    const auto shift = static_cast<std::int64_t>(std::llround(delta));
    if (std::abs(delta - static_cast<double>(shift)) > 1e-9)
        throw std::invalid_argument("entclt::total_variation: offsets are not aligned to a common grid");

    // Absolute index of stored weight j: p -> p.first_index() + j,
    // q -> q.first_index() + shift + j.
    const std::int64_t p_lo = p.first_index();
    const std::int64_t q_lo = q.first_index() + shift;
    const std::int64_t lo = std::min(p_lo, q_lo);
    const std::int64_t hi = std::max(p_lo + static_cast<std::int64_t>(p.support_size()),
                                     q_lo + static_cast<std::int64_t>(q.support_size()));
    CompensatedSum acc;
    for (std::int64_t k = lo; k < hi; ++k) {
        const std::int64_t jp = k - p_lo;
        const std::int64_t jq = k - q_lo;
        const double wp = (jp >= 0 && jp < static_cast<std::int64_t>(p.support_size()))
                              ? p.weights()[static_cast<std::size_t>(jp)]
                              : 0.0;
        const double wq = (jq >= 0 && jq < static_cast<std::int64_t>(q.support_size()))
                              ? q.weights()[static_cast<std::size_t>(jq)]
                              : 0.0;
        acc.add(std::abs(wp - wq));
    }
    return 0.5 * acc.value();
}

}  // namespace entclt
