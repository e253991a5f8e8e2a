#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "entclt/bound_report.hpp"
#include "entclt/entropy.hpp"
#include "entclt/lattice_pmf.hpp"
#include "entclt/numeric.hpp"

namespace entclt {

/// Feller-type pointwise bounds are asserted with this slack tolerance;
/// tighter than the generic one because the comparison is cellwise exact.
inline constexpr double kFellerTolerance = 1e-12;

/// Bin(n, 1/2) held in log domain: log_weights[k] = log C(n,k) - n log 2.
/// Log domain keeps every cell of n up to ~1e6 representable.
struct BinomialLaw {
    std::int64_t n = 1;
    std::vector<double> log_weights;
};

/// Builds the log-domain law via the cumulative recurrence
/// log C(n,k+1) = log C(n,k) + log(n-k) - log(k+1), mirrored about n/2 so
/// the symmetry log_weights[k] == log_weights[n-k] holds exactly.
inline BinomialLaw binomial_law(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("entclt::binomial_law: n must be >= 1");
    BinomialLaw law;
    law.n = n;
    law.log_weights.assign(static_cast<std::size_t>(n) + 1, 0.0);
    const double log_norm = static_cast<double>(n) * std::log(2.0);
    double log_choose = 0.0;
    for (std::int64_t k = 0; k <= n / 2; ++k) {
        law.log_weights[static_cast<std::size_t>(k)] = log_choose - log_norm;
        law.log_weights[static_cast<std::size_t>(n - k)] = log_choose - log_norm;
        log_choose += std::log(static_cast<double>(n - k)) - std::log(static_cast<double>(k + 1));
    }
    return law;
}

/// Exact Bin(n, 1/2) as a pmf on {0, ..., n}.
inline LatticePmf binomial_pmf(std::int64_t n) {
    const BinomialLaw law = binomial_law(n);
    std::vector<double> weights;
    weights.reserve(law.log_weights.size());
    for (double lw : law.log_weights) weights.push_back(std::exp(lw));
    return make_pmf(0.0, 1.0, std::move(weights));
}

/// H(Bin(n, 1/2)) in nats, summed in log domain so sub-normal tail cells
/// contribute their (vanishing) share without underflow artefacts.
inline double binomial_entropy(std::int64_t n) {
    const BinomialLaw law = binomial_law(n);
    CompensatedSum acc;
    for (double lw : law.log_weights) {
        const double w = std::exp(lw);
        if (w > 0.0) acc.add(-w * lw);
    }
    return acc.value();
}

/// de Moivre gap: |H(Bin(n,1/2)) - log sqrt(n) - (1/2) log(pi e / 2)| <= 4/sqrt(n).
inline BoundReport binomial_entropy_gap_check(std::int64_t n, double tolerance = kBoundTolerance) {
    if (n < 2) throw std::invalid_argument("entclt::binomial_entropy_gap_check: n must be >= 2");
    const double gap = binomial_entropy(n) - 0.5 * std::log(static_cast<double>(n)) -
                       0.5 * std::log(pi_v * std::exp(1.0) / 2.0);
    return make_bound_report("binomial_entropy_gap", std::abs(gap),
                             4.0 / std::sqrt(static_cast<double>(n)), tolerance);
}

/// Pointwise central-cell bound for even n: with a_k = b_n(n/2 + k),
/// a_k <= (pi n / 2)^{-1/2} exp(-2k^2/n) exp(3|k|^3/n^2 + 1/(12n)) for all
/// |k| <= n/2. Reported as lhs = max_k (a_k - bound_k), rhs = 0.
inline BoundReport feller_bound_check(std::int64_t n, double tolerance = kFellerTolerance) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("entclt::feller_bound_check: n must be even and >= 2");
    const BinomialLaw law = binomial_law(n);
    const double nd = static_cast<double>(n);
    const double log_front = -0.5 * std::log(pi_v * nd / 2.0);
    double worst = -1.0;  // max over k of a_k - bound_k; every term is < 1 in magnitude
    for (std::int64_t k = -n / 2; k <= n / 2; ++k) {
        const double a_k = std::exp(law.log_weights[static_cast<std::size_t>(n / 2 + k)]);
        const double kd = static_cast<double>(k);
        const double log_bound = log_front - 2.0 * kd * kd / nd +
                                 3.0 * std::abs(kd * kd * kd) / (nd * nd) + 1.0 / (12.0 * nd);
        worst = std::max(worst, a_k - std::exp(log_bound));
    }
    return make_bound_report("feller", worst, 0.0, tolerance);
}

/// Relative-entropy corollary for the standardised binomial:
/// D(S^_n) <= 8/sqrt(n) with S_n ~ Bin(n, 1/2).
inline BoundReport binomial_relative_entropy_check(std::int64_t n,
                                                   double tolerance = kBoundTolerance) {
    if (n < 2)
        throw std::invalid_argument("entclt::binomial_relative_entropy_check: n must be >= 2");
    const LatticePmf view = standardized_view(binomial_pmf(n), n, Moments{0.5, 0.25});
    return make_bound_report("binomial_relative_entropy", relative_entropy_to_gaussian(view),
                             8.0 / std::sqrt(static_cast<double>(n)), tolerance);
}

}  // namespace entclt
