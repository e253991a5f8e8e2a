#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "entclt/bound_report.hpp"
#include "entclt/lattice_pmf.hpp"
#include "entclt/numeric.hpp"

namespace entclt {

/// X written as V + W B with W ~ Bern(q) and B ~ Bern(1/2) independent:
/// the hidden symmetric Bernoulli step inside any maximal-span lattice law.
/// joint_w1[j] = P(V = x_j, W = 1) and joint_w0[j] = P(V = x_j, W = 0),
/// indexed against source.weights()[j] (so x_j = source.point(j)).
struct BernoulliPartDecomposition {
    double q = 0.0;
    LatticePmf source;
    std::vector<double> joint_w1;
    std::vector<double> joint_w0;
};

/// Builds the decomposition from p (whose stored span must already be
/// maximal): joint(k,1) = min(p(k), p(k+1)) and
/// joint(k,0) = p(k) - (joint(k-1,1) + joint(k,1))/2.
inline BernoulliPartDecomposition decompose(const LatticePmf& p) {
    const SpanReduction reduction = reduce_to_maximal_span(p);
    if (!reduction.maximal_defined)
        throw std::invalid_argument("entclt::decompose: degenerate pmf (point mass)");
    if (reduction.gcd_gap != 1)
        throw std::invalid_argument(
            "entclt::decompose: stored span is not maximal (index gaps share factor " +
            std::to_string(reduction.gcd_gap) + "); run reduce_to_maximal_span first");

    const std::vector<double>& w = p.weights();
    const std::size_t m = w.size();
    std::vector<double> w1(m, 0.0);
    for (std::size_t k = 0; k + 1 < m; ++k) w1[k] = std::min(w[k], w[k + 1]);
    // w1[m-1] = min(p(last), 0) = 0 already.

    std::vector<double> w0(m, 0.0);
    CompensatedSum q_acc;
    for (std::size_t k = 0; k < m; ++k) {
        const double left = k > 0 ? w1[k - 1] : 0.0;
        const double v = w[k] - 0.5 * (left + w1[k]);
        if (v < -kBoundTolerance)
            throw numeric_error("entclt::decompose: joint(k,0) = " + std::to_string(v) +
                                " below zero at k = " + std::to_string(k));
        w0[k] = v < 0.0 ? 0.0 : v;
        q_acc.add(w1[k]);
    }
    const double q = q_acc.value();
    if (!(q > 0.0))
        throw std::invalid_argument(
            "entclt::decompose: no pair of adjacent lattice points carries mass (q = 0)");
    return BernoulliPartDecomposition{q, p, std::move(w1), std::move(w0)};
}

/// Law of V + W B: p(k) = joint(k,0) + joint(k,1)/2 + joint(k-1,1)/2.
/// Inverts decompose exactly up to round-off.
inline LatticePmf reconstruct(const BernoulliPartDecomposition& d) {
    const std::size_t m = d.joint_w1.size();
    std::vector<double> weights(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const double left = k > 0 ? d.joint_w1[k - 1] : 0.0;
        weights[k] = d.joint_w0[k] + 0.5 * (left + d.joint_w1[k]);
    }
    return make_pmf(d.source.offset(), d.source.span(), std::move(weights), d.source.first_index());
}

/// S_n split along W^(n) = max_i W_i: a mixture of the law given no summand
/// used its Bernoulli step (weight (1-q)^n) and the law given at least one
/// did (weight q_n = 1 - (1-q)^n). law_given_w0 is absent in the limiting
/// q = 1 case, where the w = 0 branch carries no mass.
struct SumDecomposition {
    double q_n = 0.0;
    std::optional<LatticePmf> law_given_w0;
    LatticePmf law_given_w1;
    Moments cond_moments_w1;
};

inline SumDecomposition sum_decomposition(const LatticePmf& p, std::int64_t n,
                                          std::size_t support_cap = 2'000'000) {
    if (n < 1) throw std::invalid_argument("entclt::sum_decomposition: n must be >= 1");
    const BernoulliPartDecomposition d = decompose(p);
    const LatticePmf p_sn = self_convolve(p, n, support_cap);

    if (d.q >= 1.0 - 1e-15) {
        // All mass lies in the w = 1 branch for every summand.
        return SumDecomposition{1.0, std::nullopt, p_sn, moments(p_sn)};
    }

    // (V | W = 0): restrict the joint to w = 0; make_pmf renormalises the
    // branch mass 1 - q away.
    const LatticePmf v0 =
        make_pmf(p.offset(), p.span(), d.joint_w0, p.first_index());
    const LatticePmf law_w0 = self_convolve(v0, n, support_cap);

    const double log_1mq_n = static_cast<double>(n) * std::log1p(-d.q);
    const double weight_w0 = std::exp(log_1mq_n);  // (1-q)^n
    const double q_n = -std::expm1(log_1mq_n);     // 1 - (1-q)^n

    // law_given_w1 = (law(S_n) - (1-q)^n law_given_w0) / q_n on the union
    // grid; the normalisation by q_n happens inside make_pmf.
    const std::int64_t p_lo = p_sn.first_index();
    const std::int64_t w0_shift = static_cast<std::int64_t>(
        std::llround((law_w0.offset() - p_sn.offset()) / p_sn.span()));
    const std::int64_t w0_lo = law_w0.first_index() + w0_shift;
    const std::int64_t lo = std::min(p_lo, w0_lo);
    const std::int64_t hi = std::max(p_lo + static_cast<std::int64_t>(p_sn.support_size()),
                                     w0_lo + static_cast<std::int64_t>(law_w0.support_size()));
    std::vector<double> diff(static_cast<std::size_t>(hi - lo), 0.0);
    CompensatedSum clamped;
    for (std::int64_t k = lo; k < hi; ++k) {
        const std::int64_t jp = k - p_lo;
        const std::int64_t j0 = k - w0_lo;
        const double wp = (jp >= 0 && jp < static_cast<std::int64_t>(p_sn.support_size()))
                              ? p_sn.weights()[static_cast<std::size_t>(jp)]
                              : 0.0;
        const double w0 = (j0 >= 0 && j0 < static_cast<std::int64_t>(law_w0.support_size()))
                              ? law_w0.weights()[static_cast<std::size_t>(j0)]
                              : 0.0;
        double v = wp - weight_w0 * w0;
        if (v < 0.0) {
            clamped.add(-v);
            v = 0.0;
        }
        diff[static_cast<std::size_t>(k - lo)] = v;
    }
    if (clamped.value() > kClampBudget)
        throw numeric_error("entclt::sum_decomposition: clamped mixture mass " +
                            std::to_string(clamped.value()) + " exceeds budget");
    LatticePmf law_w1 = make_pmf(p_sn.offset(), p_sn.span(), std::move(diff), lo);
    Moments cm = moments(law_w1);
    return SumDecomposition{q_n, law_w0, std::move(law_w1), cm};
}

/// One row of the conditional-moment trend scan.
struct ConditionalTrendRow {
    std::int64_t n = 0;
    double variance_ratio = 0.0;  ///< Var(S_n | W^(n) = 1) / (n sigma^2)
    double mean_shift = 0.0;      ///< E(S_n | W^(n) = 1) - n mu
};

/// Tabulates Var(S_n | W^(n)=1)/(n sigma^2) -> 1 and
/// E(S_n | W^(n)=1) - n mu -> 0 over the given n grid.
inline std::vector<ConditionalTrendRow> conditional_variance_trend(
    const LatticePmf& p, const std::vector<std::int64_t>& n_values,
    std::size_t support_cap = 2'000'000) {
    const Moments base = moments(p);
    if (!(base.variance > 0.0))
        throw std::invalid_argument("entclt::conditional_variance_trend: degenerate pmf");
    std::vector<ConditionalTrendRow> rows;
    rows.reserve(n_values.size());
    for (std::int64_t n : n_values) {
        const SumDecomposition sd = sum_decomposition(p, n, support_cap);
        ConditionalTrendRow row;
        row.n = n;
        row.variance_ratio =
            sd.cond_moments_w1.variance / (static_cast<double>(n) * base.variance);
        row.mean_shift = sd.cond_moments_w1.mean - static_cast<double>(n) * base.mean;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace entclt
