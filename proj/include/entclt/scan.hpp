#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "entclt/bernoulli_part.hpp"
#include "entclt/binomial.hpp"
#include "entclt/bound_report.hpp"
#include "entclt/entropy.hpp"
#include "entclt/lattice_pmf.hpp"

namespace entclt {

/// Default cap on intermediate convolution support sizes (cells).
inline constexpr std::size_t kDefaultSupportCap = 2'000'000;

/// One row of a convergence scan: every Gaussian-approach quantity at one n.
struct ScanRow {
    std::int64_t n = 0;
    double entropy_gap = 0.0;                ///< entropy deficit of S_n
    double relative_entropy = 0.0;           ///< D(S^_n)
    double smoothed_relative_entropy = 0.0;  ///< D(S^_n + (h/sqrt(n)) U)
    double solidarity_slack = 0.0;           ///< slack of the solidarity bound
    double tv_to_gaussian = 0.0;             ///< TV(S^_n, matched quantised Gaussian)
};

namespace detail {

inline LatticePmf reduce_or_throw(const LatticePmf& base, const char* where) {
    const SpanReduction r = reduce_to_maximal_span(base);
    if (!r.maximal_defined)
        throw std::invalid_argument(std::string(where) + ": degenerate base law (point mass)");
    return r.pmf;
}

}  // namespace detail

/// Exact convergence scan of the base law over the n grid. The base is
/// rewritten on its maximal-span lattice first; without that the scanned
/// quantities do not converge.
inline std::vector<ScanRow> run_scan(const LatticePmf& base_in,
                                     const std::vector<std::int64_t>& n_grid,
                                     std::size_t support_cap = kDefaultSupportCap) {
    const LatticePmf base = detail::reduce_or_throw(base_in, "entclt::run_scan");
    const Moments m = moments(base);
    if (!(m.variance > 0.0))
        throw std::invalid_argument("entclt::run_scan: degenerate base law");
    const double h = base.span();
    const double sigma = std::sqrt(m.variance);

    std::vector<ScanRow> rows;
    rows.reserve(n_grid.size());
    for (std::int64_t n : n_grid) {
        if (n < 1) throw std::invalid_argument("entclt::run_scan: n grid values must be >= 1");
        const LatticePmf p_sn = self_convolve(base, n, support_cap);
        ScanRow row;
        row.n = n;
        row.entropy_gap = entropy_gap(p_sn, n, h, m.variance);
        const LatticePmf view = detail::standardized_sum(p_sn, n, m.variance);
        const Moments mv = moments(view);
        const detail::PinskerParts parts = detail::pinsker_parts(
            view, QuantizedGaussianSpec(mv.mean, mv.variance, view.offset(), view.span()));
        row.relative_entropy = parts.d;
        row.tv_to_gaussian = parts.tv;
        row.smoothed_relative_entropy = smoothed_relative_entropy(p_sn, n, h, m.variance);
        const double ratio = h / (sigma * std::sqrt(static_cast<double>(n)));
        row.solidarity_slack = ratio * (1.0 + 0.5 * ratio) - std::abs(parts.d - row.entropy_gap);
        rows.push_back(row);
    }
    return rows;
}

/// Per-check pass tolerances, overridable by name; everything else uses the
/// given default.
struct ToleranceMap {
    double fallback = kBoundTolerance;
    std::map<std::string, double> by_name;

    double get(const std::string& name, double hard_default) const {
        const auto it = by_name.find(name);
        if (it != by_name.end()) return it->second;
        return hard_default;
    }
    double get(const std::string& name) const { return get(name, fallback); }
};

struct VerifyOutcome {
    std::vector<std::int64_t> row_n;     ///< n value per report row
    std::vector<BoundReport> reports;    ///< same length as row_n
    std::vector<std::string> skipped;    ///< check names not applicable to this base
    bool all_pass = true;
};

/// True when p is exactly the symmetric Bernoulli step on {0, 1}: the only
/// base for which the binomial-specific bounds apply.
inline bool is_standard_bernoulli_half(const LatticePmf& p) {
    return p.support_size() == 2 && std::abs(p.point(0)) <= 1e-15 &&
           std::abs(p.span() - 1.0) <= 1e-15 && std::abs(p.weights()[0] - 0.5) <= 1e-15 &&
           std::abs(p.weights()[1] - 0.5) <= 1e-15;
}

/// Runs every applicable bound check across the n grid. Binomial-specific
/// checks run only for the Bern(1/2) base (and only at n meeting their
/// preconditions); otherwise they are listed in `skipped`.
inline VerifyOutcome run_verify(const LatticePmf& base_in,
                                const std::vector<std::int64_t>& n_grid,
                                const ToleranceMap& tol = {},
                                std::size_t support_cap = kDefaultSupportCap) {
    const LatticePmf base = detail::reduce_or_throw(base_in, "entclt::run_verify");
    const Moments m = moments(base);
    if (!(m.variance > 0.0))
        throw std::invalid_argument("entclt::run_verify: degenerate base law");
    const double h = base.span();
    const bool binomial_base = is_standard_bernoulli_half(base);

    VerifyOutcome out;
    if (!binomial_base) {
        out.skipped = {"binomial_entropy_gap", "binomial_relative_entropy", "feller"};
    }
    auto push = [&out](std::int64_t n, BoundReport r) {
        out.all_pass = out.all_pass && r.pass;
        out.row_n.push_back(n);
        out.reports.push_back(std::move(r));
    };
    for (std::int64_t n : n_grid) {
        if (n < 1) throw std::invalid_argument("entclt::run_verify: n grid values must be >= 1");
        const LatticePmf p_sn = self_convolve(base, n, support_cap);
        push(n, solidarity_check(p_sn, n, h, m.variance, tol.get("solidarity")));
        push(n, uniform_smoothing_check(p_sn, n, h, m.variance, tol.get("uniform_smoothing")));
        push(n, max_entropy_check(p_sn, n, h, m.variance, tol.get("max_entropy")));
        {
            BoundReport r =
                pinsker_check(detail::standardized_sum(p_sn, n, m.variance), tol.get("pinsker"));
            push(n, std::move(r));
        }
        if (binomial_base && n >= 2) {
            push(n, binomial_entropy_gap_check(n, tol.get("binomial_entropy_gap")));
            push(n, binomial_relative_entropy_check(n, tol.get("binomial_relative_entropy")));
            if (n % 2 == 0) push(n, feller_bound_check(n, tol.get("feller", kFellerTolerance)));
        }
    }
    return out;
}

}  // namespace entclt
