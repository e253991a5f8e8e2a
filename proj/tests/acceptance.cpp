// Acceptance gate: one pass/fail line per release criterion, nonzero exit on
// any failure. Each criterion re-derives its data from the public API so a
// regression anywhere in the computation chain surfaces here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "entclt/entclt.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct CriterionResult {
    bool pass = true;
    std::string detail;
    double seconds = 0.0;

    void require(bool ok, const std::string& on_fail) {
        if (!ok && pass) {
            pass = false;
            detail = on_fail;
        }
    }
};

struct MinSlack {
    double value = 1e300;
    std::int64_t at_n = 0;
    void update(const entclt::BoundReport& r, std::int64_t n) {
        if (r.slack < value) {
            value = r.slack;
            at_n = n;
        }
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

}  // namespace

int main() {
    using namespace entclt;

    std::vector<std::pair<std::string, CriterionResult>> lines(12);

    // ---- Criterion 1: binomial entropy gap, every n in [2, 4096]. ----------
    {
        CriterionResult& c = lines[1].second;
        lines[1].first = "binomial entropy gap <= 4/sqrt(n), all n in [2, 4096], under 10 s";
        const auto start = Clock::now();
        MinSlack worst;
        double gap_final = -1.0;
        for (std::int64_t n = 2; n <= 4096; ++n) {
            const BoundReport r = binomial_entropy_gap_check(n);
            worst.update(r, n);
            c.require(r.pass, "bound violated at n=" + std::to_string(n));
            if (n == 4096) gap_final = r.lhs;
        }
        c.seconds = seconds_since(start);
        c.require(gap_final < 0.001, "gap at n=4096 is " + fmt(gap_final) + " >= 0.001");
        c.require(c.seconds < 10.0, "took " + fmt(c.seconds) + " s");
        if (c.pass)
            c.detail = "worst slack " + fmt(worst.value) + " at n=" + std::to_string(worst.at_n) +
                       ", gap(4096)=" + fmt(gap_final);
    }

    // ---- Criteria 2-4, 6, 11 (part): shared pass over four base laws. ------
    const std::vector<std::pair<std::string, LatticePmf>> bases = {
        {"bern(1/2)", make_pmf(0.0, 1.0, {1.0, 1.0})},
        {"bern(1/3)", make_pmf(0.0, 1.0, {2.0, 1.0})},
        {"uniform{0,1,2}", make_pmf(0.0, 1.0, {1.0, 1.0, 1.0})},
        {"{0,1,3} w=(.5,.3,.2)", make_pmf(0.0, 1.0, {0.5, 0.3, 0.0, 0.2})},
    };
    const std::vector<std::int64_t> doubling_grid = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
    {
        lines[2].first = "solidarity bound on four base laws, n doubling to 512, under 60 s";
        lines[3].first = "uniform-smoothing bound on the same bases and grid";
        lines[4].first = "maximum-entropy bound on the same bases and grid";
        lines[6].first = "relative entropy and entropy deficit both below 0.05 by n=512";
        lines[11].first = "Pinsker inequality on every distribution/Gaussian pair evaluated";
        CriterionResult& c2 = lines[2].second;
        CriterionResult& c3 = lines[3].second;
        CriterionResult& c4 = lines[4].second;
        CriterionResult& c6 = lines[6].second;
        CriterionResult& c11 = lines[11].second;
        const auto start = Clock::now();
        MinSlack w2, w3, w4, w11;
        for (const auto& [name, base] : bases) {
            const Moments m = moments(base);
            const double h = base.span();
            double d_at_8 = -1.0, d_at_512 = -1.0, deficit_at_512 = -1.0;
            for (std::int64_t n : doubling_grid) {
                const LatticePmf p_sn = self_convolve(base, n);
                const BoundReport solidarity = solidarity_check(p_sn, n, h, m.variance);
                const BoundReport smoothing = uniform_smoothing_check(p_sn, n, h, m.variance);
                const BoundReport max_ent = max_entropy_check(p_sn, n, h, m.variance);
                const BoundReport pinsker =
                    pinsker_check(detail::standardized_sum(p_sn, n, m.variance));
                w2.update(solidarity, n);
                w3.update(smoothing, n);
                w4.update(max_ent, n);
                w11.update(pinsker, n);
                c2.require(solidarity.pass, name + " fails at n=" + std::to_string(n));
                c3.require(smoothing.pass, name + " fails at n=" + std::to_string(n));
                c4.require(max_ent.pass, name + " fails at n=" + std::to_string(n));
                c11.require(pinsker.pass, name + " fails at n=" + std::to_string(n));
                if (n == 8) d_at_8 = pinsker.rhs;  // rhs of Pinsker is D itself
                if (n == 512) {
                    d_at_512 = pinsker.rhs;
                    deficit_at_512 = entropy_gap(p_sn, n, h, m.variance);
                }
            }
            c6.require(d_at_512 < d_at_8,
                       name + ": D at 512 (" + fmt(d_at_512) + ") not below D at 8");
            c6.require(d_at_512 < 0.05, name + ": D at 512 is " + fmt(d_at_512));
            c6.require(deficit_at_512 < 0.05, name + ": deficit at 512 is " + fmt(deficit_at_512));
        }
        const double elapsed = seconds_since(start);
        c2.seconds = c3.seconds = c4.seconds = c6.seconds = elapsed;
        c2.require(elapsed < 60.0, "took " + fmt(elapsed) + " s");
        if (c2.pass) c2.detail = "worst slack " + fmt(w2.value);
        if (c3.pass) c3.detail = "worst slack " + fmt(w3.value);
        if (c4.pass) c4.detail = "worst slack " + fmt(w4.value);
        if (c6.pass) c6.detail = "all four bases converged";
        if (c11.pass) c11.detail = "worst slack " + fmt(w11.value) + " over the base grid";
        // Criterion 11 also covers the binomial views; finished below.
    }

    // ---- Criteria 5 and 11 (rest): binomial relative entropy, n <= 1024. ---
    {
        CriterionResult& c = lines[5].second;
        lines[5].first = "binomial relative entropy <= 8/sqrt(n), all n in [2, 1024]";
        CriterionResult& c11 = lines[11].second;
        const auto start = Clock::now();
        MinSlack worst, worst_pinsker;
        for (std::int64_t n = 2; n <= 1024; ++n) {
            const BoundReport r = binomial_relative_entropy_check(n);
            worst.update(r, n);
            c.require(r.pass, "bound violated at n=" + std::to_string(n));
            const BoundReport pinsker =
                pinsker_check(standardized_view(binomial_pmf(n), n, Moments{0.5, 0.25}));
            worst_pinsker.update(pinsker, n);
            c11.require(pinsker.pass, "binomial view fails at n=" + std::to_string(n));
        }
        c.seconds = seconds_since(start);
        c11.seconds += c.seconds;
        if (c.pass) c.detail = "worst slack " + fmt(worst.value) + " at n=" + std::to_string(worst.at_n);
        if (c11.pass)
            c11.detail += ", " + fmt(worst_pinsker.value) + " over the binomial views";
    }

    // ---- Criterion 7: Bernoulli part decomposition. -------------------------
    {
        CriterionResult& c = lines[7].second;
        lines[7].first = "Bernoulli part: 100 random laws round-trip, mixture weight matches";
        const auto start = Clock::now();
        std::mt19937_64 rng(20260819);
        std::uniform_int_distribution<std::size_t> size_dist(2, 50);
        std::uniform_real_distribution<double> weight_dist(0.02, 1.0);
        double worst_tv = 0.0, worst_qn = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> weights(size_dist(rng));
            for (double& w : weights) w = weight_dist(rng);
            const LatticePmf p = make_pmf(-3.0, 1.0, std::move(weights));
            const BernoulliPartDecomposition d = decompose(p);
            c.require(d.q > 0.0, "q = 0 on trial " + std::to_string(trial));
            const double tv = total_variation(p, reconstruct(d));
            worst_tv = std::max(worst_tv, tv);
            c.require(tv < 1e-12, "round-trip TV " + fmt(tv) + " on trial " + std::to_string(trial));
            const std::int64_t n = 6;
            const SumDecomposition sd = sum_decomposition(p, n);
            const double reference =
                static_cast<double>(1.0L - std::pow(1.0L - static_cast<long double>(d.q),
                                                    static_cast<long double>(n)));
            const double err = std::abs(sd.q_n - reference);
            worst_qn = std::max(worst_qn, err);
            c.require(err <= 1e-12, "mixture weight off by " + fmt(err) + " on trial " +
                                        std::to_string(trial));
        }
        const std::vector<ConditionalTrendRow> trend =
            conditional_variance_trend(make_pmf(0.0, 1.0, {2.0, 1.0}), {256});
        const double ratio_err = std::abs(trend[0].variance_ratio - 1.0);
        c.require(ratio_err < 0.05, "conditional variance ratio off by " + fmt(ratio_err));
        c.seconds = seconds_since(start);
        if (c.pass)
            c.detail = "worst TV " + fmt(worst_tv) + ", worst weight error " + fmt(worst_qn) +
                       ", variance ratio error " + fmt(ratio_err);
    }

    // ---- Criterion 8: pointwise binomial bound, every even n <= 1024. ------
    {
        CriterionResult& c = lines[8].second;
        lines[8].first = "pointwise central binomial bound, all even n in [2, 1024]";
        const auto start = Clock::now();
        MinSlack worst;
        for (std::int64_t n = 2; n <= 1024; n += 2) {
            const BoundReport r = feller_bound_check(n);
            worst.update(r, n);
            c.require(r.slack >= -1e-12, "violated at n=" + std::to_string(n));
        }
        c.seconds = seconds_since(start);
        if (c.pass) c.detail = "worst slack " + fmt(worst.value) + " at n=" + std::to_string(worst.at_n);
    }

    // ---- Criterion 9: integral identity for the relative entropy. ----------
    {
        CriterionResult& c = lines[9].second;
        lines[9].first = "integral identity at n=4 and n=16, stable under node doubling, under 120 s";
        const auto start = Clock::now();
        const LatticePmf bern = make_pmf(0.0, 1.0, {1.0, 1.0});
        double worst_residual = 0.0, worst_shift = 0.0;
        for (std::int64_t n : {std::int64_t{4}, std::int64_t{16}}) {
            const LatticePmf p_sn = self_convolve(bern, n);
            const DeBruijnResult at64 = de_bruijn_check(p_sn, n, 1.0, 0.25, 64);
            worst_residual = std::max(worst_residual, at64.report.lhs);
            c.require(at64.report.pass && at64.report.lhs <= 1e-3,
                      "residual " + fmt(at64.report.lhs) + " at n=" + std::to_string(n));
            const DeBruijnResult at128 = de_bruijn_check(p_sn, n, 1.0, 0.25, 128);
            const double shift = std::abs(at128.smooth_side - at64.smooth_side);
            worst_shift = std::max(worst_shift, shift);
            c.require(shift < 1e-4, "node doubling moved the integral side by " + fmt(shift) +
                                        " at n=" + std::to_string(n));
        }
        c.seconds = seconds_since(start);
        c.require(c.seconds < 120.0, "took " + fmt(c.seconds) + " s");
        if (c.pass)
            c.detail = "worst residual " + fmt(worst_residual) + ", doubling shift " +
                       fmt(worst_shift);
    }

    // ---- Criterion 10: convolution cross-validation. ------------------------
    {
        CriterionResult& c = lines[10].second;
        lines[10].first = "closed-form binomial vs repeated convolution, and direct vs transform";
        const auto start = Clock::now();
        const LatticePmf bern = make_pmf(0.0, 1.0, {1.0, 1.0});
        double worst = 0.0;
        for (std::int64_t n = 1; n <= 1024; ++n) {
            const LatticePmf a = binomial_pmf(n);
            const LatticePmf b = self_convolve(bern, n);
            // Compare cell by lattice index: either side may trim cells whose
            // true mass sits far below 1e-12, so a missing cell counts as 0.
            auto cell = [](const LatticePmf& p, std::int64_t k) {
                const std::int64_t j = k - p.first_index();
                return j >= 0 && j < static_cast<std::int64_t>(p.support_size())
                           ? p.weights()[static_cast<std::size_t>(j)]
                           : 0.0;
            };
            for (std::int64_t k = 0; k <= n; ++k)
                worst = std::max(worst, std::abs(cell(a, k) - cell(b, k)));
            c.require(worst < 1e-12, "binomial mismatch " + fmt(worst) + " at n=" +
                                         std::to_string(n));
            if (worst >= 1e-12) break;
        }
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<std::size_t> size_dist(130, 400);
        std::uniform_real_distribution<double> weight_dist(0.01, 1.0);
        double worst_pair = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> wa(size_dist(rng)), wb(size_dist(rng));
            for (double& w : wa) w = weight_dist(rng);
            for (double& w : wb) w = weight_dist(rng);
            const LatticePmf p = make_pmf(0.0, 1.0, std::move(wa));
            const LatticePmf q = make_pmf(0.0, 1.0, std::move(wb));
            const LatticePmf direct = convolve_direct(p, q);
            const LatticePmf transform = convolve_transform(p, q);
            for (std::size_t j = 0; j < direct.support_size(); ++j)
                worst_pair = std::max(
                    worst_pair, std::abs(direct.weights()[j] - transform.weights()[j]));
        }
        c.require(worst_pair < 1e-12, "direct/transform mismatch " + fmt(worst_pair));
        c.seconds = seconds_since(start);
        if (c.pass)
            c.detail = "binomial mismatch " + fmt(worst) + ", pair mismatch " + fmt(worst_pair);
    }

    // ---- Report. -------------------------------------------------------------
    bool all_pass = true;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const CriterionResult& c = lines[i].second;
        all_pass = all_pass && c.pass;
        std::printf("[%2zu] %s  %s (%s%.2f s)\n", i, c.pass ? "PASS" : "FAIL",
                    lines[i].first.c_str(),
                    c.detail.empty() ? "" : (c.detail + "; ").c_str(), c.seconds);
    }
    std::printf("%s\n", all_pass ? "acceptance: all criteria pass" : "acceptance: FAILURES above");
    return all_pass ? 0 : 1;
}
