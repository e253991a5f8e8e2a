#include <doctest.h>

#include <cmath>
#include <vector>

#include "entclt/binomial.hpp"
#include "entclt/entropy.hpp"
#include "entclt/lattice_pmf.hpp"

using namespace entclt;

TEST_CASE("entropy closed forms") {
    CHECK(entropy(make_pmf(0.0, 1.0, std::vector<double>(7, 1.0))) ==
          doctest::Approx(std::log(7.0)).epsilon(1e-14));
    const double p = 0.3;
    CHECK(entropy(make_pmf(0.0, 1.0, {1.0 - p, p})) ==
          doctest::Approx(-p * std::log(p) - (1.0 - p) * std::log(1.0 - p)).epsilon(1e-14));
    CHECK(entropy(make_pmf(5.0, 2.0, {1.0})) == 0.0);
}

TEST_CASE("quantised Gaussian cell masses") {
    const QuantizedGaussianSpec spec(0.0, 1.0, 0.0, 1.0);
    const QuantizedGaussian q = quantized_gaussian(spec);
    CHECK(q.captured_mass >= 1.0 - 1e-9);

    // Weight of the cell [0, 1) under N(0, 1).
    const std::size_t j0 = static_cast<std::size_t>(0 - q.pmf.first_index());
    CHECK(q.pmf.weights()[j0] == doctest::Approx(0.341344746068543).epsilon(1e-13));

    // Symmetry of the centred spec: cell [k, k+1) mirrors [-k-1, -k).
    for (std::int64_t k = 0; k < 4; ++k) {
        const std::size_t ja = static_cast<std::size_t>(k - q.pmf.first_index());
        const std::size_t jb = static_cast<std::size_t>(-k - 1 - q.pmf.first_index());
        CHECK(q.pmf.weights()[ja] == doctest::Approx(q.pmf.weights()[jb]).epsilon(1e-13));
    }
}

TEST_CASE("quantised Gaussian with a huge cell concentrates on one point") {
    const QuantizedGaussianSpec spec(0.0, 1.0, -50.0, 100.0);
    const QuantizedGaussian q = quantized_gaussian(spec);
    REQUIRE(q.pmf.support_size() == 1);
    CHECK(q.pmf.weights()[0] == 1.0);
    CHECK(q.captured_mass == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("quantised Gaussian rejects a range that loses mass") {
    const QuantizedGaussianSpec spec(0.0, 1.0, 0.0, 1.0);
    CHECK_THROWS_AS(quantized_gaussian(spec, IndexRange{0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(quantized_gaussian(spec, IndexRange{3, 1}), std::invalid_argument);
}

TEST_CASE("QuantizedGaussianSpec validates its parameters") {
    CHECK_THROWS_AS(QuantizedGaussianSpec(0.0, 0.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(QuantizedGaussianSpec(0.0, -2.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(QuantizedGaussianSpec(0.0, 1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("relative entropy is invariant under lattice translation") {
    // Dyadic shift of a dyadic-moment law: every intermediate quantity is
    // exactly representable, so the two divergences agree bit-for-bit.
    const double da = relative_entropy_to_gaussian(make_pmf(0.0, 1.0, {1.0, 1.0}));
    const double db = relative_entropy_to_gaussian(make_pmf(4.0, 1.0, {1.0, 1.0}));
    CHECK(da == db);

    // General weights: invariance within round-off.
    const double dc = relative_entropy_to_gaussian(make_pmf(0.25, 0.5, {2.0, 5.0, 3.0}));
    const double dd = relative_entropy_to_gaussian(make_pmf(4.25, 0.5, {2.0, 5.0, 3.0}));
    CHECK(dc == doctest::Approx(dd).epsilon(1e-12));
}

TEST_CASE("relative entropy is invariant under lattice scaling") {
    const LatticePmf p = make_pmf(-1.0, 1.0, {1.0, 3.0, 2.0, 4.0});
    const LatticePmf half = make_pmf(-0.5, 0.5, {1.0, 3.0, 2.0, 4.0});
    CHECK(relative_entropy_to_gaussian(p) ==
          doctest::Approx(relative_entropy_to_gaussian(half)).epsilon(1e-10));
}

TEST_CASE("relative entropy rejects degenerate or mismatched input") {
    CHECK_THROWS_AS(relative_entropy_to_gaussian(make_pmf(0.0, 1.0, {1.0})),
                    std::invalid_argument);
    const QuantizedGaussianSpec spec(0.0, 1.0, 0.0, 0.5);
    CHECK_THROWS_AS(relative_entropy_to_gaussian(make_pmf(0.0, 1.0, {1.0, 1.0}), spec),
                    std::invalid_argument);
}

TEST_CASE("entropy deficit definition and monotone approach") {
    const LatticePmf bern = make_pmf(0.0, 1.0, {1.0, 1.0});
    double prev = 1e18;
    for (std::int64_t n : {1, 4, 16, 64, 256}) {
        const LatticePmf p_sn = self_convolve(bern, n);
        const double deficit = entropy_gap(p_sn, n, 1.0, 0.25);
        // Reassemble from the defining pieces.
        const double recomposed = gaussian_entropy(0.25) -
                                  (entropy(p_sn) - std::log(std::sqrt(static_cast<double>(n))));
        CHECK(deficit == doctest::Approx(recomposed).epsilon(1e-12));
        CHECK(deficit >= 0.0);
        CHECK(deficit < prev);
        prev = deficit;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("entropy_gap validates its arguments") {
    const LatticePmf bern = make_pmf(0.0, 1.0, {1.0, 1.0});
    CHECK_THROWS_AS(entropy_gap(bern, 0, 1.0, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(entropy_gap(bern, 1, 0.5, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(entropy_gap(bern, 1, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("solidarity bound at n = 1 has the exact closed-form right side") {
    const LatticePmf bern = make_pmf(0.0, 1.0, {1.0, 1.0});
    const BoundReport r = solidarity_check(bern, 1, 1.0, 0.25);
    // h/(sigma sqrt n) = 2, so the bound is 2 (1 + 1) = 4 exactly.
    CHECK(r.rhs == 4.0);
    CHECK(r.lhs >= 0.0);
    CHECK(r.pass);
}

TEST_CASE("solidarity and uniform-smoothing bounds hold along a doubling grid") {
    const LatticePmf bern = make_pmf(0.0, 1.0, {1.0, 1.0});
    const LatticePmf u3 = make_pmf(0.0, 1.0, {1.0, 1.0, 1.0});
    for (const LatticePmf& base : {bern, u3}) {
        const Moments m = moments(base);
        for (std::int64_t n : {4, 16, 64, 256}) {
            const LatticePmf p_sn = self_convolve(base, n);
            const BoundReport s = solidarity_check(p_sn, n, 1.0, m.variance);
            CHECK(s.pass);
            CHECK(s.slack > 0.0);
            const BoundReport u = uniform_smoothing_check(p_sn, n, 1.0, m.variance);
            CHECK(u.pass);
            CHECK(u.slack > 0.0);
        }
    }
}

TEST_CASE("max-entropy bound at n = 1 reproduces the closed-form slack") {
    const LatticePmf bern = make_pmf(0.0, 1.0, {1.0, 1.0});
    const BoundReport r = max_entropy_check(bern, 1, 1.0, 0.25);
    CHECK(r.lhs == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    const double rhs_expected =
        0.5 * std::log(2.0 * pi_v * std::exp(1.0) * (0.25 + 1.0 / 12.0));
    CHECK(r.rhs == doctest::Approx(rhs_expected).epsilon(1e-15));
    CHECK(r.pass);

    // The slack is the divergence of the uniformly smoothed variable, which
    // for a symmetric Bernoulli step has the closed form
    // (1/2) log(2 pi e / 3) - log 2.
    const double smoothed = smoothed_relative_entropy(bern, 1, 1.0, 0.25);
    CHECK(smoothed == doctest::Approx(r.slack).epsilon(1e-15));
    const double closed_form =
        0.5 * std::log(2.0 * pi_v * std::exp(1.0) / 3.0) - std::log(2.0);
    CHECK(smoothed == doctest::Approx(closed_form).epsilon(1e-12));
    CHECK(smoothed == doctest::Approx(0.176485208310672).epsilon(1e-12));
}

TEST_CASE("max_entropy_check validates the lattice step") {
    const LatticePmf bern = make_pmf(0.0, 1.0, {1.0, 1.0});
    CHECK_THROWS_AS(max_entropy_check(bern, 1, 0.5, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(max_entropy_check(bern, 0, 1.0, 0.25), std::invalid_argument);
}

TEST_CASE("standardised binomial divergence stays below one at n = 64") {
    const LatticePmf view = standardized_view(binomial_pmf(64), 64, Moments{0.5, 0.25});
    const double d = relative_entropy_to_gaussian(view);
    CHECK(d > 0.0);
    CHECK(d < 1.0);
}

TEST_CASE("pinsker inequality for moment-matched quantised Gaussians") {
    const LatticePmf view = standardized_view(binomial_pmf(256), 256, Moments{0.5, 0.25});
    const BoundReport r = pinsker_check(view);
    CHECK(r.pass);
    CHECK(r.lhs >= 0.0);
    CHECK(r.lhs <= r.rhs);
}

TEST_CASE("pinsker self-test: a quantised Gaussian against its own spec") {
    const QuantizedGaussianSpec spec(0.3, 2.0, 0.1, 0.25);
    const LatticePmf q = quantized_gaussian(spec).pmf;
    const BoundReport r = pinsker_check(q, spec);
    CHECK(r.pass);
    // Only truncation and renormalisation separate the two sides.
    CHECK(r.lhs <= 1e-12);
    CHECK(r.rhs <= 1e-9);
    CHECK(r.rhs >= 0.0);
}

TEST_CASE("pinsker rejects a spec on a different lattice") {
    const LatticePmf p = make_pmf(0.0, 1.0, {1.0, 1.0});
    CHECK_THROWS_AS(pinsker_check(p, QuantizedGaussianSpec(0.5, 0.25, 0.5, 1.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(pinsker_check(make_pmf(0.0, 1.0, {1.0})), std::invalid_argument);
}
