#pragma once

#include <cmath>
#include <stdexcept>

#include "entclt/numeric.hpp"

namespace entclt {

inline double normal_pdf(double x, double mean, double variance) {
    const double z = (x - mean);
    return std::exp(-0.5 * z * z / variance) / std::sqrt(2.0 * pi_v * variance);
}

/// Standard normal CDF through erfc so the tails keep full relative accuracy.
inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

namespace detail {

/// log(erfc(x)) for x >= 0. std::erfc underflows near x ~ 26.6; past that we
/// switch to the asymptotic series
///   erfc(x) = exp(-x^2)/(x*sqrt(pi)) * (1 - 1/(2x^2) + 3/(4x^4) - ...),
/// whose terms fall below 1e-16 after a handful of iterations once x > 20.
inline double log_erfc_nonneg(double x) {
    if (x < 25.0) return std::log(std::erfc(x));
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0;
    double series = 1.0;
    for (int k = 1; k <= 12; ++k) {
        term *= -static_cast<double>(2 * k - 1) * inv2x2;
        series += term;
        if (std::abs(term) < 1e-18 * series) break;
    }
    return -x * x - std::log(x * std::sqrt(pi_v)) + std::log(series);
}

}  // namespace detail

/// Gaussian probability mass of the interval [lo, hi) under N(mean, sigma^2),
/// evaluated from the tail nearer to the cell so that the difference of CDF
/// values never cancels catastrophically.
inline double gaussian_cell_mass(double lo, double hi, double mean, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("entclt::gaussian_cell_mass: sigma must be positive");
    if (!(lo < hi)) throw std::invalid_argument("entclt::gaussian_cell_mass: empty cell");
    const double s = sigma * std::sqrt(2.0);
    const double zl = (lo - mean) / s;
    const double zh = (hi - mean) / s;
    if (zl >= 0.0) return 0.5 * (std::erfc(zl) - std::erfc(zh));
    if (zh <= 0.0) return 0.5 * (std::erfc(-zh) - std::erfc(-zl));
    // Cell straddles the mean: erf terms have opposite signs, they add.
    return 0.5 * (std::erf(zh) - std::erf(zl));
}

/// log of gaussian_cell_mass, valid far beyond the range where the mass
/// itself underflows. Relative entropy sums p*log(q) over every support
/// point of p, and supports of standardised sums reach 30+ sigma.
inline double log_gaussian_cell_mass(double lo, double hi, double mean, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("entclt::log_gaussian_cell_mass: sigma must be positive");
    if (!(lo < hi)) throw std::invalid_argument("entclt::log_gaussian_cell_mass: empty cell");
    const double s = sigma * std::sqrt(2.0);
    double zl = (lo - mean) / s;
    double zh = (hi - mean) / s;
    if (zl < 0.0 && zh > 0.0)
        return std::log(0.5 * (std::erf(zh) - std::erf(zl)));
    if (zh <= 0.0) {  // mirror the left tail onto the right
        const double t = zl;
        zl = -zh;
        zh = -t;
    }
    const double la = detail::log_erfc_nonneg(zl);
    const double lb = detail::log_erfc_nonneg(zh);
    // mass = 0.5 * erfc(zl) * (1 - erfc(zh)/erfc(zl))
    return std::log(0.5) + la + log1mexp(lb - la);
}

}  // namespace entclt
