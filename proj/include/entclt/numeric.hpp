#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace entclt {

/// Thrown when a computation loses numerical integrity (clamped mass over
/// budget, quadrature that fails to converge, captured Gaussian mass too
/// small). Distinct from std::invalid_argument, which flags bad inputs.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// Neumaier-compensated accumulator. Sums of 1e5+ terms show up in entropy,
/// relative entropy and moment computations; plain doubles drift too much
/// for the 1e-12 contracts.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_total(std::span<const double> xs) noexcept {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

inline constexpr double pi_v = 3.141592653589793238462643383279502884;

/// Machine epsilon for double, spelled once.
inline constexpr double eps_v = 2.220446049250313e-16;

/// log(2*pi*e*v) / 2, the differential entropy of N(mu, v).
inline double gaussian_entropy(double variance) {
    if (!(variance > 0.0))
        throw std::invalid_argument("entclt::gaussian_entropy: variance must be positive");
    return 0.5 * std::log(2.0 * pi_v * std::exp(1.0) * variance);
}

/// log(1 - exp(x)) for x < 0 without cancellation.
inline double log1mexp(double x) {
    return x < -0.6931471805599453 ? std::log1p(-std::exp(x))
                                   : std::log(-std::expm1(x));
}

}  // namespace entclt
