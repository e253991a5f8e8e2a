#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <vector>

#include "entclt/numeric.hpp"

namespace entclt::detail {

/// In-place iterative radix-2 FFT. Twiddles come from std::polar per index
/// rather than incremental rotation, so per-element error stays at a few ulp
/// even for multi-million-point transforms.
inline void fft_radix2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n < 2) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<std::complex<double>> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        twiddle[k] = std::polar(1.0, sign * 2.0 * pi_v * static_cast<double>(k) / static_cast<double>(n));
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * twiddle[j * stride];
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= scale;
    }
}

/// Linear convolution of two nonnegative real sequences via FFT.
inline std::vector<double> fft_convolve(const std::vector<double>& p, const std::vector<double>& q) {
    const std::size_t out_size = p.size() + q.size() - 1;
    const std::size_t n = std::bit_ceil(out_size);
    std::vector<std::complex<double>> fp(n), fq(n);
    for (std::size_t i = 0; i < p.size(); ++i) fp[i] = p[i];
    for (std::size_t i = 0; i < q.size(); ++i) fq[i] = q[i];
    fft_radix2(fp, false);
    fft_radix2(fq, false);
    for (std::size_t i = 0; i < n; ++i) fp[i] *= fq[i];
    fft_radix2(fp, true);
    std::vector<double> out(out_size);
    for (std::size_t i = 0; i < out_size; ++i) out[i] = fp[i].real();
    return out;
}

}  // namespace entclt::detail
