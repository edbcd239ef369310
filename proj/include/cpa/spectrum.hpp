#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace cpa {

/// Length-N discrete Fourier transform of a real or complex sequence,
/// X_k = sum_n x_n exp(-2 pi i k n / N).
///
/// Power-of-two lengths use an iterative radix-2 Cooley-Tukey transform; any
/// other length goes through Bluestein's chirp-z reformulation on a padded
/// power-of-two convolution, so every N costs O(N log N).
class Fft {
 public:
  using Complex = std::complex<double>;

  static std::vector<Complex> forward(std::span<const double> x) {
    std::vector<Complex> c(x.begin(), x.end());
    transform(c, false);
    return c;
  }

  /// In-place transform; inverse=true computes the unnormalized inverse.
  static void transform(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    if ((n & (n - 1)) == 0) {
      radix2(a, inverse);
    } else {
      bluestein(a, inverse);
    }
  }

 private:
  static void radix2(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
      std::size_t bit = n >> 1;
      for (; j & bit; bit >>= 1) j ^= bit;
      j ^= bit;
      if (i < j) std::swap(a[i], a[j]);
    }
    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
      const std::size_t half = len / 2;
      // Twiddles evaluated directly rather than by recurrence to keep the
      // error at O(eps log N).
      std::vector<Complex> w(half);
      for (std::size_t k = 0; k < half; ++k) {
        const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
        w[k] = {std::cos(ang), std::sin(ang)};
      }
      for (std::size_t i = 0; i < n; i += len) {
        for (std::size_t k = 0; k < half; ++k) {
          const Complex u = a[i + k];
          const Complex v = a[i + k + half] * w[k];
          a[i + k] = u + v;
          a[i + k + half] = u - v;
        }
      }
    }
  }

  static void bluestein(std::vector<Complex>& a, bool inverse) {
    const std::size_t n = a.size();
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    const double sign = inverse ? 1.0 : -1.0;
    // chirp_k = exp(sign * i pi k^2 / n); k^2 reduced mod 2n to keep the angle small.
    std::vector<Complex> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t k2 = (k * k) % (2 * n);
      const double ang = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
      chirp[k] = {std::cos(ang), std::sin(ang)};
    }
    std::vector<Complex> u(m), v(m);
    for (std::size_t k = 0; k < n; ++k) u[k] = a[k] * chirp[k];
    v[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) v[k] = v[m - k] = std::conj(chirp[k]);
    radix2(u, false);
    radix2(v, false);
    for (std::size_t k = 0; k < m; ++k) u[k] *= v[k];
    radix2(u, true);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = u[k] * scale * chirp[k];
  }
};

}  // namespace cpa
