#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

namespace sigmark {

namespace fft_detail {

// Iterative radix-2 Cooley-Tukey; size must be a power of two.
inline void radix2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n < 2) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const auto u = a[i + j];
        const auto v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    for (auto& x : a) x /= static_cast<double>(n);
  }
}

// Bluestein's chirp-z reduction of an arbitrary-size DFT to a power-of-two
// cyclic convolution. The chirp exponent k^2/2 is evaluated as k^2 mod 2n
// to keep the phase argument small.
inline std::vector<std::complex<double>> bluestein(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  const std::size_t m = std::bit_ceil(2 * n - 1);
  std::vector<std::complex<double>> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t k2 = (k * k) % (2 * n);
    const double ang = -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = std::complex<double>(std::cos(ang), std::sin(ang));
  }
  std::vector<std::complex<double>> a(m), b(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
  radix2(a, false);
  radix2(b, false);
  for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
  radix2(a, true);
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
  return out;
}

}  // namespace fft_detail

// Forward DFT of arbitrary length: X[b] = sum_k x[k] e^{-2*pi*i*b*k/N}.
inline std::vector<std::complex<double>> fft(std::vector<std::complex<double>> x) {
  if (x.size() < 2) return x;
  if (std::has_single_bit(x.size())) {
    fft_detail::radix2(x, false);
    return x;
  }
  return fft_detail::bluestein(x);
}

inline std::vector<std::complex<double>> fft_real(const std::vector<double>& x) {
  std::vector<std::complex<double>> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = x[i];
  return fft(std::move(c));
}

}  // namespace sigmark
