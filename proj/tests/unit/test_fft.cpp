#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sigmark/fft.hpp"
#include "sigmark/rng.hpp"

using namespace sigmark;

namespace {

// O(N^2) reference transform, kept deliberately naive.
std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t b = 0; b < n; ++b) {
    std::complex<double> sum(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>(b) *
                         static_cast<double>(k) / static_cast<double>(n);
      sum += x[k] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[b] = sum;
  }
  return out;
}

double relative_error(const std::vector<std::complex<double>>& got,
                      const std::vector<std::complex<double>>& want) {
  double scale = 0.0, worst = 0.0;
  for (const auto& w : want) scale = std::max(scale, std::abs(w));
  if (scale == 0.0) scale = 1.0;
  for (std::size_t i = 0; i < got.size(); ++i)
    worst = std::max(worst, std::abs(got[i] - want[i]) / scale);
  return worst;
}

}  // namespace

TEST_CASE("impulse transforms to flat spectrum") {
  std::vector<double> x(16, 0.0);
  x[0] = 1.0;
  const auto spec = fft_real(x);
  for (const auto& v : spec) {
    REQUIRE(v.real() == Catch::Approx(1.0).margin(1e-12));
    REQUIRE(v.imag() == Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("pure sine concentrates in one bin") {
  const std::size_t n = 64;
  const std::size_t f = 5;
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k)
    x[k] = std::sin(2.0 * std::numbers::pi * static_cast<double>(f * k) / n);
  const auto spec = fft_real(x);
  for (std::size_t b = 0; b <= n / 2; ++b) {
    const double expected = (b == f) ? n / 2.0 : 0.0;
    REQUIRE(std::abs(spec[b]) == Catch::Approx(expected).margin(1e-9));
  }
}

TEST_CASE("matches naive DFT on random series, power-of-two and odd sizes") {
  Rng rng(0xf00dULL);
  for (std::size_t n : {8u, 10u, 13u, 64u, 100u, 200u, 243u, 256u, 331u, 1000u, 1024u}) {
    std::vector<double> x(n);
    for (auto& v : x) v = rng.next_double() * 10.0 - 5.0;
    const auto got = fft_real(x);
    const auto want = naive_dft(x);
    REQUIRE(got.size() == want.size());
    REQUIRE(relative_error(got, want) < 1e-9);
  }
}

TEST_CASE("random integer rank series across many sizes") {
  Rng rng(77ULL);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 8 + rng.index(120);
    std::vector<double> x(n);
    for (auto& v : x) v = static_cast<double>(1 + rng.index(5));
    REQUIRE(relative_error(fft_real(x), naive_dft(x)) < 1e-9);
  }
}
