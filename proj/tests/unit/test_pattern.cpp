#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "sigmark/fft.hpp"
#include "sigmark/pattern.hpp"

using namespace sigmark;

namespace {

// Scalar oracle: evaluate the quantization formula pointwise, independent of
// generate_pattern's loop. The sample index is reduced modulo the period,
// mirroring the documented schedule definition.
int quantize_oracle(int h, double phi, int a, int s, int k) {
  const double v =
      std::sin(2.0 * std::numbers::pi * h * (k % s) / s + phi) * (a - 1) / 2.0 + (a + 1) / 2.0;
  const double r = std::round(v);
  return static_cast<int>(std::min<double>(a, std::max(1.0, r)));
}

}  // namespace

TEST_CASE("worked pattern example") {
  const auto p = generate_pattern({1, 0.0, 5, 10, 10});
  REQUIRE(p.ranks == std::vector<int>{3, 4, 5, 5, 4, 3, 2, 1, 1, 2});
  REQUIRE(p.frequency == Rational{1, 10});
}

TEST_CASE("degenerate amplitude collapses to greedy schedule") {
  const auto p = generate_pattern({1, 0.0, 1, 10, 10});
  REQUIRE(p.ranks == std::vector<int>(10, 1));
}

TEST_CASE("second harmonic pattern") {
  const auto p = generate_pattern({2, 0.0, 5, 10, 10});
  std::vector<int> expected;
  for (int k = 0; k < 10; ++k) expected.push_back(quantize_oracle(2, 0.0, 5, 10, k));
  REQUIRE(expected == std::vector<int>{3, 5, 4, 2, 1, 3, 5, 4, 2, 1});
  REQUIRE(p.ranks == expected);
  REQUIRE(p.frequency.value() == Catch::Approx(0.2));
}

TEST_CASE("pattern matches scalar oracle across specs") {
  for (int h = 1; h <= 5; ++h) {
    for (double phi : {0.0, 0.7, std::numbers::pi / 2}) {
      for (int a : {1, 2, 3, 5, 9}) {
        const auto p = generate_pattern({h, phi, a, 10, 40});
        for (int k = 0; k < 40; ++k) {
          INFO("h=" << h << " phi=" << phi << " a=" << a << " k=" << k);
          REQUIRE(p.ranks[static_cast<std::size_t>(k)] == quantize_oracle(h, phi, a, 10, k));
        }
      }
    }
  }
}

TEST_CASE("pattern frequency is exact rational") {
  REQUIRE(pattern_frequency({1, 0.0, 5, 10, 10}) == Rational{1, 10});
  REQUIRE(pattern_frequency({5, 0.0, 5, 10, 10}) == Rational{1, 2});
  REQUIRE(pattern_frequency({3, 0.0, 5, 10, 10}) == Rational{3, 10});
  REQUIRE(pattern_frequency({2, 0.0, 5, 10, 10}) == Rational{1, 5});
}

TEST_CASE("spec validation") {
  REQUIRE_THROWS_AS(generate_pattern({6, 0.0, 5, 10, 10}), NyquistViolation);
  REQUIRE_THROWS_AS(generate_pattern({1, 0.0, 0, 10, 10}), InvalidSpec);
  REQUIRE_THROWS_AS(generate_pattern({1, 0.0, 5, 10, 0}), InvalidSpec);
  REQUIRE_THROWS_AS(generate_pattern({0, 0.0, 5, 10, 10}), InvalidSpec);
  REQUIRE_NOTHROW(generate_pattern({5, 0.0, 5, 10, 10}));
}

TEST_CASE("ranks stay within amplitude and repeat with the reduced period") {
  for (int h = 1; h <= 5; ++h) {
    const auto p = generate_pattern({h, 0.3, 5, 10, 200});
    const int period = p.period();
    for (std::size_t k = 0; k < p.ranks.size(); ++k) {
      REQUIRE(p.ranks[k] >= 1);
      REQUIRE(p.ranks[k] <= 5);
      if (k + static_cast<std::size_t>(period) < p.ranks.size())
        REQUIRE(p.ranks[k] == p.ranks[k + static_cast<std::size_t>(period)]);
    }
    REQUIRE(p.frequency.value() > 0.0);
    REQUIRE(p.frequency.value() <= 0.5);
  }
}

TEST_CASE("distinct harmonics give distinct frequencies at least 1/S apart") {
  for (int h1 = 1; h1 <= 5; ++h1) {
    for (int h2 = h1 + 1; h2 <= 5; ++h2) {
      const double f1 = pattern_frequency({h1, 0.0, 5, 10, 10}).value();
      const double f2 = pattern_frequency({h2, 0.0, 5, 10, 10}).value();
      REQUIRE(std::abs(f1 - f2) >= 0.1 - 1e-12);
    }
  }
}

TEST_CASE("mean-removed pure-tone rank series peaks at the pattern bin") {
  // Nyquist-edge harmonic sampled at phase 0 hits the sine's zeros, so it is
  // checked at phase pi/2 where the tone is observable.
  for (int h = 1; h <= 5; ++h) {
    const double phi = (h == 5) ? std::numbers::pi / 2 : 0.0;
    const auto p = generate_pattern({h, phi, 5, 10, 200});
    std::vector<double> x(p.ranks.begin(), p.ranks.end());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    for (double& v : x) v -= mean;
    const auto spec = fft_real(x);
    std::size_t best = 1;
    for (std::size_t b = 1; b <= 100; ++b)
      if (std::abs(spec[b]) > std::abs(spec[best])) best = b;
    REQUIRE(best == static_cast<std::size_t>(20 * h));
  }
}

TEST_CASE("key record round trip") {
  const PatternSpec spec{3, 1.5707963267948966, 4, 10, 200};
  const auto parsed = parse_key(format_key(spec), 200);
  REQUIRE(parsed.harmonic == spec.harmonic);
  REQUIRE(parsed.phase == Catch::Approx(spec.phase));
  REQUIRE(parsed.amplitude_max == spec.amplitude_max);
  REQUIRE(parsed.samples_per_period == spec.samples_per_period);
  REQUIRE(parsed.length == 200);

  REQUIRE_THROWS_AS(parse_key("1,0,5"), InvalidSpec);
  REQUIRE_THROWS_AS(parse_key("1,0,5,10,7"), InvalidSpec);
  REQUIRE_THROWS_AS(parse_key("9,0,5,10"), NyquistViolation);
}
