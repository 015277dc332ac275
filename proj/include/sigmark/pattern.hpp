#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sigmark/errors.hpp"

namespace sigmark {

// Exact cycles-per-token frequency of a periodic rank schedule.
struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational reduced(long long n, long long d) {
    const long long g = std::gcd(n, d);
    return Rational{n / g, d / g};
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

// A sinusoidal rank schedule key plus the number of tokens to cover.
// harmonic/samples_per_period fixes the normalized frequency; amplitude_max
// is the deepest candidate rank the schedule may request.
struct PatternSpec {
  int harmonic = 1;
  double phase = 0.0;
  int amplitude_max = 5;
  int samples_per_period = 10;
  int length = 200;

  void validate() const {
    if (harmonic < 1 || samples_per_period < 1)
      throw InvalidSpec("pattern: harmonic and samples_per_period must be >= 1");
    if (amplitude_max < 1) throw InvalidSpec("pattern: amplitude_max must be >= 1");
    if (length < 1) throw InvalidSpec("pattern: length must be >= 1");
    if (harmonic > samples_per_period / 2)
      throw NyquistViolation("pattern: harmonic exceeds samples_per_period/2");
  }
};

struct Pattern {
  PatternSpec spec;
  std::vector<int> ranks;   // values in [1, amplitude_max]
  Rational frequency;       // harmonic / samples_per_period, reduced

  int period() const {
    return spec.samples_per_period / std::gcd(spec.harmonic, spec.samples_per_period);
  }
};

inline Rational pattern_frequency(const PatternSpec& spec) {
  spec.validate();
  return Rational::reduced(spec.harmonic, spec.samples_per_period);
}

inline double round_half_away_from_zero(double v) {
  // std::round has exactly this behavior; named for clarity at call sites.
  return std::round(v);
}

// Quantizes sin(2*pi*h*k/S + phi) onto ranks 1..A. Scale (A-1)/2 and offset
// (A+1)/2 map [-1, 1] onto [1, A]; the clamp guards phase-induced overshoot
// at the boundary ranks after rounding.
inline Pattern generate_pattern(const PatternSpec& spec) {
  spec.validate();
  Pattern p;
  p.spec = spec;
  p.frequency = Rational::reduced(spec.harmonic, spec.samples_per_period);
  p.ranks.resize(static_cast<std::size_t>(spec.length));
  const double scale = (spec.amplitude_max - 1) / 2.0;
  const double offset = (spec.amplitude_max + 1) / 2.0;
  for (int k = 0; k < spec.length; ++k) {
    // Reduce the sample index first: the schedule is exactly periodic, and
    // unreduced arguments can flip half-way rounding cases for even A.
    const int kr = k % spec.samples_per_period;
    const double ang =
        2.0 * std::numbers::pi * spec.harmonic * kr / spec.samples_per_period + spec.phase;
    const double v = std::sin(ang) * scale + offset;
    int r = static_cast<int>(round_half_away_from_zero(v));
    if (r < 1) r = 1;
    if (r > spec.amplitude_max) r = spec.amplitude_max;
    p.ranks[static_cast<std::size_t>(k)] = r;
  }
  return p;
}

// Key text record: "harmonic,phase,amplitude_max,samples_per_period".
// The schedule length is a generation parameter, not part of the key.
inline std::string format_key(const PatternSpec& spec) {
  std::ostringstream os;
  os << spec.harmonic << ',' << spec.phase << ',' << spec.amplitude_max << ','
     << spec.samples_per_period;
  return os.str();
}

inline PatternSpec parse_key(std::string_view text, int length = 0) {
  PatternSpec spec;
  std::string buf(text);
  for (char& c : buf)
    if (c == ',') c = ' ';
  std::istringstream is(buf);
  if (!(is >> spec.harmonic >> spec.phase >> spec.amplitude_max >> spec.samples_per_period))
    throw InvalidSpec("pattern key: expected 'harmonic,phase,amplitude_max,samples_per_period'");
  std::string rest;
  if (is >> rest) throw InvalidSpec("pattern key: trailing fields");
  spec.length = length > 0 ? length : spec.samples_per_period;
  spec.validate();
  return spec;
}

// Key-set file: one key per line; blank lines and '#' comments skipped.
inline std::vector<PatternSpec> load_key_file(const std::string& path, int length = 0) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open key file: " + path);
  std::vector<PatternSpec> keys;
  std::string line;
  while (std::getline(in, line)) {
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    keys.push_back(parse_key(std::string_view(line).substr(start), length));
  }
  return keys;
}

}  // namespace sigmark
