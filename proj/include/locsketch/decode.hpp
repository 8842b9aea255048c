#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "locsketch/error.hpp"
#include "locsketch/model.hpp"
#include "locsketch/sketch.hpp"

namespace locsketch {

struct DecodeParams {
  double theta0 = 0.5;                    // smallest overlap the decoder must detect
  double threshold_fraction = 1.0 / 6.0;  // abstain when mode count < fraction * alpha0_eff * u
  double noise_beta = 0.0;                // alpha0_eff = alpha0 * exp(-6 beta)

  double alpha0() const noexcept { return alpha_of_theta(theta0); }
  double alpha0_effective() const noexcept { return alpha0() * std::exp(-6.0 * noise_beta); }
  double threshold(std::uint32_t u) const noexcept { return threshold_fraction * alpha0_effective() * u; }

  void validate() const {
    if (!(theta0 > 0.0 && theta0 < 1.0)) throw InvalidArgument("decode params: theta0 must lie in (0, 1)");
    if (!(threshold_fraction >= 0.0)) throw InvalidArgument("decode params: threshold fraction must be nonnegative");
    if (!(noise_beta >= 0.0)) throw InvalidArgument("decode params: beta must be nonnegative");
  }
};

struct DecodeResult {
  double theta_hat = 0.0;
  std::int64_t mode_value = 0;
  std::uint32_t mode_count = 0;
  bool abstained = false;
};

struct Mode {
  std::int64_t value = 0;
  std::uint32_t count = 0;

  friend bool operator==(const Mode&, const Mode&) = default;
};

inline void check_compatible(const SketchParams& a, const SketchParams& b) {
  if (a.n != b.n) throw IncompatibleSketch("n");
  if (a.u != b.u) throw IncompatibleSketch("u");
  if (a.v != b.v) throw IncompatibleSketch("v");
  if (a.seed != b.seed) throw IncompatibleSketch("seed");
}

// Entry-wise differences s1 - s2, in units of 2^-v.
inline std::vector<std::int64_t> diff_multiset(const LocationalSketch& s1, const LocationalSketch& s2) {
  check_compatible(s1.params, s2.params);
  std::vector<std::int64_t> d(s1.entries.size());
  for (std::size_t j = 0; j < d.size(); ++j) {
    d[j] = static_cast<std::int64_t>(s1.entries[j]) - static_cast<std::int64_t>(s2.entries[j]);
  }
  return d;
}

// Most frequent value; ties go to the numerically smallest.
inline Mode mode_with_ties(std::span<const std::int64_t> values) {
  if (values.empty()) throw InvalidArgument("mode_with_ties: empty input");
  std::vector<std::int64_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  Mode best{sorted.front(), 0};
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto run = static_cast<std::uint32_t>(j - i);
    if (run > best.count) best = Mode{sorted[i], run};
    i = j;
  }
  return best;
}

// Applies the abstention rules to an already computed mode.
inline DecodeResult decode_mode(Mode mode, std::uint32_t u, std::uint32_t v, const DecodeParams& p) {
  DecodeResult r{0.0, mode.value, mode.count, true};
  if (static_cast<double>(mode.count) < p.threshold(u)) return r;
  if (mode.value < 0) return r;
  r.abstained = false;
  r.theta_hat = 1.0 - std::ldexp(static_cast<double>(mode.value), -static_cast<int>(v));
  return r;
}

inline DecodeResult estimate_overlap(const LocationalSketch& s1, const LocationalSketch& s2, const DecodeParams& p) {
  p.validate();
  const auto d = diff_multiset(s1, s2);
  return decode_mode(mode_with_ties(d), s1.params.u, s1.params.v, p);
}

}  // namespace locsketch
