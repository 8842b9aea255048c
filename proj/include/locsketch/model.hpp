#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "locsketch/bit_sequence.hpp"
#include "locsketch/error.hpp"
#include "locsketch/rng.hpp"

namespace locsketch {

// Two length-n reads cut from one source string X of length n + shift:
// x1 is the prefix of X and x2 starts `shift` symbols later, so the last
// n - shift symbols of x1 equal the first n - shift symbols of x2.
struct OverlapInstance {
  BitSequence x;
  BitSequence x1;
  BitSequence x2;
  std::size_t shift = 0;
  double theta_actual = 1.0;  // 1 - shift / n
};

// Binary symmetric channel parameters. `beta` is kept alongside `p` when the
// crossover probability was derived as beta / log2(n).
struct NoiseSpec {
  double p = 0.0;
  double beta = 0.0;

  static NoiseSpec from_beta(double beta, std::size_t n) {
    if (!(beta >= 0.0)) throw InvalidArgument("beta must be nonnegative");
    if (n < 2) throw InvalidArgument("n must be at least 2 to derive p from beta");
    NoiseSpec spec{beta / std::log2(static_cast<double>(n)), beta};
    if (spec.p > 1.0) throw InvalidArgument("beta / log2(n) exceeds 1");
    return spec;
  }

  bool noiseless() const noexcept { return p == 0.0; }
};

inline std::size_t shift_for(std::size_t n, double theta) {
  return static_cast<std::size_t>(std::llround((1.0 - theta) * static_cast<double>(n)));
}

// Draws X i.i.d. uniform of length n + round((1 - theta) n) and cuts the two
// overlapping reads from it. Deterministic in (n, theta, seed).
inline OverlapInstance generate_pair(std::size_t n, double theta, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("generate_pair: n must be at least 2");
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidArgument("generate_pair: theta must lie in [0, 1]");
  OverlapInstance inst;
  inst.shift = shift_for(n, theta);
  inst.theta_actual = 1.0 - static_cast<double>(inst.shift) / static_cast<double>(n);
  inst.x = BitSequence::random(n + inst.shift, seed, 0);
  inst.x1 = inst.x.slice(0, n);
  inst.x2 = inst.x.slice(inst.shift, n);
  return inst;
}

// Flips every symbol independently with probability p. Returns a new
// sequence; the input is untouched.
inline BitSequence apply_bsc(const BitSequence& x, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("apply_bsc: p must lie in [0, 1]");
  BitSequence out(x);
  if (p == 0.0) return out;
  CounterRng rng(seed, 0);
  for (std::size_t w = 0; w < BitSequence::word_count(x.size()); ++w) {
    std::uint64_t flips = 0;
    const std::size_t lim = std::min<std::size_t>(64, x.size() - w * 64);
    for (std::size_t b = 0; b < lim; ++b) {
      if (rng.uniform() < p) flips |= std::uint64_t{1} << b;
    }
    out.flip_word(w, flips);
  }
  return out;
}

// Probability that a uniformly placed position of the (2 - theta) n source
// falls in the shared theta n segment.
constexpr double alpha_of_theta(double theta) noexcept { return theta / (2.0 - theta); }

constexpr double theta_of_alpha(double alpha) noexcept { return 2.0 * alpha / (1.0 + alpha); }

// Hit probability after BSC noise with p log2(n) -> beta.
inline double alpha_tilde(double theta, double beta) {
  if (!(beta >= 0.0)) throw InvalidArgument("alpha_tilde: beta must be nonnegative");
  const double t = theta * std::exp(-6.0 * beta);
  return t / (2.0 - t);
}

}  // namespace locsketch
