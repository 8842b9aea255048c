#pragma once

#include <cstdint>

namespace locsketch {

// SplitMix64 finalizer (Stafford mix13). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Combine a seed with two labels into a new seed. Used to give every
// (theta index, trial index) pair and every role inside a trial its own
// independent seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept {
  std::uint64_t h = mix64(seed ^ 0x6A09E667F3BCC909ULL);
  h = mix64(h ^ mix64(a + 0xBB67AE8584CAA73BULL));
  h = mix64(h ^ mix64(b + 0x3C6EF372FE94F82BULL));
  return h;
}

// Counter-based generator: output k of stream (seed, stream) is
//
//   key  = mix64(mix64(seed ^ kGolden) ^ mix64(stream + 0xD1B54A32D192ED03))
//   out  = mix64(key + (k + 1) * kGolden)
//
// i.e. a SplitMix64 sequence whose starting state is keyed by (seed, stream).
// Any output can be computed independently of the others, so streams can be
// split across threads without changing results.
class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix64(mix64(seed ^ kGolden) ^ mix64(stream + 0xD1B54A32D192ED03ULL))) {}

  constexpr std::uint64_t at(std::uint64_t counter) const noexcept {
    return mix64(key_ + (counter + 1) * kGolden);
  }

  constexpr std::uint64_t next() noexcept { return at(counter_++); }

  // Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace locsketch
