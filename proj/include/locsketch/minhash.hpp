#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "locsketch/bit_sequence.hpp"
#include "locsketch/error.hpp"
#include "locsketch/rng.hpp"
#include "locsketch/sketch.hpp"

namespace locsketch {

// ceil(3 log2 n) for n >= 1.
inline std::uint32_t ceil_3log2(std::uint64_t n) {
  if (n <= 1) return 0;
  if (n <= (std::uint64_t{1} << 21)) {
    return static_cast<std::uint32_t>(std::bit_width(n * n * n - 1));  // smallest k with 2^k >= n^3
  }
  return static_cast<std::uint32_t>(std::ceil(3.0L * std::log2(static_cast<long double>(n))));
}

// ceil(3 log2 n), clamped to [1, n].
inline std::uint32_t default_kmer_length(std::uint64_t n) {
  return static_cast<std::uint32_t>(std::clamp<std::uint64_t>(ceil_3log2(n), 1, std::max<std::uint64_t>(n, 1)));
}

struct MinHashParams {
  std::uint32_t k = 1;   // k-mer length
  std::uint32_t H = 1;   // number of hash functions
  std::uint32_t b = 16;  // fingerprint bits, 1..64
  std::uint64_t seed = 0;
  std::uint64_t n = 1;

  static MinHashParams with_default_k(std::uint64_t n, std::uint32_t H, std::uint32_t b, std::uint64_t seed) {
    return MinHashParams{default_kmer_length(n), H, b, seed, n};
  }

  std::uint64_t payload_bits() const noexcept { return std::uint64_t{H} * b; }

  void validate() const {
    if (n == 0) throw InvalidArgument("minhash params: n must be positive");
    if (k == 0 || k > n) throw InvalidArgument("minhash params: k must lie in [1, n]");
    if (k > std::numeric_limits<std::uint16_t>::max()) throw InvalidArgument("minhash params: k must fit 16 bits");
    if (H == 0) throw InvalidArgument("minhash params: H must be positive");
    if (b == 0 || b > 64) throw InvalidArgument("minhash params: b must lie in [1, 64]");
  }

  friend bool operator==(const MinHashParams&, const MinHashParams&) = default;
};

struct MinHashSketch {
  MinHashParams params;
  std::vector<std::uint64_t> fingerprints;

  friend bool operator==(const MinHashSketch&, const MinHashSketch&) = default;
};

namespace detail {

inline std::uint64_t low_bits(std::uint32_t b) noexcept {
  return b >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << b) - 1;
}

// Identifier of the k-mer at 0-based pos. Exact packed bits for k <= 64,
// otherwise a 64-bit digest of the packed words.
inline std::uint64_t kmer_code(const BitSequence& x, std::size_t pos, std::uint32_t k) noexcept {
  if (k <= 64) return x.window(pos) & low_bits(k);
  std::uint64_t h = mix64(k);
  for (std::uint32_t t = 0; t < k; t += 64) {
    const std::uint32_t rem = k - t;
    h = mix64(h ^ (x.window(pos + t) & low_bits(rem < 64 ? rem : 64)));
  }
  return h;
}

inline std::uint64_t minhash_key(std::uint64_t seed, std::uint32_t h) noexcept {
  return derive_seed(seed, 0x4D696E48ULL, h);
}

}  // namespace detail

// Hash function h of a k-mer identifier.
inline std::uint64_t kmer_hash(std::uint64_t code, std::uint64_t seed, std::uint32_t h) noexcept {
  return mix64(code ^ detail::minhash_key(seed, h));
}

inline MinHashSketch minhash_sketch(const BitSequence& x, const MinHashParams& p) {
  p.validate();
  if (x.size() != p.n) throw InvalidArgument("minhash_sketch: sequence length does not match n");
  const std::size_t count = x.size() - p.k + 1;
  std::vector<std::uint64_t> codes(count);
  for (std::size_t i = 0; i < count; ++i) codes[i] = detail::kmer_code(x, i, p.k);

  MinHashSketch s{p, std::vector<std::uint64_t>(p.H)};
  const std::uint64_t mask = detail::low_bits(p.b);
  for (std::uint32_t h = 0; h < p.H; ++h) {
    const std::uint64_t key = detail::minhash_key(p.seed, h);
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (const std::uint64_t c : codes) best = std::min(best, mix64(c ^ key));
    s.fingerprints[h] = best & mask;
  }
  return s;
}

inline void check_compatible(const MinHashParams& a, const MinHashParams& b) {
  if (a.n != b.n) throw IncompatibleSketch("n");
  if (a.H != b.H) throw IncompatibleSketch("H");
  if (a.k != b.k) throw IncompatibleSketch("k");
  if (a.b != b.b) throw IncompatibleSketch("b");
  if (a.seed != b.seed) throw IncompatibleSketch("seed");
}

struct MinHashEstimate {
  double match_fraction = 0.0;
  double jaccard = 0.0;  // collision corrected
  double theta_hat = 0.0;
};

inline MinHashEstimate minhash_estimate_detail(const MinHashSketch& s1, const MinHashSketch& s2) {
  check_compatible(s1.params, s2.params);
  std::size_t matches = 0;
  for (std::size_t h = 0; h < s1.fingerprints.size(); ++h) matches += s1.fingerprints[h] == s2.fingerprints[h];
  MinHashEstimate e;
  e.match_fraction = static_cast<double>(matches) / static_cast<double>(s1.params.H);
  const double chance = std::ldexp(1.0, -static_cast<int>(s1.params.b));
  e.jaccard = std::max(0.0, (e.match_fraction - chance) / (1.0 - chance));
  // Shared k-mers ~ theta n, union ~ (2 - theta) n, so J ~ theta / (2 - theta).
  e.theta_hat = std::clamp(2.0 * e.jaccard / (1.0 + e.jaccard), 0.0, 1.0);
  return e;
}

inline double minhash_estimate(const MinHashSketch& s1, const MinHashSketch& s2) {
  return minhash_estimate_detail(s1, s2).theta_hat;
}

// .mhs layout (little-endian):
//   "MHS1" | n:u64 | H:u32 | k:u16 | b:u8 | seed:u64 | H x ceil(b/8)-byte fingerprints
inline constexpr std::array<char, 4> kMhsMagic = {'M', 'H', 'S', '1'};
inline constexpr std::size_t kMhsHeaderBytes = 27;

inline std::vector<std::uint8_t> serialize(const MinHashSketch& s) {
  s.params.validate();
  if (s.fingerprints.size() != s.params.H) throw InvalidArgument("serialize: fingerprint count does not match H");
  std::vector<std::uint8_t> out(kMhsMagic.begin(), kMhsMagic.end());
  detail::put_le(out, s.params.n, 8);
  detail::put_le(out, s.params.H, 4);
  detail::put_le(out, s.params.k, 2);
  detail::put_le(out, s.params.b, 1);
  detail::put_le(out, s.params.seed, 8);
  const int width = static_cast<int>((s.params.b + 7) / 8);
  for (const std::uint64_t f : s.fingerprints) detail::put_le(out, f, width);
  return out;
}

inline MinHashSketch deserialize_minhash(std::span<const std::uint8_t> in) {
  detail::check_magic(in, kMhsMagic);
  MinHashSketch s;
  s.params.n = detail::get_le(in, 4, 8, "n");
  s.params.H = static_cast<std::uint32_t>(detail::get_le(in, 12, 4, "H"));
  s.params.k = static_cast<std::uint32_t>(detail::get_le(in, 16, 2, "k"));
  s.params.b = static_cast<std::uint32_t>(detail::get_le(in, 18, 1, "b"));
  s.params.seed = detail::get_le(in, 19, 8, "seed");
  if (s.params.n == 0) throw ParseError("n", 4, "n must be positive");
  if (s.params.H == 0) throw ParseError("H", 12, "H must be positive");
  if (s.params.k == 0 || s.params.k > s.params.n) throw ParseError("k", 16, "k must lie in [1, n]");
  if (s.params.b == 0 || s.params.b > 64) throw ParseError("b", 18, "b must lie in [1, 64]");

  const std::size_t width = (s.params.b + 7) / 8;
  const std::uint64_t body = std::uint64_t{s.params.H} * width;
  if (in.size() < kMhsHeaderBytes + body) throw ParseError("payload", in.size(), "truncated payload");
  if (in.size() > kMhsHeaderBytes + body) throw ParseError("payload", kMhsHeaderBytes + body, "trailing bytes");
  s.fingerprints.resize(s.params.H);
  const std::uint64_t mask = detail::low_bits(s.params.b);
  for (std::uint32_t h = 0; h < s.params.H; ++h) {
    const std::size_t pos = kMhsHeaderBytes + h * width;
    const std::uint64_t f = detail::get_le(in, pos, static_cast<int>(width), "payload");
    if (f & ~mask) throw ParseError("payload", pos, "fingerprint exceeds b bits");
    s.fingerprints[h] = f;
  }
  return s;
}

}  // namespace locsketch
