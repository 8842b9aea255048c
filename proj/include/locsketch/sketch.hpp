#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "locsketch/bit_sequence.hpp"
#include "locsketch/error.hpp"
#include "locsketch/lexorder.hpp"

namespace locsketch {

struct SketchParams {
  std::uint32_t u = 1;  // number of orderings
  std::uint32_t v = 1;  // bits per entry, 1..32
  std::uint64_t seed = 0;
  std::uint64_t n = 1;

  std::uint64_t payload_bits() const noexcept { return std::uint64_t{u} * v; }

  void validate() const {
    if (u == 0) throw InvalidArgument("sketch params: u must be positive");
    if (v == 0 || v > 32) throw InvalidArgument("sketch params: v must lie in [1, 32]");
    if (n == 0) throw InvalidArgument("sketch params: n must be positive");
  }

  friend bool operator==(const SketchParams&, const SketchParams&) = default;
};

// One v-bit truncated first-suffix location per ordering.
struct LocationalSketch {
  SketchParams params;
  std::vector<std::uint32_t> entries;

  friend bool operator==(const LocationalSketch&, const LocationalSketch&) = default;
};

// floor(m 2^v / n) clamped to 2^v - 1, in exact integer arithmetic.
inline std::uint32_t truncate(std::uint64_t m, std::uint64_t n, std::uint32_t v) {
  if (n == 0 || m < 1 || m > n) throw InvalidArgument("truncate: m must lie in [1, n]");
  if (v == 0 || v > 32) throw InvalidArgument("truncate: v must lie in [1, 32]");
  const unsigned __int128 scaled = (static_cast<unsigned __int128>(m) << v) / n;
  const std::uint64_t top = (std::uint64_t{1} << v) - 1;
  return static_cast<std::uint32_t>(scaled > top ? top : static_cast<std::uint64_t>(scaled));
}

// Sketch under a prebuilt ordering set. Lets callers reuse one set for both
// reads of a pair.
inline LocationalSketch make_sketch(const BitSequence& x, const OrderingSet& orderings, std::uint32_t v) {
  if (x.size() != orderings.n) throw InvalidArgument("make_sketch: sequence length does not match n");
  LocationalSketch s{SketchParams{orderings.u, v, orderings.seed, orderings.n}, {}};
  s.params.validate();
  s.entries.resize(orderings.u);
  for (std::uint32_t j = 0; j < orderings.u; ++j) {
    s.entries[j] = truncate(first_suffix_position(x, orderings.masks[j]), orderings.n, v);
  }
  return s;
}

inline LocationalSketch make_sketch(const BitSequence& x, const SketchParams& params) {
  params.validate();
  if (x.size() != params.n) throw InvalidArgument("make_sketch: sequence length does not match n");
  return make_sketch(x, make_orderings(params.seed, params.u, params.n), params.v);
}

// .lsk layout (all integers little-endian):
//   "LSK1" | n:u64 | u:u32 | v:u8 | seed:u64 | payload
// payload is ceil(u v / 8) bytes: entries in index order, each MSB-first,
// packed MSB-first into bytes, final byte zero-padded.
inline constexpr std::array<char, 4> kLskMagic = {'L', 'S', 'K', '1'};
inline constexpr std::size_t kLskHeaderBytes = 25;

namespace detail {

inline void put_le(std::vector<std::uint8_t>& out, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

inline std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t pos, int bytes, const char* field) {
  if (in.size() < pos + static_cast<std::size_t>(bytes)) {
    throw ParseError(field, in.size(), "truncated header");
  }
  std::uint64_t value = 0;
  for (int i = 0; i < bytes; ++i) value |= std::uint64_t{in[pos + i]} << (8 * i);
  return value;
}

inline void check_magic(std::span<const std::uint8_t> in, const std::array<char, 4>& magic) {
  if (in.size() < 4) throw ParseError("magic", in.size(), "truncated header");
  for (std::size_t i = 0; i < 4; ++i) {
    if (in[i] != static_cast<std::uint8_t>(magic[i])) throw ParseError("magic", i, "bad magic");
  }
}

}  // namespace detail

inline std::vector<std::uint8_t> serialize(const LocationalSketch& s) {
  s.params.validate();
  if (s.entries.size() != s.params.u) throw InvalidArgument("serialize: entry count does not match u");
  std::vector<std::uint8_t> out(kLskMagic.begin(), kLskMagic.end());
  detail::put_le(out, s.params.n, 8);
  detail::put_le(out, s.params.u, 4);
  detail::put_le(out, s.params.v, 1);
  detail::put_le(out, s.params.seed, 8);

  const std::size_t payload = (s.params.payload_bits() + 7) / 8;
  const std::size_t base = out.size();
  out.resize(base + payload, 0);
  std::uint64_t bit = 0;
  for (const std::uint32_t e : s.entries) {
    for (std::uint32_t k = s.params.v; k-- > 0; ++bit) {
      if ((e >> k) & 1U) out[base + bit / 8] |= static_cast<std::uint8_t>(0x80U >> (bit % 8));
    }
  }
  return out;
}

inline LocationalSketch deserialize(std::span<const std::uint8_t> in) {
  detail::check_magic(in, kLskMagic);
  LocationalSketch s;
  s.params.n = detail::get_le(in, 4, 8, "n");
  s.params.u = static_cast<std::uint32_t>(detail::get_le(in, 12, 4, "u"));
  s.params.v = static_cast<std::uint32_t>(detail::get_le(in, 16, 1, "v"));
  s.params.seed = detail::get_le(in, 17, 8, "seed");
  if (s.params.n == 0) throw ParseError("n", 4, "n must be positive");
  if (s.params.u == 0) throw ParseError("u", 12, "u must be positive");
  if (s.params.v == 0 || s.params.v > 32) throw ParseError("v", 16, "v must lie in [1, 32]");

  const std::uint64_t bits = s.params.payload_bits();
  const std::size_t payload = (bits + 7) / 8;
  if (in.size() < kLskHeaderBytes + payload) throw ParseError("payload", in.size(), "truncated payload");
  if (in.size() > kLskHeaderBytes + payload) throw ParseError("payload", kLskHeaderBytes + payload, "trailing bytes");
  const auto body = in.subspan(kLskHeaderBytes);
  if (bits % 8 != 0) {
    const std::uint8_t pad = static_cast<std::uint8_t>(0xFFU >> (bits % 8));
    if (body[payload - 1] & pad) throw ParseError("payload", kLskHeaderBytes + payload - 1, "nonzero padding");
  }

  s.entries.assign(s.params.u, 0);
  std::uint64_t bit = 0;
  for (auto& e : s.entries) {
    for (std::uint32_t k = 0; k < s.params.v; ++k, ++bit) {
      e = (e << 1) | ((body[bit / 8] >> (7 - bit % 8)) & 1U);
    }
  }
  return s;
}

}  // namespace locsketch
