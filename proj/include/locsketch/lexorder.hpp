#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "locsketch/bit_sequence.hpp"
#include "locsketch/error.hpp"

namespace locsketch {

enum class Order { Less, Equal, Greater };

// Per-offset symbol order. flips[t] == 1 means that at offset t of every
// suffix the order is 1 < 0; otherwise 0 < 1. The sentinel terminating each
// suffix is larger than both symbols regardless of the mask.
struct Mask {
  BitSequence flips;

  std::size_t size() const noexcept { return flips.size(); }

  static Mask identity(std::size_t n) { return Mask{BitSequence(n)}; }
  static Mask random(std::uint64_t seed, std::uint64_t stream, std::size_t n) {
    return Mask{BitSequence::random(n, seed, stream)};
  }

  friend bool operator==(const Mask&, const Mask&) = default;
};

// u masks of length n; mask j is stream j of the seed.
struct OrderingSet {
  std::uint64_t seed = 0;
  std::uint32_t u = 0;
  std::size_t n = 0;
  std::vector<Mask> masks;

  friend bool operator==(const OrderingSet&, const OrderingSet&) = default;
};

inline OrderingSet make_orderings(std::uint64_t seed, std::uint32_t u, std::size_t n) {
  if (u == 0) throw InvalidArgument("make_orderings: u must be positive");
  if (n == 0) throw InvalidArgument("make_orderings: n must be positive");
  OrderingSet set{seed, u, n, {}};
  set.masks.reserve(u);
  for (std::uint32_t j = 0; j < u; ++j) set.masks.push_back(Mask::random(seed, j, n));
  return set;
}

namespace detail {

// Compares the sentinel-terminated suffixes starting at 0-based a != b.
// The first offset where the raw symbols differ is also the first offset where
// the masked symbols differ, so the scan runs over raw words and the mask is
// consulted once at the mismatch.
inline Order compare_suffixes0(const BitSequence& x, std::size_t a, std::size_t b, const Mask& mask) noexcept {
  const std::size_t n = x.size();
  const std::size_t la = n - a;
  const std::size_t lb = n - b;
  const std::size_t common = la < lb ? la : lb;
  for (std::size_t t = 0; t < common; t += 64) {
    std::uint64_t diff = x.window(a + t) ^ x.window(b + t);
    const std::size_t rem = common - t;
    if (rem < 64) diff &= (std::uint64_t{1} << rem) - 1;
    if (diff != 0) {
      const std::size_t off = t + static_cast<std::size_t>(std::countr_zero(diff));
      const bool ya = x[a + off] != mask.flips[off];
      return ya ? Order::Greater : Order::Less;
    }
  }
  // One suffix is a prefix of the other; the shorter reaches its sentinel first.
  return la > lb ? Order::Less : Order::Greater;
}

}  // namespace detail

// Compares the suffixes at 1-based positions i and j under `mask`.
inline Order compare_suffixes(const BitSequence& x, std::size_t i, std::size_t j, const Mask& mask) {
  const std::size_t n = x.size();
  if (i < 1 || i > n || j < 1 || j > n) throw InvalidArgument("compare_suffixes: position out of range");
  if (mask.size() < n - (i < j ? i : j) + 1) throw InvalidArgument("compare_suffixes: mask shorter than suffix");
  if (i == j) return Order::Equal;
  return detail::compare_suffixes0(x, i - 1, j - 1, mask);
}

// 1-based start of the lexicographically first sentinel-terminated suffix of x
// under `mask`. One left-to-right pass keeping the running minimum.
inline std::size_t first_suffix_position(const BitSequence& x, const Mask& mask) {
  const std::size_t n = x.size();
  if (n == 0) throw InvalidArgument("first_suffix_position: empty sequence");
  if (mask.size() < n) throw InvalidArgument("first_suffix_position: mask shorter than sequence");
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (detail::compare_suffixes0(x, i, best, mask) == Order::Less) best = i;
  }
  return best + 1;
}

}  // namespace locsketch
