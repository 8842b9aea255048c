#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "locsketch/error.hpp"
#include "locsketch/rng.hpp"

namespace locsketch {

// A finite string over {0,1}, stored packed 64 symbols per word with symbol i
// at bit (i % 64) of word (i / 64). Indexing through operator[] is 0-based;
// positions handed across the public API elsewhere are 1-based.
//
// Two spare zero words trail the payload so that window() can read past the
// end without branching.
class BitSequence {
 public:
  BitSequence() : words_(2, 0) {}

  explicit BitSequence(std::size_t n) : words_(word_count(n) + 2, 0), size_(n) {}

  // Parses the sequence text format: one line of '0'/'1' with an optional
  // trailing '\n'. Any other byte is rejected with its offset.
  static BitSequence parse(std::string_view text) {
    if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
    if (text.empty()) throw ParseError("sequence", 0, "empty sequence");
    BitSequence out(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      const char c = text[i];
      if (c != '0' && c != '1') {
        throw ParseError("sequence", i, "invalid character at offset " + std::to_string(i));
      }
      if (c == '1') out.set(i, true);
    }
    return out;
  }

  // n independent fair bits drawn from stream (seed, stream).
  static BitSequence random(std::size_t n, std::uint64_t seed, std::uint64_t stream = 0) {
    BitSequence out(n);
    CounterRng rng(seed, stream);
    const std::size_t full = word_count(n);
    for (std::size_t w = 0; w < full; ++w) out.words_[w] = rng.next();
    out.clear_tail();
    return out;
  }

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool operator[](std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }

  void set(std::size_t i, bool bit) noexcept {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (bit) {
      words_[i >> 6] |= m;
    } else {
      words_[i >> 6] &= ~m;
    }
  }

  // Symbols [pos, pos + 64) packed LSB-first; symbols past the end read as 0.
  // Requires pos <= size().
  std::uint64_t window(std::size_t pos) const noexcept {
    const std::size_t w = pos >> 6;
    const unsigned sh = pos & 63;
    if (sh == 0) return words_[w];
    return (words_[w] >> sh) | (words_[w + 1] << (64 - sh));
  }

  // Copy of symbols [pos, pos + len).
  BitSequence slice(std::size_t pos, std::size_t len) const {
    BitSequence out(len);
    for (std::size_t t = 0; t < len; t += 64) out.words_[t >> 6] = window(pos + t);
    out.clear_tail();
    return out;
  }

  BitSequence complement() const {
    BitSequence out(*this);
    for (std::size_t w = 0; w < word_count(size_); ++w) out.words_[w] = ~out.words_[w];
    out.clear_tail();
    return out;
  }

  std::size_t popcount() const noexcept {
    std::size_t c = 0;
    for (std::size_t w = 0; w < word_count(size_); ++w) c += std::popcount(words_[w]);
    return c;
  }

  std::size_t hamming_distance(const BitSequence& other) const {
    if (other.size_ != size_) throw InvalidArgument("hamming_distance: length mismatch");
    std::size_t c = 0;
    for (std::size_t w = 0; w < word_count(size_); ++w) c += std::popcount(words_[w] ^ other.words_[w]);
    return c;
  }

  std::string to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
      if ((*this)[i]) s[i] = '1';
    }
    return s;
  }

  friend bool operator==(const BitSequence& a, const BitSequence& b) {
    return a.size_ == b.size_ && a.words_ == b.words_;
  }

  // Raw packed words (excluding the spare padding).
  std::vector<std::uint64_t> words() const {
    return {words_.begin(), words_.begin() + static_cast<std::ptrdiff_t>(word_count(size_))};
  }

  void flip_word(std::size_t w, std::uint64_t mask) noexcept { words_[w] ^= mask; }

  void clear_tail() noexcept {
    const std::size_t full = word_count(size_);
    if (size_ & 63) words_[full - 1] &= (std::uint64_t{1} << (size_ & 63)) - 1;
    for (std::size_t w = full; w < words_.size(); ++w) words_[w] = 0;
  }

  static constexpr std::size_t word_count(std::size_t n) noexcept { return (n + 63) / 64; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

}  // namespace locsketch
