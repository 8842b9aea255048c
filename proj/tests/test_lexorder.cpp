#include <vector>

#include <gtest/gtest.h>

#include "locsketch/lexorder.hpp"
#include "locsketch/model.hpp"
#include "oracles.hpp"

using namespace locsketch;

namespace {

Mask mask_from(const std::string& bits) { return Mask{BitSequence::parse(bits)}; }

}  // namespace

TEST(MakeOrderings, Deterministic) {
  const auto a = make_orderings(1234, 4, 8);
  const auto b = make_orderings(1234, 4, 8);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.masks.size(), 4U);
  for (const auto& m : a.masks) EXPECT_EQ(m.size(), 8U);
}

TEST(MakeOrderings, RejectsZeroSizes) {
  EXPECT_THROW(make_orderings(1, 0, 8), InvalidArgument);
  EXPECT_THROW(make_orderings(1, 4, 0), InvalidArgument);
}

TEST(MakeOrderings, MasksDifferAcrossStreams) {
  // Pr[mask0 == mask1] = 2^-8 per seed; 99 of 100 must differ.
  int distinct = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto set = make_orderings(seed, 2, 8);
    distinct += set.masks[0] != set.masks[1];
  }
  EXPECT_GE(distinct, 99);
}

TEST(MakeOrderings, MaskBitsAreBalanced) {
  const auto set = make_orderings(5, 1, 100000);
  EXPECT_NEAR(static_cast<double>(set.masks[0].flips.popcount()) / 100000.0, 0.5, 0.01);
}

TEST(CompareSuffixes, IdentityMaskExamples) {
  const BitSequence x = BitSequence::parse("0001");
  const Mask id = Mask::identity(4);
  EXPECT_EQ(compare_suffixes(x, 1, 2, id), Order::Less);
  EXPECT_EQ(compare_suffixes(x, 2, 1, id), Order::Greater);
  for (std::size_t i = 1; i <= 4; ++i) EXPECT_EQ(compare_suffixes(x, i, i, id), Order::Equal);
}

TEST(CompareSuffixes, FlippedOffsetReversesSymbolOrder) {
  const BitSequence x = BitSequence::parse("10");
  EXPECT_EQ(compare_suffixes(x, 1, 2, mask_from("10")), Order::Less);
  EXPECT_EQ(compare_suffixes(x, 1, 2, Mask::identity(2)), Order::Greater);
}

TEST(CompareSuffixes, RejectsOutOfRange) {
  const BitSequence x = BitSequence::parse("0101");
  const Mask id = Mask::identity(4);
  EXPECT_THROW(compare_suffixes(x, 0, 1, id), InvalidArgument);
  EXPECT_THROW(compare_suffixes(x, 1, 5, id), InvalidArgument);
}

TEST(FirstSuffix, Examples) {
  EXPECT_EQ(first_suffix_position(BitSequence::parse("1110"), Mask::identity(4)), 4U);
  EXPECT_EQ(first_suffix_position(BitSequence::parse("0001"), Mask::identity(4)), 1U);
  for (std::size_t n : {1U, 2U, 63U, 64U, 65U, 300U}) {
    EXPECT_EQ(first_suffix_position(BitSequence(n), Mask::identity(n)), 1U) << n;
  }
}

TEST(FirstSuffix, RejectsEmptyAndShortMask) {
  EXPECT_THROW(first_suffix_position(BitSequence(), Mask::identity(0)), InvalidArgument);
  EXPECT_THROW(first_suffix_position(BitSequence(10), Mask::identity(9)), InvalidArgument);
}

TEST(FirstSuffix, MatchesFullSortOracle) {
  CounterRng rng(2024, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.next() % 64;
    const BitSequence x = BitSequence::random(n, rng.next());
    const Mask mask = Mask::random(rng.next(), 0, n);
    ASSERT_EQ(first_suffix_position(x, mask), oracle::first_suffix_by_sort(x.to_string(), mask.flips.to_string()))
        << x.to_string() << " / " << mask.flips.to_string();
  }
}

TEST(FirstSuffix, MatchesOracleOnLowEntropyInputs) {
  // Long runs stress the multi-word common-prefix path.
  CounterRng rng(7, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.next() % 200;
    BitSequence x(n);
    const std::size_t period = 1 + rng.next() % 5;
    for (std::size_t i = 0; i < n; ++i) x.set(i, (i % period) == 0 || (rng.next() % 97 == 0));
    const Mask mask = (trial % 2) ? Mask::identity(n) : Mask::random(rng.next(), 0, n);
    ASSERT_EQ(first_suffix_position(x, mask), oracle::first_suffix_by_sort(x.to_string(), mask.flips.to_string()));
  }
}

TEST(CompareSuffixes, AgreesWithTransformThenCompare) {
  CounterRng rng(99, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.next() % 90;
    const BitSequence x = BitSequence::random(n, rng.next());
    const Mask mask = Mask::random(rng.next(), 0, n);
    const std::string xs = x.to_string();
    const std::string ms = mask.flips.to_string();
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= n; ++j) {
        ASSERT_EQ(compare_suffixes(x, i, j, mask), oracle::compare_by_transform(xs, i, j, ms));
      }
    }
  }
}

TEST(CompareSuffixes, IsStrictTotalOrder) {
  CounterRng rng(31337, 0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.next() % 24;
    const BitSequence x = BitSequence::random(n, rng.next());
    const Mask mask = Mask::random(rng.next(), 0, n);
    auto less = [&](std::size_t i, std::size_t j) { return compare_suffixes(x, i, j, mask) == Order::Less; };
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= n; ++j) {
        if (i != j) {
          ASSERT_NE(less(i, j), less(j, i));
        }
        for (std::size_t k = 1; k <= n; ++k) {
          if (less(i, j) && less(j, k)) {
            ASSERT_TRUE(less(i, k));
          }
        }
      }
    }
  }
}

TEST(FirstSuffix, LocationIsUniform) {
  // Chi-square goodness of fit of m/n over 20 equal bins; the 0.01 critical
  // value for 19 degrees of freedom is 36.191.
  constexpr std::size_t n = 4096;
  constexpr int trials = 10000;
  constexpr int bins = 20;
  std::vector<int> counts(bins, 0);
  for (int t = 0; t < trials; ++t) {
    const BitSequence x = BitSequence::random(n, derive_seed(55, t, 0));
    const Mask mask = Mask::random(derive_seed(55, t, 1), 0, n);
    const std::size_t m = first_suffix_position(x, mask);
    ++counts[(m - 1) * bins / n];
  }
  const double expected = static_cast<double>(trials) / bins;
  double chi2 = 0.0;
  for (const int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 36.191);
}
