#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "monolab/bits.hpp"
#include "monolab/error.hpp"

using namespace monolab;

TEST(BitString, ConstructionAndCounts) {
  BitString x(70);
  EXPECT_EQ(x.size(), 70u);
  EXPECT_EQ(x.count_ones(), 0u);
  x.set(1, true);
  x.set(70, true);
  x.flip(65);
  EXPECT_EQ(x.count_ones(), 3u);
  EXPECT_EQ(x.count_zeros(), 67u);
  EXPECT_TRUE(x.test(65));
  EXPECT_FALSE(x.test(2));
  EXPECT_TRUE(BitString::ones(130).all_ones());
  EXPECT_EQ(BitString::ones(130).count_ones(), 130u);
}

TEST(BitString, RejectsEmptyAndOutOfRange) {
  EXPECT_THROW(BitString(0), InvalidArgument);
  BitString x(5);
  EXPECT_THROW((void)x.test(0), InvalidArgument);
  EXPECT_THROW((void)x.test(6), InvalidArgument);
  EXPECT_THROW(BitString::parse("01a"), InvalidArgument);
}

TEST(BitString, ParseRoundTrip) {
  const std::string s = "0110001011110000000011111";
  const BitString x = BitString::parse(s);
  EXPECT_EQ(x.to_string(), s);
  EXPECT_TRUE(x.test(2));
  EXPECT_FALSE(x.test(1));
}

TEST(BitString, ZeroPositionsAreOneBased) {
  const BitString x = BitString::parse("10110");
  EXPECT_EQ(x.zero_positions(), (std::vector<std::size_t>{2, 5}));
}

TEST(BitString, RestrictComplementDominance) {
  const BitString x = BitString::parse("10110");
  const std::vector<std::size_t> idx{5, 1, 3};
  EXPECT_EQ(x.restrict_to(idx).to_string(), "011");
  EXPECT_EQ(x.complement().to_string(), "01001");
  EXPECT_TRUE(x.dominated_by(BitString::parse("11110")));
  EXPECT_FALSE(x.dominated_by(BitString::parse("01111")));
  EXPECT_THROW((void)x.dominated_by(BitString(4)), InvalidArgument);
}

TEST(BitString, ComplementKeepsTailClear) {
  const BitString x(67);
  const BitString y = x.complement();
  EXPECT_EQ(y.count_ones(), 67u);
  EXPECT_TRUE(y.all_ones());
}

TEST(BitString, HammingAndDifferingOffsets) {
  const BitString x = BitString::parse("1010101");
  const BitString y = BitString::parse("0011100");
  EXPECT_EQ(hamming_distance(x, y), 3u);
  EXPECT_EQ(differing_offsets(x, y), (std::vector<std::uint32_t>{0, 3, 6}));
}

TEST(Mutation, ExtremeProbabilities) {
  SeededGenerator gen(1, "t");
  const BitString x = BitString::parse("1100101");
  EXPECT_EQ(mutate(x, 0.0, gen), x);
  EXPECT_EQ(mutate(x, 1.0, gen), x.complement());
  EXPECT_THROW(FlipSampler(5, -0.1), InvalidArgument);
  EXPECT_THROW(FlipSampler(5, 1.5), InvalidArgument);
}

TEST(Mutation, SinglePositionAlwaysFlipsAtProbabilityOne) {
  SeededGenerator gen(2, "t");
  const BitString x(1);
  for (int k = 0; k < 10; ++k) EXPECT_TRUE(mutate(x, 1.0, gen).test(1));
}

namespace {

// Empirical mean/variance of the flip count against the binomial law, plus
// uniformity of the flipped positions.
void check_flip_distribution(std::size_t n, double p, std::uint64_t seed) {
  FlipSampler sampler(n, p);
  SeededGenerator gen(seed, "flips");
  std::vector<std::uint32_t> flips;
  const int trials = 40000;
  double sum = 0, sum2 = 0;
  std::vector<double> hits(n, 0.0);
  for (int t = 0; t < trials; ++t) {
    sampler.sample(gen, flips);
    for (std::size_t k = 1; k < flips.size(); ++k) ASSERT_LT(flips[k - 1], flips[k]);
    for (const auto f : flips) {
      ASSERT_LT(f, n);
      hits[f] += 1;
    }
    sum += flips.size();
    sum2 += static_cast<double>(flips.size()) * flips.size();
  }
  const double mean = sum / trials;
  const double var = sum2 / trials - mean * mean;
  const double mu = n * p, sigma2 = n * p * (1 - p);
  EXPECT_NEAR(mean, mu, 5.0 * std::sqrt(sigma2 / trials)) << "n=" << n << " p=" << p;
  EXPECT_NEAR(var, sigma2, 0.06 * sigma2 + 1e-9) << "n=" << n << " p=" << p;
  // Per-position frequency.
  for (std::size_t k = 0; k < n; ++k) {
    EXPECT_NEAR(hits[k] / trials, p, 6.0 * std::sqrt(p * (1 - p) / trials)) << "position " << k;
  }
}

}  // namespace

TEST(FlipSampler, GeometricSkippingMatchesBinomial) { check_flip_distribution(200, 0.02, 5); }
TEST(FlipSampler, PerBitPathMatchesBinomial) { check_flip_distribution(60, 0.3, 6); }
TEST(FlipSampler, BoundaryOfMethodsMatchesBinomial) { check_flip_distribution(100, 0.1, 7); }

TEST(FlipSampler, Deterministic) {
  FlipSampler sampler(500, 0.02);
  SeededGenerator a(9, "m"), b(9, "m");
  std::vector<std::uint32_t> fa, fb;
  for (int k = 0; k < 100; ++k) {
    sampler.sample(a, fa);
    sampler.sample(b, fb);
    ASSERT_EQ(fa, fb);
  }
}

TEST(RandomBitString, RoughlyBalanced) {
  SeededGenerator gen(3, "init");
  const BitString x = random_bitstring(10000, gen);
  EXPECT_NEAR(static_cast<double>(x.count_ones()), 5000.0, 250.0);
  EXPECT_THROW((void)random_bitstring(0, gen), InvalidArgument);
}
