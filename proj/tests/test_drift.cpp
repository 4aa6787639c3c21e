#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "monolab/drift.hpp"
#include "monolab/error.hpp"
#include "monolab/fpi.hpp"
#include "oracles.hpp"

using namespace monolab;

TEST(RunningMoments, MatchesTwoPassAndMerges) {
  SeededGenerator gen(1, "m");
  std::vector<double> xs;
  RunningMoments all, left, right;
  for (int k = 0; k < 1000; ++k) {
    const double v = gen.uniform01() * 10 - 3;
    xs.push_back(v);
    all.add(v);
    (k < 400 ? left : right).add(v);
  }
  double mean = 0;
  for (const double v : xs) mean += v;
  mean /= xs.size();
  double ss = 0;
  for (const double v : xs) ss += (v - mean) * (v - mean);
  EXPECT_NEAR(all.mean(), mean, 1e-12);
  EXPECT_NEAR(all.sample_variance(), ss / (xs.size() - 1), 1e-9);
  EXPECT_NEAR(all.std_error(), std::sqrt(ss / (xs.size() - 1) / xs.size()), 1e-12);
  left.merge(right);
  EXPECT_EQ(left.count(), 1000u);
  EXPECT_NEAR(left.mean(), mean, 1e-12);
  EXPECT_NEAR(left.sample_variance(), all.sample_variance(), 1e-9);
}

TEST(Bounds, ClosedForms) {
  EXPECT_NEAR(harmonic_drift_time_bound(100, 0.5), (std::log(100.0) + 1) * 100 * std::exp(0.5) / 0.25, 1e-9);
  EXPECT_NEAR(harmonic_drift_time_bound(100, 0.5), 3696.5, 0.5);
  EXPECT_THROW((void)harmonic_drift_time_bound(100, 1.0), InvalidArgument);
  EXPECT_THROW((void)harmonic_drift_time_bound(100, 0.0), InvalidArgument);
  EXPECT_NEAR(binval_drift_lower_bound(10.0 / 131.0, 0.0, 33.0), 0.001388, 1e-6);
  EXPECT_NEAR(binval_drift_lower_bound(0.4, 0.0, 10.0), (10 * 0.32 - 2) / 11.0, 1e-12);
  EXPECT_NEAR(outside_loss_bound(0.01, 5.0, 1000), 1.0553, 1e-4);
  EXPECT_THROW((void)outside_loss_bound(0.2, 5.0, 1000), InvalidArgument);
}

TEST(Bounds, OutsideLossLimit) {
  // c alpha = 1/3 and large n: 1 + e^{1/3} / 2.
  EXPECT_NEAR(outside_loss_bound(1.0 / 30.0, 10.0, 100000000), 1.0 + std::exp(1.0 / 3.0) / 2.0, 1e-6);
}

namespace {

// E[(k1 - k0) 1{accepted}] for the BINVAL window step: k0 of z zeros and k1
// of u - z ones flip; the heaviest flipped bit is uniform among flipped bits.
double exact_binval_drift(std::size_t u, std::size_t z, double p) {
  double e = 0;
  for (std::size_t k0 = 0; k0 <= z; ++k0) {
    for (std::size_t k1 = 0; k1 <= u - z; ++k1) {
      if (k0 == 0) continue;
      const double pr = oracle::binomial_pmf(z, k0, p) * oracle::binomial_pmf(u - z, k1, p);
      e += pr * static_cast<double>(k0) / static_cast<double>(k0 + k1) *
           (static_cast<double>(k1) - static_cast<double>(k0));
    }
  }
  return e;
}

// E[Z0 - Z1 | Z0 > Z1] with independent binomials.
double exact_outside_loss(std::size_t zeros, std::size_t ones, double p) {
  double num = 0, den = 0;
  for (std::size_t a = 0; a <= zeros; ++a) {
    for (std::size_t b = 0; b < a && b <= ones; ++b) {
      const double pr = oracle::binomial_pmf(zeros, a, p) * oracle::binomial_pmf(ones, b, p);
      num += pr * static_cast<double>(a - b);
      den += pr;
    }
  }
  return num / den;
}

}  // namespace

TEST(BinvalDrift, MatchesExactExpectation) {
  SeededGenerator gen(2, "binval");
  const BinvalProcessConfig cfg{30, 6, 5.0, 60};
  const DriftEstimate e = estimate_binval_drift(cfg, 200000, gen);
  const double exact = exact_binval_drift(30, 6, 5.0 / 60.0);
  EXPECT_TRUE(e.conclusive);
  EXPECT_EQ(e.samples, 200000u);
  EXPECT_NEAR(e.mean, exact, 4 * e.std_error);
}

TEST(BinvalDrift, RejectsBadConfig) {
  SeededGenerator gen(2, "binval");
  EXPECT_THROW((void)estimate_binval_drift({10, 11, 1.0, 20}, 10, gen), InvalidArgument);
  EXPECT_THROW((void)estimate_binval_drift({10, 1, 1.0, 20}, 0, gen), InvalidArgument);
}

TEST(OutsideLoss, MatchesExactConditionalMean) {
  SeededGenerator gen(3, "outside");
  const DriftEstimate e = estimate_outside_loss_counts(8, 20, 0.15, 400000, gen);
  ASSERT_TRUE(e.conclusive);
  EXPECT_NEAR(e.mean, exact_outside_loss(8, 20, 0.15), 4 * e.std_error);
  EXPECT_EQ(e.raw_samples, 400000u);
  EXPECT_LT(e.samples, e.raw_samples);
}

TEST(OutsideLoss, RejectsImpossibleConditioning) {
  SeededGenerator gen(3, "outside");
  EXPECT_THROW((void)estimate_outside_loss_counts(0, 20, 0.1, 1000, gen), InvalidArgument);
}

TEST(OutsideLoss, InconclusiveWhenEventNeverOccurs) {
  SeededGenerator gen(3, "outside");
  const DriftEstimate e = estimate_outside_loss_counts(1, 20, 1e-9, 1000, gen);
  EXPECT_FALSE(e.conclusive);
  EXPECT_EQ(e.samples, 0u);
}

TEST(SlidingDrift, SamplerProducesPathStates) {
  FPiParams p;
  p.n = 200;
  p.alpha = 0.02;
  p.beta = 0.4;
  p.gamma = 0.45;
  p.length = 2000;
  p.seed = 4;
  const FPiInstance inst = FPiInstance::build(p);
  const StateSampler sampler = synthetic_path_states(inst, 7, 8);
  SeededGenerator gen(5, "states");
  for (int t = 0; t < 50; ++t) {
    const BitString x = sampler(gen);
    const LevelView v = level_of(inst, x);
    ASSERT_FALSE(v.empty);
    EXPECT_EQ(v.zeros_outside, inst.alpha_threshold());
    EXPECT_GE(v.zeros_inside, 7u);
    EXPECT_LE(v.zeros_inside, 8u);
  }
  SeededGenerator g2(6, "sliding");
  const DriftEstimate e = estimate_sliding_drift(inst, 10.0, sampler, 20000, g2);
  EXPECT_EQ(e.raw_samples + e.rejected_states, 20000u);
  EXPECT_LE(e.samples, e.raw_samples);
}

TEST(HittingProbe, DeterministicDescent) {
  const TransitionSampler down = [](std::int64_t s, SeededGenerator&) { return s - 1; };
  SeededGenerator gen(1, "hit");
  HittingProbeConfig cfg{0, 3, 5, 100, 10, std::nullopt};
  const HittingReport r = hitting_time_probe(down, cfg, gen);
  EXPECT_EQ(r.hits, 10u);
  EXPECT_EQ(*r.time_median, 5u);
  cfg.budget = 4;
  EXPECT_EQ(hitting_time_probe(down, cfg, gen).hits, 0u);
  cfg.start = 2;
  EXPECT_THROW((void)hitting_time_probe(down, cfg, gen), InvalidArgument);
}

TEST(HittingProbe, GamblersRuinShortInterval) {
  const TransitionSampler walk = [](std::int64_t s, SeededGenerator& g) { return g.bernoulli(0.6) ? s + 1 : s - 1; };
  SeededGenerator gen(2, "hit");
  const HittingReport r = hitting_time_probe(walk, {0, 5, 5, 100000, 20000, 80}, gen);
  const double expected = std::pow(0.4 / 0.6, 5);
  EXPECT_NEAR(r.hit_fraction, expected, 4 * std::sqrt(expected * (1 - expected) / 20000));
  EXPECT_EQ(r.hits + r.escaped, r.trials);
}

TEST(EstimatesCsv, Layout) {
  DriftEstimate e;
  e.mean = 0.5;
  e.std_error = 0.01;
  e.samples = 10;
  e.acceptance_rate = 1;
  e.conclusive = true;
  DriftEstimate bad;
  std::ostringstream out;
  write_estimates_csv(out, {{"q", "u=1;v=2", e, 0.25, ">="}, {"r", "", bad, std::nullopt, ""}});
  EXPECT_EQ(out.str(),
            "quantity,parameters,mean,std_error,samples,acceptance_rate,bound_value,bound_relation\n"
            "q,u=1;v=2,0.5,0.01,10,1,0.25,>=\n"
            "r,,inconclusive,0,0,0,,\n");
}
