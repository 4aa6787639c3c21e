#include <gtest/gtest.h>

#include "monolab/ea.hpp"
#include "monolab/fpi.hpp"
#include "monolab/fpi_incumbent.hpp"

using namespace monolab;

namespace {

FPiInstance instance(std::size_t n, double alpha, double beta, std::uint64_t length, std::uint64_t seed,
                     std::size_t margin = 0) {
  FPiParams p;
  p.n = n;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = 0.45;
  p.length = length;
  p.seed = seed;
  p.end_margin = margin;
  return FPiInstance::build(p);
}

void check_range_structure() {
  detail::WindowMaxTree tree(std::vector<std::int32_t>{3, 1, 4, 1, 5, 9, 2, 6});
  EXPECT_EQ(tree.value(5), 9);
  tree.add(2, 5, 10);
  EXPECT_EQ(tree.value(2), 14);
  EXPECT_EQ(tree.value(6), 2);
  const auto hit = tree.rightmost_at_least(0, 7, 11);
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(hit->index, 5u);
  EXPECT_FALSE(tree.rightmost_at_least(6, 7, 7).has_value());
}

}  // namespace

TEST(WindowMaxTree, RangeAddAndSearch) { check_range_structure(); }

// Every single offer decision of the incremental incumbent must equal the
// comparison of fitness keys, across all three tiers.
TEST(FPiIncumbent, OfferMatchesKeyComparison) {
  struct Case {
    std::size_t n;
    double alpha, beta, c;
    std::uint64_t length;
    std::size_t margin;
  };
  const Case cases[] = {{60, 0.05, 0.2, 3.0, 300, 0},
                        {60, 0.05, 0.2, 8.0, 300, 4},
                        {100, 0.03, 0.4, 10.0, 800, 0},
                        {40, 0.1, 0.3, 1.0, 200, 0}};
  std::uint64_t seed = 0;
  for (const Case& cs : cases) {
    const FPiInstance inst = instance(cs.n, cs.alpha, cs.beta, cs.length, ++seed, cs.margin);
    const FPiFunction f(inst);
    SeededGenerator gen(seed, "offers");
    FlipSampler sampler(cs.n, cs.c / static_cast<double>(cs.n));
    std::vector<std::uint32_t> flips;
    for (int start = 0; start < 6; ++start) {
      BitString x = random_bitstring(cs.n, gen);
      FPiIncumbent inc(inst, x);
      for (int step = 0; step < 3000; ++step) {
        sampler.sample(gen, flips);
        BitString y = inc.point();
        for (const auto k : flips) y.flip_offset(k);
        const bool expect = fitness_key(inst, y) >= fitness_key(inst, inc.point());
        const BitString before = inc.point();
        const bool got = inc.offer(y, flips);
        ASSERT_EQ(got, expect) << "case n=" << cs.n << " step " << step;
        ASSERT_EQ(inc.point(), got ? y : before);
        ASSERT_EQ(inc.path_view(), path_view_of(inst, inc.point()));
      }
    }
  }
}

TEST(FPiIncumbent, AdoptResynchronizes) {
  const FPiInstance inst = instance(50, 0.06, 0.2, 200, 3);
  SeededGenerator gen(3, "adopt");
  FPiIncumbent inc(inst, random_bitstring(50, gen));
  for (int t = 0; t < 200; ++t) {
    const BitString y = random_bitstring(50, gen);
    const auto flips = differing_offsets(inc.point(), y);
    inc.adopt(y, flips);
    ASSERT_EQ(inc.point(), y);
    ASSERT_EQ(inc.path_view(), path_view_of(inst, y));
  }
}

TEST(FPiIncumbent, EaRunsMatchReferenceImplementation) {
  const FPiInstance inst = instance(120, 0.02, 0.4, 2000, 11);
  const FPiFunction fast(inst, true), ref(inst, false);
  for (const double c : {0.5, 1.0, 10.0}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      EaConfig cfg;
      cfg.mutation_c = c;
      cfg.budget = 20000;
      cfg.seed = seed;
      cfg.trace_stride = 500;
      const RunResult a = ea_run(fast, cfg), b = ea_run(ref, cfg);
      ASSERT_EQ(a.generations, b.generations);
      ASSERT_EQ(a.accepted, b.accepted);
      ASSERT_EQ(a.final_point, b.final_point);
      ASSERT_EQ(a.hit_optimum, b.hit_optimum);
      ASSERT_EQ(a.trace.size(), b.trace.size());
      for (std::size_t k = 0; k < a.trace.size(); ++k) {
        ASSERT_EQ(a.trace[k].generation, b.trace[k].generation);
        ASSERT_EQ(a.trace[k].path, b.trace[k].path);
      }
      ASSERT_EQ(a.path->max_level, b.path->max_level);
      ASSERT_EQ(a.path->long_jumps, b.path->long_jumps);
    }
  }
}
