// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "monolab/config.hpp"
#include "monolab/csv.hpp"
#include "monolab/drift.hpp"
#include "monolab/ea.hpp"
#include "monolab/error.hpp"
#include "monolab/experiment.hpp"
#include "monolab/fpi.hpp"
#include "monolab/functions.hpp"
#include "monolab/windows.hpp"
#include "oracles.hpp"

using namespace monolab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

FPiInstance small_instance(std::uint64_t seed, std::size_t n, std::uint64_t length, double alpha) {
  FPiParams p;
  p.n = n;
  p.alpha = alpha;
  p.beta = 0.25;
  p.gamma = 0.5;
  p.length = length;
  p.seed = seed;
  return FPiInstance::build(p);
}

// Aggregate rows of a scaling report keyed by n.
std::map<std::size_t, std::vector<std::string>> aggregates(const CsvReport& r) {
  std::map<std::size_t, std::vector<std::string>> out;
  for (const auto& row : r.rows) {
    if (row[0] == "aggregate") out[std::stoul(row[1])] = row;
  }
  return out;
}

// 1. Exhaustive single-bit monotonicity at n = 12.
Outcome criterion1() {
  const auto t0 = Clock::now();
  std::uint64_t pairs = 0;
  std::size_t violations = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const FPiFunction f(small_instance(seed, 12, 64, 0.1));
    SeededGenerator gen(seed, "monotone");
    const MonotoneVerdict v = check_monotone(f, MonotoneCheckMode::Exhaustive, 0, gen);
    pairs += v.pairs_checked;
    violations += v.passed ? 0 : 1;
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs <= 60.0, "20 instances, " + std::to_string(pairs) + " (x, j) pairs, " +
                                               std::to_string(violations) + " violating instances, " +
                                               fmt(secs, 3) + " s"};
}

// 2. Key order equals exact-value order on all pairs of 10^4 points per instance.
Outcome criterion2() {
  std::uint64_t pairs = 0, disagreements = 0, separation_failures = 0;
  std::set<int> tiers_seen;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const FPiInstance inst = small_instance(seed, 12, 64, 0.1);
    SeededGenerator gen(seed, "oracle-points");
    std::vector<FitnessKey> keys;
    std::vector<std::uint64_t> values;
    for (int t = 0; t < 10'000; ++t) {
      BitString x = random_bitstring(12, gen);
      if (t % 2 == 1) {
        // Bias half of the sample toward few zeros so every tier appears.
        for (std::size_t p = 1; p <= 12; ++p) {
          if (!x.test(p) && gen.bernoulli(0.7)) x.set(p, true);
        }
      }
      keys.push_back(fitness_key(inst, x));
      tiers_seen.insert(static_cast<int>(keys.back().tier));
      try {
        const BigNatural v = exact_value(inst, x);
        if (v != oracle::value(inst, x)) ++disagreements;
        values.push_back(v.convert_to<std::uint64_t>());
      } catch (const InvariantViolation&) {
        ++separation_failures;
        values.push_back(0);
      }
    }
    // Dense ranks of the keys make the all-pairs sweep cheap.
    std::vector<std::size_t> idx(keys.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    std::vector<std::uint32_t> rank(keys.size());
    std::uint32_t r = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (k > 0 && keys[idx[k - 1]] < keys[idx[k]]) ++r;
      rank[idx[k]] = r;
    }
    for (std::size_t a = 0; a < keys.size(); ++a) {
      for (std::size_t b = a + 1; b < keys.size(); ++b) {
        ++pairs;
        if ((rank[a] <=> rank[b]) != (values[a] <=> values[b])) ++disagreements;
      }
    }
  }
  const bool ok = disagreements == 0 && separation_failures == 0 && tiers_seen.size() == 3;
  return {ok, std::to_string(pairs) + " pairs over 20 instances, " + std::to_string(disagreements) +
                  " disagreements, " + std::to_string(separation_failures) + " separation failures, tiers seen " +
                  std::to_string(tiers_seen.size())};
}

// 3. Outside-zero count on the path, exhaustively and along EA runs.
Outcome criterion3() {
  const FPiInstance small = small_instance(3, 14, 80, 0.15);
  std::uint64_t checked = 0, violations = 0;
  for (std::uint64_t v = 0; v < (1U << 14); ++v) {
    const auto r = check_path_invariant(small, bitstring_from_value(14, v));
    checked += r.status == PathInvariantStatus::Checked;
    violations += r.status == PathInvariantStatus::Violation;
  }
  const std::uint64_t exhaustive_checked = checked;

  ExperimentConfig cfg = parse_config("preset=surrogate\nfunction=fpi\nseed=31\n");
  const FPiFunction f(FPiInstance::build(fpi_params_for(cfg, 200)));
  const double cs[] = {0.5, 1.0, 10.0};
  std::uint64_t run_states = 0;
  for (std::size_t r = 0; r < 1000; ++r) {
    EaConfig ea;
    ea.mutation_c = cs[r % 3];
    ea.budget = 10'000;
    ea.seed = replicate_seed(31, 200, r % 3, r);
    ea.trace_stride = 0;
    RunOptions opts;
    opts.record_trace = false;
    opts.on_accept = [&](std::uint64_t, const BitString& x) {
      const auto res = check_path_invariant(f.instance(), x);
      run_states += res.status == PathInvariantStatus::Checked;
      violations += res.status == PathInvariantStatus::Violation;
    };
    (void)ea_run(f, ea, opts);
  }
  const bool ok = violations == 0 && exhaustive_checked > 0 && run_states > 0;
  return {ok, "exhaustive n=14: " + std::to_string(exhaustive_checked) + " on-path points; 1000 runs at n=200: " +
                  std::to_string(run_states) + " on-path accepted states; " + std::to_string(violations) +
                  " violations"};
}

// 4. Exact pairwise window verification.
Outcome criterion4() {
  const auto t0 = Clock::now();
  const ConstructionParams params = parameters_with_length(2000, 0.05, 0.3, 2000);
  std::size_t passed = 0, worst = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SeededGenerator gen(seed, "construction");
    const WindowSequence seq = build_window_sequence(params, std::nullopt, gen);
    SeededGenerator vgen(seed, "verify");
    const WindowReport r = verify_window_properties(seq, 0.3, VerifyMode::Exact, 0, vgen);
    passed += r.passed() ? 1 : 0;
    worst = std::max(worst, r.max_overlap);
  }
  const double secs = seconds_since(t0);
  return {passed >= 95 && secs <= 120.0 && params.ell == 100,
          std::to_string(passed) + "/100 seeds pass, largest overlap " + std::to_string(worst) + " (limit " +
              fmt(0.3 * params.ell) + "), union bound " + fmt(collision_failure_bound(params, 2000)) + ", " +
              fmt(secs, 3) + " s"};
}

// 5. c = 0.5 runtime stability on ONEMAX and f_Pi.
Outcome criterion5() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (const char* family : {"onemax", "fpi"}) {
    ExperimentConfig cfg = parse_config(std::string("preset=surrogate\nfunction=") + family +
                                        "\nn=128,256,512,1024\nc=0.5\nreplicates=100\nseed=5\n");
    const auto agg = aggregates(run_scaling_study(cfg));
    double lo = 1e300, hi = 0;
    bool under_bound = true, all_done = true;
    for (const auto& [n, row] : agg) {
      const double ratio = std::stod(row[6]);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      under_bound = under_bound && std::stod(row[8]) <= harmonic_drift_time_bound(n, 0.5);
      all_done = all_done && row[12] == "0";
    }
    const bool fam_ok = agg.size() == 4 && hi / lo <= 2.0 && under_bound && all_done;
    ok = ok && fam_ok;
    detail += std::string(family) + ": max/min of mean(T)/(n ln n) = " + fmt(hi / lo) + ", all below bound " +
              (under_bound ? "yes" : "no") + ", uncensored " + (all_done ? "yes" : "no") + "; ";
  }
  const double secs = seconds_since(t0);
  return {ok && secs <= 600.0, detail + fmt(secs, 3) + " s"};
}

// 6. c = 1 growth exponent on f_Pi.
Outcome criterion6() {
  ExperimentConfig cfg =
      parse_config("preset=surrogate\nfunction=fpi\nn=128,256,512,1024\nc=1\nreplicates=100\nseed=6\n");
  const auto agg = aggregates(run_scaling_study(cfg));
  std::vector<double> xs, ys;
  bool all_done = true;
  for (const auto& [n, row] : agg) {
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(std::log(std::stod(row[8])));
    all_done = all_done && row[12] == "0";
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - mx) * (ys[k] - my);
    sxx += (xs[k] - mx) * (xs[k] - mx);
  }
  const double slope = sxy / sxx;
  return {agg.size() == 4 && all_done && slope <= 1.6,
          "least-squares slope " + fmt(slope) + ", uncensored " + (all_done ? "yes" : "no")};
}

// 7. Drift estimators against their bounds.
Outcome criterion7() {
  bool ok = true;
  std::string detail;
  const double bound_a = binval_drift_lower_bound(0.4, 0.0, 10.0);
  double worst_margin = 1e300;
  for (std::size_t z = 37; z <= 40; ++z) {  // integers in [u/11, u/10]
    SeededGenerator gen(70 + z, "criterion7a");
    const DriftEstimate e = estimate_binval_drift({400, z, 10.0, 1000}, 100'000, gen);
    const double margin = e.mean - (bound_a - 3 * e.std_error);
    worst_margin = std::min(worst_margin, margin);
    ok = ok && e.conclusive && margin >= 0;
    if (z == 37 || z == 40) detail += "(a) z0=" + std::to_string(z) + " mean " + fmt(e.mean) + " se " + fmt(e.std_error) + "; ";
  }
  detail += "(a) bound " + fmt(bound_a) + ", worst margin " + fmt(worst_margin) + "; ";

  SeededGenerator gb(71, "criterion7b");
  const DriftEstimate b = estimate_outside_loss(0.01, 0.4, 10.0, 1000, 1'000'000, gb);
  const double bound_b = outside_loss_bound(0.01, 10.0, 1000);
  const bool ok_b = b.conclusive && b.mean <= bound_b + 3 * b.std_error;
  ok = ok && ok_b;
  detail += "(b) mean " + fmt(b.mean) + " se " + fmt(b.std_error) + " over " + std::to_string(b.samples) +
            " conditioned samples, bound " + fmt(bound_b) + "; ";

  ExperimentConfig cfg = parse_config("preset=surrogate\nfunction=fpi\nseed=72\n");
  const FPiInstance inst = FPiInstance::build(fpi_params_for(cfg, 500));
  const std::size_t lo = static_cast<std::size_t>(std::ceil(0.4 * 500 / 11.0));
  const std::size_t hi = static_cast<std::size_t>(std::floor(0.4 * 500 / 10.0));
  SeededGenerator gc(72, "criterion7c");
  const DriftEstimate c = estimate_sliding_drift(inst, 10.0, synthetic_path_states(inst, lo, hi), 200'000, gc);
  const bool ok_c = c.conclusive && c.mean >= 3 * c.std_error;
  ok = ok && ok_c;
  detail += "(c) mean " + fmt(c.mean) + " se " + fmt(c.std_error) + " over " + std::to_string(c.samples) +
            " level-raising steps";
  return {ok, detail};
}

// 8. Stagnation in the hard regime, easy finish at c = 0.5.
Outcome criterion8() {
  const auto t0 = Clock::now();
  ExperimentConfig cfg = parse_config(
      "preset=surrogate\nkind=stagnation\nfunction=fpi\nn=500\nc=10,0.5\nreplicates=50\n"
      "budget=absolute:10000000\ntrace_stride=1000\nseed=8\n");
  const CsvReport r = run_stagnation_study(cfg);
  std::vector<std::string> hard, easy;
  std::uint64_t hard_jumps = 0;
  for (const auto& row : r.rows) {
    if (row[0] == "aggregate") (row[2] == "10" ? hard : easy) = row;
    if (row[0] == "run" && row[2] == "10") hard_jumps += std::stoull(row[10]);
  }
  const double window_count = std::stod(hard[9]);
  const double median_max = std::stod(hard[17]);
  const double easy_success = std::stod(easy[4]);
  const double ok_fraction = hard[14].empty() ? 0.0 : std::stod(hard[14]);
  const double entry_fraction = std::stod(hard[16]);
  const bool stagnates = median_max < window_count / 2;
  const bool ok = stagnates && easy_success >= 0.9 && hard_jumps == 0 && ok_fraction >= 0.95 && entry_fraction >= 0.95;
  const double secs = seconds_since(t0);
  return {ok && secs <= 1800.0,
          "median max level " + fmt(median_max, 6) + " vs L'/2 = " + fmt(window_count / 2, 6) + "; c=0.5 success " +
              fmt(easy_success) + "; long jumps " + std::to_string(hard_jumps) + "; window-ok strides " +
              fmt(ok_fraction) + "; entry level <= beta n " + fmt(entry_fraction) + "; " + fmt(secs, 4) + " s"};
}

// 9. Gambler's-ruin hitting probability.
Outcome criterion9() {
  const double p = 0.6;
  const TransitionSampler walk = [p](std::int64_t s, SeededGenerator& g) { return g.bernoulli(p) ? s + 1 : s - 1; };
  HittingProbeConfig hc;
  hc.a = 0;
  hc.b = 20;
  hc.start = 20;
  hc.budget = 1'000'000;
  hc.trials = 10'000;
  hc.escape_at = 120;  // return probability (2/3)^120 ~ 1e-21
  SeededGenerator gen(9, "criterion9");
  const HittingReport r = hitting_time_probe(walk, hc, gen);
  const double expected = std::pow(0.4 / 0.6, 20);
  const double ratio = r.hit_fraction / expected;
  return {ratio >= 0.5 && ratio <= 2.0, std::to_string(r.hits) + " hits in " + std::to_string(r.trials) +
                                            " trials, fraction " + fmt(r.hit_fraction) + " vs " + fmt(expected) +
                                            " (ratio " + fmt(ratio) + ")"};
}

// 10. Byte-identical reruns.
Outcome criterion10() {
  const auto dir = std::filesystem::temp_directory_path() / "monolab_acceptance";
  std::filesystem::create_directories(dir);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const char* configs[] = {
      "kind=scaling\nfunction=onemax\nn=64,128\nc=0.5,1\nreplicates=10\nseed=10\n",
      "preset=surrogate\nkind=scaling\nfunction=fpi\nn=128\nc=1\nreplicates=10\nseed=11\n",
      "preset=surrogate\nkind=stagnation\nfunction=fpi\nn=200\nc=10\nreplicates=4\nbudget=absolute:200000\nseed=12\n"};
  bool ok = true;
  std::size_t k = 0;
  for (const char* text : configs) {
    ExperimentConfig cfg = parse_config(text);
    cfg.output = "run_a.csv";
    (void)run_experiment(cfg, dir);
    cfg.output = "run_b.csv";
    cfg.threads = 2;
    (void)run_experiment(cfg, dir);
    const std::string a = slurp(dir / "run_a.csv"), b = slurp(dir / "run_b.csv");
    // Replaying the echoed configuration must also reproduce the file.
    ExperimentConfig replay = parse_config_echo(a);
    replay.output = "run_c.csv";
    (void)run_experiment(replay, dir);
    ok = ok && !a.empty() && a == b && a == slurp(dir / "run_c.csv");
    ++k;
  }
  std::filesystem::remove_all(dir);
  return {ok, std::to_string(k) + " experiments rerun and replayed from their echo"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                        criterion6, criterion7, criterion8, criterion9, criterion10};
  std::set<int> selected;
  for (int a = 1; a < argc; ++a) selected.insert(std::atoi(argv[a]));
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
