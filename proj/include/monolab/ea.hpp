#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "monolab/bits.hpp"
#include "monolab/functions.hpp"
#include "monolab/random.hpp"

namespace monolab {

enum class Acceptance {
  Fitness,          ///< keep the offspring iff f(offspring) >= f(parent)
  JansenWorstCase,  ///< keep iff parent <= offspring, or incomparable with fewer 1-bits
};

struct EaConfig {
  double mutation_c = 1.0;  ///< mutation probability c/n
  Acceptance acceptance = Acceptance::Fitness;
  std::uint64_t budget = 0;  ///< maximum number of generations
  std::uint64_t trace_stride = 1000;  ///< 0 disables the strided trace
  std::uint64_t seed = 0;
};

struct TraceRecord {
  std::uint64_t generation = 0;
  std::size_t ones = 0;
  std::optional<PathView> path;
  bool scheduled = true;  ///< false for records forced by a tier or level change
};

/// Path progress of one run, filled for functions that expose a PathView.
struct PathSummary {
  std::optional<std::uint64_t> entry_generation;  ///< first generation with tier >= 1
  std::size_t entry_level = 0;
  std::size_t max_level = 0;
  std::size_t jump_threshold = 0;
  std::uint64_t long_jumps = 0;  ///< accepted steps raising the level by more than jump_threshold
  std::size_t largest_jump = 0;
};

struct RunResult {
  bool hit_optimum = false;
  std::uint64_t generations = 0;  ///< T: mutations performed
  std::uint64_t accepted = 0;     ///< accepted offspring that differ from the parent
  std::vector<TraceRecord> trace;
  BitString final_point;
  std::size_t final_ones = 0;
  std::optional<PathView> final_path;
  std::optional<PathSummary> path;
};

struct RunOptions {
  std::optional<BitString> initial;  ///< overrides the uniform random start
  /// Called with each newly adopted point (and the start point at generation 0).
  std::function<void(std::uint64_t generation, const BitString& x)> on_accept;
  bool record_trace = true;
};

struct StepResult {
  BitString next;
  bool accepted = false;
};

/// One generation: y = mut(x) with probability c/n, then selection.
[[nodiscard]] StepResult ea_step(const BitString& x, const PseudoBooleanFunction& f, const EaConfig& cfg,
                                 SeededGenerator& gen);

/// Jansen's acceptance rule for a proposed move x -> y.
[[nodiscard]] bool jansen_accepts(const BitString& x, const BitString& y);

/// The (1+1) EA from a uniform random start (or opts.initial) until 1^n is
/// reached or cfg.budget generations have been spent. Uses generators
/// (cfg.seed, "init") and (cfg.seed, "mutation").
[[nodiscard]] RunResult ea_run(const PseudoBooleanFunction& f, const EaConfig& cfg, const RunOptions& opts = {});

struct RunSummary {
  std::size_t runs = 0;
  std::size_t successes = 0;
  std::size_t censored = 0;  ///< budget exhausted
  double success_fraction = 0.0;
  /// Over successful runs only; zero when there are none.
  double mean_generations = 0.0;
  double median_generations = 0.0;
  double std_error = 0.0;
};

/// Rejects an empty list.
[[nodiscard]] RunSummary summarize_runs(std::span<const RunResult> results);

/// generation,ones,tier,level,zeros_in_window,zeros_outside_window; the path
/// columns stay empty for functions without path structure.
void write_trace_csv(std::ostream& out, const RunResult& result);

}  // namespace monolab
