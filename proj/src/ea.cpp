#include "monolab/ea.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "monolab/error.hpp"

namespace monolab {

namespace {

double mutation_probability(const EaConfig& cfg, std::size_t n) {
  const double p = cfg.mutation_c / static_cast<double>(n);
  if (!(cfg.mutation_c >= 0.0) || p > 1.0) throw InvalidArgument("mutation rate c/n must lie in [0, 1]");
  return p;
}

bool path_changed(const std::optional<PathView>& a, const std::optional<PathView>& b) {
  if (!a || !b) return false;
  return a->tier != b->tier || a->level != b->level;
}

}  // namespace

bool jansen_accepts(const BitString& x, const BitString& y) {
  if (x.dominated_by(y)) return true;
  if (y.dominated_by(x)) return false;
  return y.count_ones() < x.count_ones();
}

StepResult ea_step(const BitString& x, const PseudoBooleanFunction& f, const EaConfig& cfg, SeededGenerator& gen) {
  if (x.size() != f.size()) throw InvalidArgument("ea_step: length mismatch");
  BitString y = mutate(x, mutation_probability(cfg, x.size()), gen);
  const bool accepted = cfg.acceptance == Acceptance::Fitness ? f.compare(y, x) >= 0 : jansen_accepts(x, y);
  if (!accepted) return StepResult{x, false};
  return StepResult{std::move(y), true};
}

RunResult ea_run(const PseudoBooleanFunction& f, const EaConfig& cfg, const RunOptions& opts) {
  const std::size_t n = f.size();
  const FlipSampler sampler(n, mutation_probability(cfg, n));
  SeededGenerator init_gen(cfg.seed, "init");
  SeededGenerator mutation_gen(cfg.seed, "mutation");

  BitString start = opts.initial ? *opts.initial : random_bitstring(n, init_gen);
  if (start.size() != n) throw InvalidArgument("ea_run: initial point has the wrong length");
  auto incumbent = f.make_incumbent(start);

  RunResult result;
  std::size_t ones = start.count_ones();
  std::optional<PathView> view = incumbent->path_view();
  if (view) {
    result.path = PathSummary{};
    result.path->jump_threshold = f.jump_threshold();
  }

  auto note_path = [&](std::uint64_t generation, const std::optional<PathView>& before) {
    if (!view || view->tier == 0) return;
    PathSummary& ps = *result.path;
    if (!ps.entry_generation) {
      ps.entry_generation = generation;
      ps.entry_level = view->level;
    } else if (before && before->tier >= 1 && view->level > before->level) {
      const std::size_t jump = view->level - before->level;
      ps.largest_jump = std::max(ps.largest_jump, jump);
      if (jump > ps.jump_threshold) ++ps.long_jumps;
    }
    ps.max_level = std::max(ps.max_level, view->level);
  };
  auto record = [&](std::uint64_t generation, bool scheduled) {
    if (opts.record_trace) result.trace.push_back(TraceRecord{generation, ones, view, scheduled});
  };

  note_path(0, std::nullopt);
  if (opts.on_accept) opts.on_accept(0, incumbent->point());
  const bool tracing = opts.record_trace && cfg.trace_stride > 0;
  if (tracing) record(0, true);

  std::vector<std::uint32_t> flips;
  BitString offspring = start;
  std::uint64_t generation = 0;
  while (ones < n && generation < cfg.budget) {
    ++generation;
    sampler.sample(mutation_gen, flips);
    if (!flips.empty()) {
      offspring = incumbent->point();
      std::ptrdiff_t gain = 0;
      for (const std::uint32_t k : flips) {
        gain += offspring.test_offset(k) ? -1 : 1;
        offspring.flip_offset(k);
      }
      bool accepted = false;
      if (cfg.acceptance == Acceptance::Fitness) {
        accepted = incumbent->offer(offspring, flips);
      } else if (jansen_accepts(incumbent->point(), offspring)) {
        incumbent->adopt(offspring, flips);
        accepted = true;
      }
      if (accepted) {
        ++result.accepted;
        ones = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(ones) + gain);
        const std::optional<PathView> before = view;
        view = incumbent->path_view();
        note_path(generation, before);
        if (opts.on_accept) opts.on_accept(generation, incumbent->point());
        if (opts.record_trace && path_changed(before, view) && (!tracing || generation % cfg.trace_stride != 0)) {
          record(generation, false);
        }
      }
    }
    if (tracing && generation % cfg.trace_stride == 0) {
      record(generation, true);
    }
  }

  result.hit_optimum = ones == n;
  result.generations = generation;
  result.final_point = incumbent->point();
  result.final_ones = ones;
  result.final_path = incumbent->path_view();
  if (tracing && (result.trace.empty() || result.trace.back().generation != generation)) {
    view = result.final_path;
    record(generation, false);
  }
  return result;
}

RunSummary summarize_runs(std::span<const RunResult> results) {
  if (results.empty()) throw InvalidArgument("summarize_runs: no runs");
  RunSummary s;
  s.runs = results.size();
  std::vector<double> times;
  for (const RunResult& r : results) {
    if (r.hit_optimum) times.push_back(static_cast<double>(r.generations));
  }
  s.successes = times.size();
  s.censored = s.runs - s.successes;
  s.success_fraction = static_cast<double>(s.successes) / static_cast<double>(s.runs);
  if (times.empty()) return s;
  // Sorted first so the sums do not depend on replicate order.
  std::sort(times.begin(), times.end());
  double sum = 0.0;
  for (const double t : times) sum += t;
  s.mean_generations = sum / static_cast<double>(times.size());
  if (times.size() > 1) {
    double ss = 0.0;
    for (const double t : times) ss += (t - s.mean_generations) * (t - s.mean_generations);
    const double sd = std::sqrt(ss / static_cast<double>(times.size() - 1));
    s.std_error = sd / std::sqrt(static_cast<double>(times.size()));
  }
  const std::size_t mid = times.size() / 2;
  s.median_generations = times.size() % 2 == 1 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
  return s;
}

void write_trace_csv(std::ostream& out, const RunResult& result) {
  out << "generation,ones,tier,level,zeros_in_window,zeros_outside_window\n";
  for (const TraceRecord& r : result.trace) {
    out << r.generation << ',' << r.ones << ',';
    if (r.path) {
      out << r.path->tier << ',' << r.path->level << ',' << r.path->zeros_in_window << ','
          << r.path->zeros_outside_window;
    } else {
      out << ",,,";
    }
    out << '\n';
  }
}

}  // namespace monolab
