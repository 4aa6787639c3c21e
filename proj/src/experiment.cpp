#include "monolab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>

#include "monolab/drift.hpp"
#include "monolab/ea.hpp"
#include "monolab/error.hpp"
#include "monolab/random.hpp"
#include "monolab/windows.hpp"

namespace monolab {

namespace {

// Fills results[i] = job(i) using up to `threads` workers. The output is
// independent of the thread count.
template <typename T, typename Job>
std::vector<T> parallel_map(std::size_t count, std::size_t threads, Job job) {
  std::vector<T> results(count);
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) results[i] = job(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          results[i] = job(i);
        } catch (...) {
          const std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return results;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.replicates == 0) throw ConfigError("config: replicates must be positive");
  for (const std::size_t n : cfg.n_values) {
    if (n < 2) throw ConfigError("config: every n must be at least 2");
  }
  for (const double c : cfg.c_values) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("config: every c must be positive");
  }
}

std::vector<std::string> echo_comments(const ExperimentConfig& cfg) {
  std::vector<std::string> out{"tool_version=" + std::string(kToolVersion)};
  for (std::string& line : cfg.echo()) out.push_back(std::move(line));
  return out;
}

EaConfig ea_config(const ExperimentConfig& cfg, std::size_t n, double c, std::size_t ci, std::size_t r) {
  EaConfig ea;
  ea.mutation_c = c;
  ea.budget = cfg.budget.budget(n, c);
  ea.trace_stride = cfg.trace_stride;
  ea.seed = replicate_seed(cfg.seed, n, ci, r);
  return ea;
}

// Reference scale for the budget warning: the drift bound for c < 1 and
// n^{3/2} otherwise.
double reference_time(std::size_t n, double c) {
  if (c < 1.0) return harmonic_drift_time_bound(n, c);
  const auto nn = static_cast<double>(n);
  return nn * std::sqrt(nn);
}

std::string str(std::uint64_t v) { return std::to_string(v); }

}  // namespace

std::uint64_t instance_seed(std::uint64_t master, std::size_t n) {
  return mix64(mix64(master ^ hash_label("instance")) + n);
}

std::uint64_t replicate_seed(std::uint64_t master, std::size_t n, std::size_t c_index, std::size_t replicate) {
  std::uint64_t h = mix64(master ^ hash_label("replicate"));
  h = mix64(h + n);
  h = mix64(h + c_index);
  return mix64(h + replicate);
}

FPiParams fpi_params_for(const ExperimentConfig& cfg, std::size_t n) {
  FPiParams p;
  p.n = n;
  p.alpha = cfg.alpha;
  p.beta = cfg.beta;
  p.gamma = cfg.gamma;
  p.end_margin = cfg.end_margin;
  p.seed = instance_seed(cfg.seed, n);
  const auto ell = static_cast<std::uint64_t>(std::floor(cfg.beta * static_cast<double>(n)));
  std::uint64_t length = cfg.length;
  if (length == 0) length = theoretical_parameters(n, cfg.beta, cfg.gamma).length;
  p.length = std::max(length, ell);
  return p;
}

std::unique_ptr<PseudoBooleanFunction> make_study_function(const ExperimentConfig& cfg, std::size_t n) {
  if (cfg.function == FunctionFamily::OneMax) return std::make_unique<OneMax>(n);
  try {
    return std::make_unique<FPiFunction>(FPiInstance::build(fpi_params_for(cfg, n)));
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config: cannot build f_Pi at n=") + std::to_string(n) + ": " + e.what());
  }
}

CsvReport run_scaling_study(const ExperimentConfig& cfg) {
  validate(cfg);
  CsvReport report;
  report.header = {"row_type", "n",      "c",       "replicate",        "T",
                   "hit_optimum", "T_over_nlogn", "T_over_n15", "mean_T", "se_T",
                   "median_T",    "success_fraction", "censored_fraction", "harmonic_bound", "budget"};
  std::vector<std::size_t> ns = cfg.n_values;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  for (const std::size_t n : ns) {
    const auto f = make_study_function(cfg, n);
    const auto nn = static_cast<double>(n);
    const double nlogn = nn * std::log(nn);
    const double n15 = nn * std::sqrt(nn);
    for (std::size_t ci = 0; ci < cfg.c_values.size(); ++ci) {
      const double c = cfg.c_values[ci];
      const std::uint64_t budget = cfg.budget.budget(n, c);
      const std::string harmonic = c < 1.0 ? format_real(harmonic_drift_time_bound(n, c)) : "";
      if (static_cast<double>(budget) < 10.0 * reference_time(n, c)) {
        report.rows.push_back({"warning", str(n), format_real(c), "", "", "", "", "", "", "", "", "", "", harmonic,
                               str(budget)});
      }
      const auto results = parallel_map<RunResult>(cfg.replicates, cfg.threads, [&](std::size_t r) {
        RunOptions opts;
        opts.record_trace = false;
        RunResult res = ea_run(*f, ea_config(cfg, n, c, ci, r), opts);
        res.final_point = BitString();
        return res;
      });
      for (std::size_t r = 0; r < results.size(); ++r) {
        const auto T = static_cast<double>(results[r].generations);
        report.rows.push_back({"run", str(n), format_real(c), str(r), str(results[r].generations),
                               results[r].hit_optimum ? "1" : "0", format_real(T / nlogn), format_real(T / n15), "",
                               "", "", "", "", harmonic, str(budget)});
      }
      const RunSummary s = summarize_runs(results);
      const bool any = s.successes > 0;
      report.rows.push_back({"aggregate", str(n), format_real(c), "", "", str(s.successes),
                             any ? format_real(s.mean_generations / nlogn) : "",
                             any ? format_real(s.mean_generations / n15) : "",
                             any ? format_real(s.mean_generations) : "", any ? format_real(s.std_error) : "",
                             any ? format_real(s.median_generations) : "", format_real(s.success_fraction),
                             format_real(static_cast<double>(s.censored) / static_cast<double>(s.runs)), harmonic,
                             str(budget)});
    }
  }
  report.comments = echo_comments(cfg);
  return report;
}

CsvReport run_stagnation_study(const ExperimentConfig& cfg, CsvReport* trace) {
  validate(cfg);
  if (cfg.function != FunctionFamily::FPi) throw ConfigError("config: stagnation studies need function=fpi");
  CsvReport report;
  report.header = {"row_type",         "n",
                   "c",                "replicate",
                   "hit_optimum",      "T",
                   "entry_generation", "entry_level",
                   "max_level",        "window_count",
                   "long_jumps",       "largest_jump",
                   "strides_on_path",  "strides_window_ok",
                   "window_ok_fraction", "min_window_zeros",
                   "entry_level_within_beta_n_fraction", "median_max_level"};
  if (trace) {
    trace->header = {"n", "c", "replicate", "generation", "ones", "tier", "level", "zeros_in_window",
                     "zeros_outside_window"};
    trace->rows.clear();
  }
  std::vector<std::size_t> ns = cfg.n_values;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  struct Replicate {
    RunResult result;
    std::uint64_t on_path = 0;
    std::uint64_t window_ok = 0;
    std::optional<std::size_t> min_zeros;
  };

  for (const std::size_t n : ns) {
    const auto f = make_study_function(cfg, n);
    const auto& inst = static_cast<const FPiFunction&>(*f).instance();
    const std::size_t window_count = inst.window_count();
    const double ok_threshold = cfg.beta * static_cast<double>(n) / 11.0;
    for (std::size_t ci = 0; ci < cfg.c_values.size(); ++ci) {
      const double c = cfg.c_values[ci];
      auto reps = parallel_map<Replicate>(cfg.replicates, cfg.threads, [&](std::size_t r) {
        Replicate rep;
        rep.result = ea_run(*f, ea_config(cfg, n, c, ci, r));
        rep.result.final_point = BitString();
        for (const TraceRecord& rec : rep.result.trace) {
          if (!rec.scheduled || !rec.path || rec.path->tier != 1) continue;
          ++rep.on_path;
          const std::size_t z = rec.path->zeros_in_window;
          if (static_cast<double>(z) >= ok_threshold) ++rep.window_ok;
          rep.min_zeros = rep.min_zeros ? std::min(*rep.min_zeros, z) : z;
        }
        return rep;
      });

      std::vector<double> max_levels;
      std::size_t successes = 0;
      std::size_t early_entries = 0;
      std::uint64_t total_jumps = 0;
      std::uint64_t pooled_path = 0;
      std::uint64_t pooled_ok = 0;
      std::optional<std::size_t> pooled_min;
      for (std::size_t r = 0; r < reps.size(); ++r) {
        const Replicate& rep = reps[r];
        const RunResult& res = rep.result;
        const PathSummary ps = res.path.value_or(PathSummary{});
        max_levels.push_back(static_cast<double>(ps.max_level));
        successes += res.hit_optimum ? 1 : 0;
        if (ps.entry_generation && static_cast<double>(ps.entry_level) <= cfg.beta * static_cast<double>(n)) {
          ++early_entries;
        }
        total_jumps += ps.long_jumps;
        pooled_path += rep.on_path;
        pooled_ok += rep.window_ok;
        if (rep.min_zeros) pooled_min = pooled_min ? std::min(*pooled_min, *rep.min_zeros) : *rep.min_zeros;
        report.rows.push_back(
            {"run", str(n), format_real(c), str(r), res.hit_optimum ? "1" : "0", str(res.generations),
             ps.entry_generation ? str(*ps.entry_generation) : "", ps.entry_generation ? str(ps.entry_level) : "",
             str(ps.max_level), str(window_count), str(ps.long_jumps), str(ps.largest_jump), str(rep.on_path),
             str(rep.window_ok),
             rep.on_path ? format_real(static_cast<double>(rep.window_ok) / static_cast<double>(rep.on_path)) : "",
             rep.min_zeros ? str(*rep.min_zeros) : "", "", ""});
        if (trace) {
          for (const TraceRecord& rec : res.trace) {
            if (!rec.scheduled) continue;
            trace->rows.push_back({str(n), format_real(c), str(r), str(rec.generation), str(rec.ones),
                                   rec.path ? str(rec.path->tier) : "", rec.path ? str(rec.path->level) : "",
                                   rec.path ? str(rec.path->zeros_in_window) : "",
                                   rec.path ? str(rec.path->zeros_outside_window) : ""});
          }
        }
      }
      std::sort(max_levels.begin(), max_levels.end());
      const std::size_t m = max_levels.size() / 2;
      const double median =
          max_levels.size() % 2 == 1 ? max_levels[m] : 0.5 * (max_levels[m - 1] + max_levels[m]);
      const auto R = static_cast<double>(reps.size());
      report.rows.push_back(
          {"aggregate", str(n), format_real(c), "", format_real(static_cast<double>(successes) / R), "", "", "", "",
           str(window_count), str(total_jumps), "", str(pooled_path), str(pooled_ok),
           pooled_path ? format_real(static_cast<double>(pooled_ok) / static_cast<double>(pooled_path)) : "",
           pooled_min ? str(*pooled_min) : "", format_real(static_cast<double>(early_entries) / R),
           format_real(median)});
    }
  }
  report.comments = echo_comments(cfg);
  if (trace) trace->comments = report.comments;
  return report;
}

CsvReport run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  if (cfg.output.empty()) throw ConfigError("config: output is not set");
  CsvReport report;
  if (cfg.kind == ExperimentKind::Scaling) {
    report = run_scaling_study(cfg);
  } else {
    CsvReport trace;
    report = run_stagnation_study(cfg, cfg.trace_output.empty() ? nullptr : &trace);
    if (!cfg.trace_output.empty()) emit_csv(trace, out_dir / cfg.trace_output);
  }
  emit_csv(report, out_dir / cfg.output);
  return report;
}

std::filesystem::path output_directory() {
  if (const char* dir = std::getenv("MONOLAB_OUTPUT_DIR"); dir != nullptr && *dir != '\0') return dir;
  return std::filesystem::current_path();
}

}  // namespace monolab
