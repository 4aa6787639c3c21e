#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
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

namespace {

using namespace monolab;

enum ExitCode { kOk = 0, kInvariant = 1, kConfig = 2, kIo = 3 };

struct ConfigSource {
  std::string file;
  std::vector<std::string> overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", file, "key=value config file")->check(CLI::ExistingFile);
    cmd->add_option("--set", overrides, "override one key, e.g. --set n=500")->take_all();
  }

  [[nodiscard]] ExperimentConfig load() const {
    ExperimentConfig cfg;
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw IoError("cannot read " + file);
      std::stringstream ss;
      ss << in.rdbuf();
      cfg = parse_config(ss.str());
    }
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
  }
};

std::filesystem::path resolve(const std::string& p) { return output_directory() / p; }

FPiInstance instance_from(const ExperimentConfig& cfg) {
  return FPiInstance::build(fpi_params_for(cfg, cfg.n_values.front()));
}

std::unique_ptr<PseudoBooleanFunction> function_from(const ExperimentConfig& cfg, const std::string& family) {
  const std::size_t n = cfg.n_values.front();
  if (family == "binval") return std::make_unique<BinVal>(n);
  if (family == "onemax") return std::make_unique<OneMax>(n);
  if (family == "fpi") return std::make_unique<FPiFunction>(instance_from(cfg));
  throw ConfigError("unknown function family '" + family + "'");
}

void print_kv(const std::string& k, const std::string& v) { std::cout << k << '=' << v << '\n'; }

int cmd_construct(const ConfigSource& src, const std::string& out, const std::string& descriptor) {
  const ExperimentConfig cfg = src.load();
  const FPiParams params = fpi_params_for(cfg, cfg.n_values.front());
  const FPiInstance inst = FPiInstance::build(params);
  save_window_sequence(resolve(out), inst.sequence());
  if (!descriptor.empty()) {
    const auto desc = resolve(descriptor);
    const auto window = std::filesystem::relative(resolve(out), desc.parent_path());
    save_instance_descriptor(desc, params, window.string());
  }
  const ConstructionParams& cp = inst.construction();
  print_kv("n", std::to_string(cp.n));
  print_kv("ell", std::to_string(cp.ell));
  print_kv("length", std::to_string(cp.length));
  print_kv("window_count", std::to_string(cp.window_count));
  print_kv("rho", format_real(cp.rho));
  print_kv("overlap_regime", cp.overlap_regime() ? "1" : "0");
  return kOk;
}

int cmd_verify(const ConfigSource& src, const std::string& in, const std::string& mode, std::uint64_t pairs) {
  const ExperimentConfig cfg = src.load();
  const WindowSequence seq = in.empty() ? instance_from(cfg).sequence() : load_window_sequence(in);
  SeededGenerator gen(cfg.seed, "verify");
  const VerifyMode vm = mode == "sampled" ? VerifyMode::Sampled : VerifyMode::Exact;
  if (vm == VerifyMode::Exact && seq.window_count() > kMaxExactVerifyWindows) {
    throw ConfigError("exact verification needs at most " + std::to_string(kMaxExactVerifyWindows) +
                      " windows; use --mode sampled");
  }
  const WindowReport r = verify_window_properties(seq, cfg.gamma, vm, pairs, gen);
  print_kv("distinct_windows", r.distinct_windows ? "1" : "0");
  print_kv("overlap_bounded", r.overlap_bounded ? "1" : "0");
  print_kv("max_overlap", std::to_string(r.max_overlap));
  print_kv("overlap_limit", format_real(r.overlap_limit));
  print_kv("pairs_checked", std::to_string(r.pairs_checked));
  if (r.worst_pair) print_kv("worst_pair", std::to_string(r.worst_pair->i) + ";" + std::to_string(r.worst_pair->j));
  if (r.repeated_window) print_kv("repeated_window", std::to_string(*r.repeated_window));
  print_kv("passed", r.passed() ? "1" : "0");
  return r.passed() ? kOk : kInvariant;
}

int cmd_check_monotone(const ConfigSource& src, const std::string& family, const std::string& mode,
                       std::uint64_t samples) {
  const ExperimentConfig cfg = src.load();
  const auto f = function_from(cfg, family);
  SeededGenerator gen(cfg.seed, "check-monotone");
  const MonotoneCheckMode m = mode == "sampled" ? MonotoneCheckMode::Sampled : MonotoneCheckMode::Exhaustive;
  const MonotoneVerdict v = check_monotone(*f, m, samples, gen);
  print_kv("function", f->name());
  print_kv("pairs_checked", std::to_string(v.pairs_checked));
  if (v.counterexample) {
    print_kv("counterexample", v.counterexample->x.to_string());
    print_kv("position", std::to_string(v.counterexample->position));
  }
  print_kv("passed", v.passed ? "1" : "0");
  return v.passed ? kOk : kInvariant;
}

int cmd_run(const ConfigSource& src, std::size_t replicate, const std::string& out) {
  const ExperimentConfig cfg = src.load();
  const std::size_t n = cfg.n_values.front();
  const double c = cfg.c_values.front();
  const auto f = make_study_function(cfg, n);
  EaConfig ea;
  ea.mutation_c = c;
  ea.budget = cfg.budget.budget(n, c);
  ea.trace_stride = cfg.trace_stride;
  ea.seed = replicate_seed(cfg.seed, n, 0, replicate);
  const RunResult r = ea_run(*f, ea);
  print_kv("hit_optimum", r.hit_optimum ? "1" : "0");
  print_kv("generations", std::to_string(r.generations));
  print_kv("final_ones", std::to_string(r.final_ones));
  if (r.path) {
    print_kv("max_level", std::to_string(r.path->max_level));
    print_kv("long_jumps", std::to_string(r.path->long_jumps));
  }
  const std::string target = out.empty() ? cfg.output : out;
  if (!target.empty()) {
    CsvReport trace;
    trace.header = {"generation", "ones", "tier", "level", "zeros_in_window", "zeros_outside_window"};
    for (const TraceRecord& rec : r.trace) {
      const auto& p = rec.path;
      trace.rows.push_back({std::to_string(rec.generation), std::to_string(rec.ones),
                            p ? std::to_string(p->tier) : "", p ? std::to_string(p->level) : "",
                            p ? std::to_string(p->zeros_in_window) : "",
                            p ? std::to_string(p->zeros_outside_window) : ""});
    }
    trace.comments.push_back("tool_version=" + std::string(kToolVersion));
    for (std::string& line : cfg.echo()) trace.comments.push_back(std::move(line));
    trace.comments.push_back("replicate_index=" + std::to_string(replicate));
    emit_csv(trace, resolve(target));
  }
  return kOk;
}

int cmd_study(const ConfigSource& src, ExperimentKind kind, const std::string& out) {
  ExperimentConfig cfg = src.load();
  cfg.kind = kind;
  if (kind == ExperimentKind::Stagnation) cfg.function = FunctionFamily::FPi;
  if (!out.empty()) cfg.output = out;
  const CsvReport report = run_experiment(cfg, output_directory());
  std::size_t warnings = 0;
  for (const auto& row : report.rows) warnings += row.front() == "warning" ? 1 : 0;
  print_kv("rows", std::to_string(report.rows.size()));
  print_kv("warnings", std::to_string(warnings));
  print_kv("output", (output_directory() / cfg.output).string());
  return kOk;
}

struct DriftArgs {
  std::string quantity = "binval";
  std::size_t n = 1000;
  double c = 10.0;
  std::size_t u = 400;
  std::size_t zeros = 0;
  double alpha = 0.01;
  double beta = 0.4;
  double eps = 0.08;
  std::uint64_t samples = 100'000;
  double p_up = 0.6;
  std::int64_t interval = 20;
  std::uint64_t trials = 10'000;
  std::uint64_t budget = 1'000'000;
  std::int64_t escape = 0;  // 0: five interval lengths above the start
  std::string out;
};

int cmd_drift(const ConfigSource& src, const DriftArgs& a) {
  const ExperimentConfig cfg = src.load();
  SeededGenerator gen(cfg.seed, "drift/" + a.quantity);
  std::vector<EstimateRow> rows;
  auto params = [](std::initializer_list<std::pair<const char*, std::string>> kv) {
    std::string s;
    for (const auto& [k, v] : kv) s += (s.empty() ? "" : ";") + std::string(k) + "=" + v;
    return s;
  };
  if (a.quantity == "binval") {
    const std::size_t z = a.zeros ? a.zeros : a.u / 10;
    const DriftEstimate e = estimate_binval_drift({a.u, z, a.c, a.n}, a.samples, gen);
    rows.push_back({"binval_drift",
                    params({{"u", std::to_string(a.u)}, {"zeros0", std::to_string(z)}, {"c", format_real(a.c)},
                            {"n", std::to_string(a.n)}}),
                    e, binval_drift_lower_bound(a.beta, a.eps, a.c), ">="});
  } else if (a.quantity == "outside") {
    const DriftEstimate e = estimate_outside_loss(a.alpha, a.beta, a.c, a.n, a.samples, gen);
    rows.push_back({"outside_loss",
                    params({{"alpha", format_real(a.alpha)}, {"beta", format_real(a.beta)},
                            {"c", format_real(a.c)}, {"n", std::to_string(a.n)}}),
                    e, outside_loss_bound(a.alpha, a.c, a.n), "<="});
  } else if (a.quantity == "sliding") {
    const FPiInstance inst = instance_from(cfg);
    const std::size_t hi = inst.ell() / 10;
    const std::size_t lo = std::max<std::size_t>(1, inst.ell() / 11);
    const DriftEstimate e =
        estimate_sliding_drift(inst, cfg.c_values.front(), synthetic_path_states(inst, lo, hi), a.samples, gen);
    rows.push_back({"sliding_drift",
                    params({{"n", std::to_string(inst.n())}, {"c", format_real(cfg.c_values.front())},
                            {"length", std::to_string(inst.length())}}),
                    e, 0.0, ">="});
  } else if (a.quantity == "hitting") {
    const double p = a.p_up;
    const TransitionSampler walk = [p](std::int64_t s, SeededGenerator& g) { return g.bernoulli(p) ? s + 1 : s - 1; };
    HittingProbeConfig hc;
    hc.a = 0;
    hc.b = a.interval;
    hc.start = a.interval;
    hc.budget = a.budget;
    hc.trials = a.trials;
    hc.escape_at = a.escape > 0 ? a.escape : hc.start + 5 * a.interval;
    const HittingReport r = hitting_time_probe(walk, hc, gen);
    DriftEstimate e;
    e.mean = r.hit_fraction;
    e.samples = r.trials;
    e.raw_samples = r.trials;
    e.acceptance_rate = 1.0;
    e.conclusive = true;
    e.std_error = std::sqrt(r.hit_fraction * (1.0 - r.hit_fraction) / static_cast<double>(r.trials));
    rows.push_back({"hit_fraction",
                    params({{"p_up", format_real(p)}, {"interval", std::to_string(a.interval)},
                            {"budget", std::to_string(a.budget)}}),
                    e, std::pow((1.0 - p) / p, static_cast<double>(a.interval)), "~"});
  } else {
    throw ConfigError("unknown drift quantity '" + a.quantity + "'");
  }
  if (a.out.empty()) {
    write_estimates_csv(std::cout, rows);
  } else {
    const auto path = resolve(a.out);
    std::ofstream file(path);
    if (!file) throw IoError("cannot write " + path.string());
    write_estimates_csv(file, rows);
    if (!file) throw IoError("write failed: " + path.string());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monolab: (1+1) EA laboratory for monotone functions"};
  app.require_subcommand(1);

  ConfigSource construct_src, verify_src, mono_src, run_src, scaling_src, stag_src, drift_src;
  std::string construct_out = "windows.wseq", construct_desc;
  auto* construct = app.add_subcommand("construct", "build and serialize a window sequence");
  construct_src.attach(construct);
  construct->add_option("--out", construct_out, "WSEQ1 output file");
  construct->add_option("--descriptor", construct_desc, "optional instance descriptor file");

  std::string verify_in, verify_mode = "exact";
  std::uint64_t verify_pairs = 100'000;
  auto* verify = app.add_subcommand("verify", "check window distinctness and overlap bounds");
  verify_src.attach(verify);
  verify->add_option("--in", verify_in, "WSEQ1 file (default: build from config)");
  verify->add_option("--mode", verify_mode)->check(CLI::IsMember({"exact", "sampled"}));
  verify->add_option("--pairs", verify_pairs, "pairs for sampled mode");

  std::string mono_family = "fpi", mono_mode = "exhaustive";
  std::uint64_t mono_samples = 100'000;
  auto* mono = app.add_subcommand("check-monotone", "search for single-bit monotonicity violations");
  mono_src.attach(mono);
  mono->add_option("--function", mono_family)->check(CLI::IsMember({"fpi", "onemax", "binval"}));
  mono->add_option("--mode", mono_mode)->check(CLI::IsMember({"exhaustive", "sampled"}));
  mono->add_option("--samples", mono_samples);

  std::size_t run_replicate = 0;
  std::string run_out;
  auto* run = app.add_subcommand("run", "single EA run with trace");
  run_src.attach(run);
  run->add_option("--replicate", run_replicate);
  run->add_option("--out", run_out, "trace CSV");

  std::string scaling_out, stag_out;
  auto* scaling = app.add_subcommand("scaling", "runtime scaling study");
  scaling_src.attach(scaling);
  scaling->add_option("--out", scaling_out);
  auto* stagnation = app.add_subcommand("stagnation", "path stagnation study");
  stag_src.attach(stagnation);
  stagnation->add_option("--out", stag_out);

  DriftArgs drift_args;
  auto* drift = app.add_subcommand("drift", "drift estimators and closed-form bounds");
  drift_src.attach(drift);
  drift->add_option("--quantity", drift_args.quantity)
      ->check(CLI::IsMember({"binval", "outside", "sliding", "hitting"}));
  drift->add_option("--n", drift_args.n);
  drift->add_option("--c", drift_args.c);
  drift->add_option("--u", drift_args.u);
  drift->add_option("--zeros", drift_args.zeros);
  drift->add_option("--alpha", drift_args.alpha);
  drift->add_option("--beta", drift_args.beta);
  drift->add_option("--eps", drift_args.eps);
  drift->add_option("--samples", drift_args.samples);
  drift->add_option("--p-up", drift_args.p_up);
  drift->add_option("--interval", drift_args.interval);
  drift->add_option("--trials", drift_args.trials);
  drift->add_option("--budget", drift_args.budget);
  drift->add_option("--escape", drift_args.escape, "level at which a hitting trial is abandoned");
  drift->add_option("--out", drift_args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*construct) return cmd_construct(construct_src, construct_out, construct_desc);
    if (*verify) return cmd_verify(verify_src, verify_in, verify_mode, verify_pairs);
    if (*mono) return cmd_check_monotone(mono_src, mono_family, mono_mode, mono_samples);
    if (*run) return cmd_run(run_src, run_replicate, run_out);
    if (*scaling) return cmd_study(scaling_src, ExperimentKind::Scaling, scaling_out);
    if (*stagnation) return cmd_study(stag_src, ExperimentKind::Stagnation, stag_out);
    if (*drift) return cmd_drift(drift_src, drift_args);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariant;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
