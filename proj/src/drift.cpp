#include "monolab/drift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>

#include "monolab/csv.hpp"
#include "monolab/error.hpp"

namespace monolab {

namespace {

DriftEstimate finish(const RunningMoments& m, std::uint64_t raw, std::string conditioning) {
  DriftEstimate e;
  e.samples = m.count();
  e.raw_samples = raw;
  e.conditioning = std::move(conditioning);
  e.acceptance_rate = raw == 0 ? 0.0 : static_cast<double>(m.count()) / static_cast<double>(raw);
  e.conclusive = m.count() > 0;
  if (e.conclusive) {
    e.mean = m.mean();
    e.std_error = m.std_error();
  }
  return e;
}

// Uniform k-subset of [0, universe) by a partial Fisher-Yates over `pool`.
void choose_subset(std::vector<std::uint32_t>& pool, std::size_t k, SeededGenerator& gen) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + gen.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
}

std::size_t count_flips(std::size_t bits, const FlipSampler& sampler, SeededGenerator& gen,
                        std::vector<std::uint32_t>& scratch) {
  if (bits == 0) return 0;
  sampler.sample(gen, scratch);
  return scratch.size();
}

}  // namespace

void RunningMoments::add(double v) {
  ++count_;
  const double delta = v - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (v - mean_);
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const auto total = static_cast<double>(count_ + other.count_);
  const double delta = other.mean_ - mean_;
  mean_ += delta * static_cast<double>(other.count_) / total;
  m2_ += other.m2_ + delta * delta * static_cast<double>(count_) * static_cast<double>(other.count_) / total;
  count_ += other.count_;
}

double RunningMoments::sample_variance() const noexcept {
  return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
}

double RunningMoments::std_error() const noexcept {
  return count_ > 0 ? std::sqrt(sample_variance() / static_cast<double>(count_)) : 0.0;
}

double harmonic_drift_time_bound(std::size_t n, double c) {
  if (!(c > 0.0 && c < 1.0)) throw InvalidArgument("harmonic_drift_time_bound: need 0 < c < 1");
  if (n == 0) throw InvalidArgument("harmonic_drift_time_bound: n must be positive");
  const auto nn = static_cast<double>(n);
  return (std::log(nn) + 1.0) * nn * std::exp(c) / (c * (1.0 - c));
}

double binval_drift_lower_bound(double beta, double eps, double c) {
  if (!(eps >= 0.0 && eps < beta && beta < 1.0)) throw InvalidArgument("binval_drift_lower_bound: need 0 <= eps < beta < 1");
  return (c * (0.8 * beta - eps) - 2.0) / 11.0;
}

DriftEstimate estimate_binval_drift(const BinvalProcessConfig& cfg, std::uint64_t samples, SeededGenerator& gen) {
  if (cfg.u == 0 || cfg.zeros0 > cfg.u || cfg.u > cfg.n) throw InvalidArgument("estimate_binval_drift: need 0 <= zeros0 <= u <= n");
  if (samples == 0) throw InvalidArgument("estimate_binval_drift: samples must be positive");
  const FlipSampler sampler(cfg.u, cfg.c / static_cast<double>(cfg.n));
  std::vector<std::uint32_t> zero_pool(cfg.u);
  std::vector<std::uint32_t> rank_of(cfg.u);
  std::vector<std::uint8_t> is_zero(cfg.u);
  std::vector<std::uint32_t> flips;
  RunningMoments moments;
  std::uint64_t moved = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::iota(zero_pool.begin(), zero_pool.end(), 0U);
    choose_subset(zero_pool, cfg.zeros0, gen);
    std::fill(is_zero.begin(), is_zero.end(), 0);
    for (std::size_t k = 0; k < cfg.zeros0; ++k) is_zero[zero_pool[k]] = 1;
    // Fresh weights: rank_of[bit] = 0 is the heaviest.
    std::iota(rank_of.begin(), rank_of.end(), 0U);
    for (std::size_t r = cfg.u - 1; r > 0; --r) std::swap(rank_of[r], rank_of[gen.below(r + 1)]);

    sampler.sample(gen, flips);
    double delta = 0.0;
    if (!flips.empty()) {
      std::uint32_t top = flips.front();
      for (const std::uint32_t k : flips) {
        if (rank_of[k] < rank_of[top]) top = k;
      }
      if (is_zero[top]) {
        ++moved;
        for (const std::uint32_t k : flips) delta += is_zero[k] ? -1.0 : 1.0;
      }
    }
    moments.add(delta);
  }
  DriftEstimate e = finish(moments, samples, "none");
  e.acceptance_rate = static_cast<double>(moved) / static_cast<double>(samples);
  return e;
}

double outside_loss_bound(double alpha, double c, std::size_t n) {
  if (!(alpha >= 0.0)) throw InvalidArgument("outside_loss_bound: alpha must be nonnegative");
  if (!(c * alpha < 1.0)) throw InvalidArgument("outside_loss_bound: need c alpha < 1");
  if (!(c < static_cast<double>(n))) throw InvalidArgument("outside_loss_bound: need c < n");
  const double base = std::numbers::e / (1.0 - c / static_cast<double>(n));
  return 1.0 + std::pow(base, alpha * c) * c * alpha / (1.0 - c * alpha);
}

DriftEstimate estimate_outside_loss_counts(std::size_t outside_zeros, std::size_t outside_ones,
                                           double flip_probability, std::uint64_t samples, SeededGenerator& gen) {
  if (outside_zeros == 0) throw InvalidArgument("estimate_outside_loss: no outside 0-bits, Z0 > Z1 is impossible");
  const FlipSampler zero_flips(outside_zeros, flip_probability);
  const FlipSampler one_flips(std::max<std::size_t>(outside_ones, 1), flip_probability);
  std::vector<std::uint32_t> scratch;
  RunningMoments moments;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const std::size_t z0 = count_flips(outside_zeros, zero_flips, gen, scratch);
    const std::size_t z1 = count_flips(outside_ones, one_flips, gen, scratch);
    if (z0 > z1) moments.add(static_cast<double>(z0 - z1));
  }
  return finish(moments, samples, "Z0 > Z1");
}

DriftEstimate estimate_outside_loss(double alpha, double beta, double c, std::size_t n, std::uint64_t samples,
                                    SeededGenerator& gen) {
  if (!(alpha > 0.0 && alpha + beta < 1.0)) throw InvalidArgument("estimate_outside_loss: need alpha > 0, alpha + beta < 1");
  const auto nn = static_cast<double>(n);
  const auto zeros = static_cast<std::size_t>(std::floor(alpha * nn));
  const auto ones = static_cast<std::size_t>(std::llround((1.0 - alpha - beta) * nn));
  return estimate_outside_loss_counts(zeros, ones, c / nn, samples, gen);
}

StateSampler synthetic_path_states(const FPiInstance& inst, std::size_t zeros_lo, std::size_t zeros_hi) {
  if (zeros_lo > zeros_hi || zeros_hi > inst.ell()) throw InvalidArgument("synthetic_path_states: bad zero range");
  if (inst.window_count() <= inst.params().end_margin + 1) throw InvalidArgument("synthetic_path_states: no on-path levels");
  if (inst.alpha_threshold() > inst.n() - inst.ell()) throw InvalidArgument("synthetic_path_states: allowance exceeds outside bits");
  return [inst, zeros_lo, zeros_hi](SeededGenerator& gen) {
    const std::size_t levels = inst.window_count() - inst.params().end_margin - 1;
    const std::size_t level = 1 + gen.below(levels);
    const auto window = inst.sequence().window(level);
    std::vector<bool> inside(inst.n(), false);
    std::vector<std::uint32_t> in_pool;
    std::vector<std::uint32_t> out_pool;
    for (const std::uint32_t p : window) inside[p - 1] = true;
    for (std::uint32_t k = 0; k < inst.n(); ++k) (inside[k] ? in_pool : out_pool).push_back(k);
    const std::size_t z = zeros_lo + gen.below(zeros_hi - zeros_lo + 1);
    choose_subset(in_pool, z, gen);
    choose_subset(out_pool, inst.alpha_threshold(), gen);
    BitString x = BitString::ones(inst.n());
    for (std::size_t k = 0; k < z; ++k) x.flip_offset(in_pool[k]);
    for (std::size_t k = 0; k < inst.alpha_threshold(); ++k) x.flip_offset(out_pool[k]);
    return x;
  };
}

DriftEstimate estimate_sliding_drift(const FPiInstance& inst, double c, const StateSampler& sampler,
                                     std::uint64_t samples, SeededGenerator& gen) {
  const auto nn = static_cast<double>(inst.n());
  const double window_cap = inst.params().beta * nn / 10.0;
  const FlipSampler flipper(inst.n(), c / nn);
  std::vector<std::uint32_t> flips;
  RunningMoments moments;
  std::uint64_t rejected = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    BitString x = sampler(gen);
    const LevelView before = level_of(inst, x);
    if (before.empty || !inst.on_path(before.i_star) || static_cast<double>(before.zeros_inside) > window_cap ||
        before.zeros_outside != inst.alpha_threshold()) {
      ++rejected;
      continue;
    }
    flipper.sample(gen, flips);
    if (flips.empty()) continue;
    for (const std::uint32_t k : flips) x.flip_offset(k);
    const LevelView after = level_of(inst, x);
    if (after.empty || after.i_star <= before.i_star || !inst.on_path(after.i_star)) continue;
    moments.add(static_cast<double>(after.zeros_inside) - static_cast<double>(before.zeros_inside));
  }
  DriftEstimate e = finish(moments, samples - rejected, "level rises to a new on-path level");
  e.rejected_states = rejected;
  return e;
}

HittingReport hitting_time_probe(const TransitionSampler& step, const HittingProbeConfig& cfg, SeededGenerator& gen) {
  if (!(cfg.a < cfg.b)) throw InvalidArgument("hitting_time_probe: need a < b");
  if (cfg.start < cfg.b) throw InvalidArgument("hitting_time_probe: start must be >= b");
  HittingReport report;
  report.trials = cfg.trials;
  std::vector<std::uint64_t> times;
  for (std::uint64_t t = 0; t < cfg.trials; ++t) {
    std::int64_t state = cfg.start;
    for (std::uint64_t k = 1; k <= cfg.budget; ++k) {
      state = step(state, gen);
      if (state <= cfg.a) {
        times.push_back(k);
        break;
      }
      if (cfg.escape_at && state >= *cfg.escape_at) {
        ++report.escaped;
        break;
      }
    }
  }
  report.hits = times.size();
  report.hit_fraction = cfg.trials == 0 ? 0.0 : static_cast<double>(report.hits) / static_cast<double>(cfg.trials);
  if (!times.empty()) {
    std::sort(times.begin(), times.end());
    auto quantile = [&](double q) {
      const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(times.size() - 1)));
      return times[idx];
    };
    report.time_q10 = quantile(0.1);
    report.time_median = quantile(0.5);
    report.time_q90 = quantile(0.9);
  }
  return report;
}

void write_estimates_csv(std::ostream& out, const std::vector<EstimateRow>& rows) {
  CsvReport report;
  report.header = {"quantity", "parameters", "mean", "std_error", "samples", "acceptance_rate", "bound_value", "bound_relation"};
  for (const EstimateRow& r : rows) {
    report.rows.push_back({r.quantity, r.parameters, r.estimate.conclusive ? format_real(r.estimate.mean) : "inconclusive",
                           format_real(r.estimate.std_error), std::to_string(r.estimate.samples),
                           format_real(r.estimate.acceptance_rate), r.bound ? format_real(*r.bound) : "",
                           r.relation});
  }
  validate_report(report);
  write_csv(out, report);
}

}  // namespace monolab
