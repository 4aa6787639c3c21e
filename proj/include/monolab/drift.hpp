#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "monolab/bits.hpp"
#include "monolab/fpi.hpp"
#include "monolab/random.hpp"

namespace monolab {

/// Monte Carlo mean of a one-step quantity, possibly conditioned on an
/// event. When no raw sample meets the condition the estimate is
/// inconclusive and `mean` carries no information.
struct DriftEstimate {
  double mean = 0.0;
  double std_error = 0.0;         ///< sample sd / sqrt(samples)
  std::uint64_t samples = 0;      ///< conditioned sample count
  std::uint64_t raw_samples = 0;
  std::uint64_t rejected_states = 0;  ///< sampler outputs failing the preconditions
  std::string conditioning;
  double acceptance_rate = 0.0;   ///< samples / raw_samples
  bool conclusive = false;
};

/// Streaming mean and variance (Welford); merges associatively.
class RunningMoments {
 public:
  void add(double v);
  void merge(const RunningMoments& other);
  [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
  [[nodiscard]] double mean() const noexcept { return mean_; }
  [[nodiscard]] double sample_variance() const noexcept;
  [[nodiscard]] double std_error() const noexcept;

 private:
  std::uint64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// (ln n + 1) n e^c / (c (1 - c)): expected optimization time bound for
/// 0 < c < 1 on every monotone function. Rejects c outside (0, 1).
[[nodiscard]] double harmonic_drift_time_bound(std::size_t n, double c);

/// (1/11) (c (4 beta / 5 - eps) - 2): lower bound on the drift of 0-bits in
/// a random BINVAL window. Meaningful only where it is positive.
[[nodiscard]] double binval_drift_lower_bound(double beta, double eps, double c);

struct BinvalProcessConfig {
  std::size_t u = 0;       ///< window bits
  std::size_t zeros0 = 0;  ///< 0-bits in the window before the step
  double c = 0.0;
  std::size_t n = 0;       ///< ambient length; each bit flips with probability c/n
};

/// One step of the (1+1) EA on a BINVAL with freshly random weights over a
/// window holding zeros0 uniformly placed 0-bits; averages the change in
/// the number of 0-bits (0 when the offspring is rejected).
[[nodiscard]] DriftEstimate estimate_binval_drift(const BinvalProcessConfig& cfg, std::uint64_t samples,
                                                  SeededGenerator& gen);

/// 1 + (e / (1 - c/n))^{alpha c} c alpha / (1 - c alpha): upper bound on
/// the expected net loss of outside 0-bits given that some is lost.
/// Requires c alpha < 1 and c < n.
[[nodiscard]] double outside_loss_bound(double alpha, double c, std::size_t n);

/// Z0 ~ flips among floor(alpha n) outside 0-bits, Z1 ~ flips among
/// round((1 - alpha - beta) n) outside 1-bits, each bit with probability
/// c/n; mean of Z0 - Z1 conditioned on Z0 > Z1.
[[nodiscard]] DriftEstimate estimate_outside_loss(double alpha, double beta, double c, std::size_t n,
                                                  std::uint64_t samples, SeededGenerator& gen);

/// Variant with explicit outside counts, for small exact cases.
[[nodiscard]] DriftEstimate estimate_outside_loss_counts(std::size_t outside_zeros, std::size_t outside_ones,
                                                         double flip_probability, std::uint64_t samples,
                                                         SeededGenerator& gen);

using StateSampler = std::function<BitString(SeededGenerator&)>;

/// On-path points of `inst`: a uniformly chosen on-path level i, exactly
/// floor(alpha n) 0-bits placed uniformly outside B_i and a uniform number
/// in [zeros_lo, zeros_hi] of 0-bits placed uniformly inside B_i.
[[nodiscard]] StateSampler synthetic_path_states(const FPiInstance& inst, std::size_t zeros_lo,
                                                 std::size_t zeros_hi);

/// For on-path states with at most beta n / 10 window zeros and exactly
/// floor(alpha n) outside zeros: one EA step; among steps that raise the
/// level to a new on-path level, the mean of (zeros in the new window) -
/// (zeros in the old window).
[[nodiscard]] DriftEstimate estimate_sliding_drift(const FPiInstance& inst, double c, const StateSampler& sampler,
                                                   std::uint64_t samples, SeededGenerator& gen);

/// One step of an integer-valued Markov chain.
using TransitionSampler = std::function<std::int64_t(std::int64_t state, SeededGenerator& gen)>;

struct HittingReport {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  std::uint64_t escaped = 0;  ///< stopped at the escape level
  double hit_fraction = 0.0;
  /// Quantiles (10%, 50%, 90%) of first-hitting times over hitting trials.
  std::optional<std::uint64_t> time_q10;
  std::optional<std::uint64_t> time_median;
  std::optional<std::uint64_t> time_q90;
};

struct HittingProbeConfig {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t start = 0;
  std::uint64_t budget = 0;
  std::uint64_t trials = 0;
  /// Stops a trajectory once it reaches this level and counts it as not
  /// hitting. Only sound when the probability of returning to a from there
  /// is negligible.
  std::optional<std::int64_t> escape_at;
};

/// Runs `trials` trajectories from `start` for at most `budget` steps and
/// reports how many reach a state <= a. Requires a < b <= start.
[[nodiscard]] HittingReport hitting_time_probe(const TransitionSampler& step, const HittingProbeConfig& cfg,
                                               SeededGenerator& gen);

struct EstimateRow {
  std::string quantity;
  std::string parameters;
  DriftEstimate estimate;
  std::optional<double> bound;
  std::string relation;  ///< ">=" or "<=" relating mean to bound
};

/// quantity,parameters,mean,std_error,samples,acceptance_rate,bound_value,bound_relation
void write_estimates_csv(std::ostream& out, const std::vector<EstimateRow>& rows);

}  // namespace monolab
