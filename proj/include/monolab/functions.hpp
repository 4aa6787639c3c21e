#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "monolab/bits.hpp"
#include "monolab/random.hpp"

namespace monolab {

/// Position of a search point relative to a path-structured fitness
/// landscape. Functions without such structure report none.
struct PathView {
  int tier = 0;                ///< 0 pre-path, 1 on path, 2 past the path
  std::size_t level = 0;       ///< active window index (1 when tier is 0)
  std::size_t zeros_in_window = 0;
  std::size_t zeros_outside_window = 0;

  friend bool operator==(const PathView&, const PathView&) = default;
};

/// The EA's current search point together with whatever cached state its
/// function needs to judge offspring quickly.
class Incumbent {
 public:
  explicit Incumbent(BitString x) : x_(std::move(x)) {}
  virtual ~Incumbent() = default;

  [[nodiscard]] const BitString& point() const noexcept { return x_; }

  /// `offspring` differs from point() exactly at the 0-based offsets in
  /// `flips`. Adopts it and returns true iff f(offspring) >= f(point()).
  virtual bool offer(const BitString& offspring, std::span<const std::uint32_t> flips) = 0;
  /// Adopts `offspring` regardless of fitness.
  virtual void adopt(const BitString& offspring, std::span<const std::uint32_t> flips) = 0;

  [[nodiscard]] virtual std::optional<PathView> path_view() const { return std::nullopt; }

 protected:
  BitString x_;
};

/// Maximization target f: {0,1}^n -> totally ordered values.
///
/// Only the ordering is exposed. Evaluation is pure, so instances may be
/// shared across threads.
class PseudoBooleanFunction {
 public:
  virtual ~PseudoBooleanFunction() = default;

  [[nodiscard]] virtual std::string name() const = 0;
  [[nodiscard]] virtual std::size_t size() const = 0;
  /// Ordering of f(x) relative to f(y).
  [[nodiscard]] virtual std::strong_ordering compare(const BitString& x, const BitString& y) const = 0;

  /// Default implementation re-evaluates through compare().
  [[nodiscard]] virtual std::unique_ptr<Incumbent> make_incumbent(BitString x) const;
  [[nodiscard]] virtual std::optional<PathView> path_view(const BitString& /*x*/) const { return std::nullopt; }
  /// Level increase per generation above which a move counts as a long jump;
  /// zero for functions without path structure.
  [[nodiscard]] virtual std::size_t jump_threshold() const { return 0; }
};

[[nodiscard]] std::size_t onemax(const BitString& x);

using WeightVector = std::vector<double>;

/// Σ a_i x_i. Rejects a weight vector whose length differs from |x|.
[[nodiscard]] double linear_value(const BitString& x, std::span<const double> weights);

/// Compares BINVAL(x) against BINVAL(y) where position order[k-1] carries
/// weight 2^{n-k}. `order` is a permutation of [n] (1-based). Scans from the
/// heaviest position and stops at the first difference.
[[nodiscard]] std::strong_ordering binval_compare(const BitString& x, const BitString& y,
                                                  std::span<const std::size_t> order);

[[nodiscard]] std::vector<std::size_t> identity_order(std::size_t n);

class OneMax final : public PseudoBooleanFunction {
 public:
  explicit OneMax(std::size_t n);
  std::string name() const override { return "onemax"; }
  std::size_t size() const override { return n_; }
  std::strong_ordering compare(const BitString& x, const BitString& y) const override;
  std::unique_ptr<Incumbent> make_incumbent(BitString x) const override;

 private:
  std::size_t n_;
};

class LinearFunction final : public PseudoBooleanFunction {
 public:
  explicit LinearFunction(WeightVector weights);
  std::string name() const override { return "linear"; }
  std::size_t size() const override { return weights_.size(); }
  std::strong_ordering compare(const BitString& x, const BitString& y) const override;
  [[nodiscard]] const WeightVector& weights() const noexcept { return weights_; }

 private:
  WeightVector weights_;
};

class BinVal final : public PseudoBooleanFunction {
 public:
  /// Identity order: position 1 is heaviest.
  explicit BinVal(std::size_t n);
  explicit BinVal(std::vector<std::size_t> order);
  std::string name() const override { return "binval"; }
  std::size_t size() const override { return order_.size(); }
  std::strong_ordering compare(const BitString& x, const BitString& y) const override;

 private:
  std::vector<std::size_t> order_;
};

/// Adapter around a plain real-valued callable; handy for ad hoc functions.
class ValueFunction final : public PseudoBooleanFunction {
 public:
  ValueFunction(std::string name, std::size_t n, std::function<double(const BitString&)> value);
  std::string name() const override { return name_; }
  std::size_t size() const override { return n_; }
  std::strong_ordering compare(const BitString& x, const BitString& y) const override;

 private:
  std::string name_;
  std::size_t n_;
  std::function<double(const BitString&)> value_;
};

enum class MonotoneCheckMode { Exhaustive, Sampled };

struct MonotoneCounterexample {
  BitString x;
  std::size_t position = 0;  ///< 1-based j with x_j = 0 and f(x) >= f(flip_j(x))
};

struct MonotoneVerdict {
  bool passed = true;
  std::uint64_t pairs_checked = 0;
  std::optional<MonotoneCounterexample> counterexample;
};

/// Largest n accepted by the exhaustive checker.
inline constexpr std::size_t kMaxExhaustiveMonotoneLength = 20;

/// Checks f(x) < f(flip_j(x)) for single 0->1 flips.
///
/// Exhaustive mode visits x in ascending binary value (bit 1 most
/// significant) and j ascending, returning the first violation found.
/// Sampled mode checks `samples` uniformly random (x, j) pairs with x_j = 0.
[[nodiscard]] MonotoneVerdict check_monotone(const PseudoBooleanFunction& f, MonotoneCheckMode mode,
                                             std::uint64_t samples, SeededGenerator& gen);

/// Point whose bits 1..n spell the binary representation of `value`, with
/// bit 1 most significant.
[[nodiscard]] BitString bitstring_from_value(std::size_t n, std::uint64_t value);

}  // namespace monolab
