#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "monolab/bits.hpp"
#include "monolab/functions.hpp"
#include "monolab/windows.hpp"

namespace monolab {

enum class PermutationContext : std::uint8_t { PrePath = 0, OnPath = 1 };

/// Weight order inside one window. Rank 0 is the heaviest weight 2^{ell-1};
/// slots are 0-based offsets into the window's ell entries.
struct SlotPermutation {
  std::vector<std::uint32_t> slot_of_rank;
  std::vector<std::uint32_t> rank_of_slot;
};

/// Deterministic supply of window permutations keyed by (context, k).
///
/// Each permutation is a Fisher-Yates shuffle driven by a generator derived
/// from (seed, context, k), so it can be regenerated anywhere. Results are
/// memoized in a bounded cache that is safe for concurrent readers.
class PermutationSupply {
 public:
  PermutationSupply(std::uint64_t seed, std::size_t ell, std::size_t cache_capacity = 4096);

  [[nodiscard]] std::shared_ptr<const SlotPermutation> get(PermutationContext ctx, std::uint64_t k) const;
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::size_t ell() const noexcept { return ell_; }

 private:
  [[nodiscard]] SlotPermutation generate(PermutationContext ctx, std::uint64_t k) const;

  std::uint64_t seed_;
  std::size_t ell_;
  std::size_t capacity_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::uint64_t, std::shared_ptr<const SlotPermutation>> cache_[2];
};

/// The permutation for (ctx, k) as a 1-based sequence: entry r is the window
/// slot carrying weight 2^{ell-r}.
[[nodiscard]] std::vector<std::uint32_t> permutation_for(const PermutationSupply& supply, PermutationContext ctx,
                                                         std::uint64_t k);

struct FPiParams {
  std::size_t n = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::uint64_t length = 0;  ///< L, the number of sequence entries
  std::uint64_t seed = 0;
  /// The path ends end_margin levels early: a point is on the path while
  /// i* + end_margin < L'.
  std::size_t end_margin = 0;
};

/// One fixed instance of the hard monotone function: window sequence,
/// outside-zero allowance floor(alpha n) and the permutation supply.
/// Cheap to copy; copies share the immutable data and the cache.
class FPiInstance {
 public:
  /// Builds the window sequence from the generator (seed, "construction").
  static FPiInstance build(const FPiParams& params);
  /// Uses an existing sequence, which must match n, floor(beta n) and L.
  FPiInstance(const FPiParams& params, WindowSequence sequence);

  [[nodiscard]] const FPiParams& params() const noexcept { return data_->params; }
  [[nodiscard]] const ConstructionParams& construction() const noexcept { return data_->construction; }
  [[nodiscard]] const WindowSequence& sequence() const noexcept { return data_->sequence; }
  [[nodiscard]] const PermutationSupply& permutations() const noexcept { return *data_->permutations; }

  [[nodiscard]] std::size_t n() const noexcept { return data_->params.n; }
  [[nodiscard]] std::size_t ell() const noexcept { return data_->sequence.ell(); }
  [[nodiscard]] std::size_t length() const noexcept { return data_->sequence.length(); }
  [[nodiscard]] std::size_t window_count() const noexcept { return data_->sequence.window_count(); }
  /// floor(alpha n).
  [[nodiscard]] std::size_t alpha_threshold() const noexcept { return data_->alpha_threshold; }
  /// floor(alpha n) == 0: the path is only reachable with no 0-bit outside the window.
  [[nodiscard]] bool degenerate_threshold() const noexcept { return data_->alpha_threshold == 0; }
  /// Whether 1-based level i counts as on the path (tier 1).
  [[nodiscard]] bool on_path(std::size_t level) const noexcept {
    return level + data_->params.end_margin < window_count();
  }

  /// 0-based sequence indices j with b_{j+1} = p, for 1-based position p.
  [[nodiscard]] std::span<const std::uint32_t> occurrences(std::size_t position) const;

 private:
  struct Data {
    FPiParams params;
    ConstructionParams construction;
    WindowSequence sequence;
    std::size_t alpha_threshold = 0;
    std::unique_ptr<PermutationSupply> permutations;
    std::vector<std::uint32_t> occurrence_start;  // CSR layout over positions
    std::vector<std::uint32_t> occurrence_index;
  };

  explicit FPiInstance(std::shared_ptr<const Data> data) : data_(std::move(data)) {}

  std::shared_ptr<const Data> data_;
};

struct LevelView {
  bool empty = true;                ///< no window has few enough outside zeros
  std::size_t i_star = 0;           ///< 1-based, meaningful when !empty
  std::size_t zeros_outside = 0;    ///< relative to B_{i*}, or B_1 when empty
  std::size_t zeros_inside = 0;

  friend bool operator==(const LevelView&, const LevelView&) = default;
};

/// Finds i* = max{i : |Z(x) \ B_i| <= floor(alpha n)} with one sliding pass
/// over the windows.
[[nodiscard]] LevelView level_of(const FPiInstance& inst, const BitString& x);

/// Tier 0 pre-path, 1 on path, 2 past the path.
enum class Tier : int { PrePath = 0, OnPath = 1, PastPath = 2 };

/// Totally ordered stand-in for f(x): tier, then major, then the window bits
/// read from the heaviest to the lightest weight.
struct FitnessKey {
  Tier tier = Tier::PrePath;
  std::uint64_t major = 0;
  std::vector<std::uint8_t> window_word;

  friend auto operator<=>(const FitnessKey&, const FitnessKey&) = default;
  friend bool operator==(const FitnessKey&, const FitnessKey&) = default;
};

[[nodiscard]] FitnessKey fitness_key(const FPiInstance& inst, const BitString& x);
[[nodiscard]] PathView path_view_of(const FPiInstance& inst, const BitString& x);

using BigNatural = boost::multiprecision::cpp_int;

/// Literal arbitrary-precision value of f(x). Recounts every window
/// directly instead of sliding, and throws InvariantViolation if the
/// separation between the three value ranges fails. Meant for n <= 32.
[[nodiscard]] BigNatural exact_value(const FPiInstance& inst, const BitString& x);

enum class PathInvariantStatus { Checked, NotApplicable, Violation };

struct PathInvariantResult {
  PathInvariantStatus status = PathInvariantStatus::NotApplicable;
  std::size_t i_star = 0;
  std::size_t zeros_outside = 0;
};

/// On the path (B_x nonempty and i* on path) a point has exactly
/// floor(alpha n) zeros outside its active window.
[[nodiscard]] PathInvariantResult check_path_invariant(const FPiInstance& inst, const BitString& x);

/// PseudoBooleanFunction view of an instance. With `incremental` set, EA
/// runs use the cached-window incumbent; otherwise every offspring is
/// judged by recomputing fitness_key.
class FPiFunction final : public PseudoBooleanFunction {
 public:
  explicit FPiFunction(FPiInstance instance, bool incremental = true);

  std::string name() const override { return "fpi"; }
  std::size_t size() const override { return instance_.n(); }
  std::strong_ordering compare(const BitString& x, const BitString& y) const override;
  std::unique_ptr<Incumbent> make_incumbent(BitString x) const override;
  std::optional<PathView> path_view(const BitString& x) const override { return path_view_of(instance_, x); }
  std::size_t jump_threshold() const override { return instance_.ell(); }

  [[nodiscard]] const FPiInstance& instance() const noexcept { return instance_; }

 private:
  FPiInstance instance_;
  bool incremental_;
};

/// Text record of key=value lines. The window sequence lives in a separate
/// WSEQ1 file referenced by path (relative paths resolve against the
/// descriptor's directory).
void save_instance_descriptor(const std::filesystem::path& path, const FPiParams& params,
                              const std::string& window_file);
[[nodiscard]] FPiInstance load_instance_descriptor(const std::filesystem::path& path);

}  // namespace monolab
