#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "monolab/fpi.hpp"
#include "monolab/functions.hpp"

namespace monolab {

namespace detail {

/// Range-add / range-max tree over the per-window zero counts, with a
/// search for the rightmost window in a range whose count reaches a bound.
class WindowMaxTree {
 public:
  WindowMaxTree() = default;
  explicit WindowMaxTree(std::span<const std::int32_t> values);

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  /// Adds delta to every entry in [lo, hi].
  void add(std::size_t lo, std::size_t hi, std::int32_t delta);
  [[nodiscard]] std::int32_t value(std::size_t i) const;

  struct Hit {
    std::size_t index;
    std::int32_t value;
  };
  /// Rightmost i in [lo, hi] with entry >= bound.
  [[nodiscard]] std::optional<Hit> rightmost_at_least(std::size_t lo, std::size_t hi, std::int64_t bound) const;

 private:
  void build(std::size_t node, std::size_t l, std::size_t r, std::span<const std::int32_t> values);
  void add(std::size_t node, std::size_t l, std::size_t r, std::size_t lo, std::size_t hi, std::int32_t delta);
  [[nodiscard]] std::optional<Hit> search(std::size_t node, std::size_t l, std::size_t r, std::size_t lo,
                                          std::size_t hi, std::int64_t bound, std::int64_t carried) const;

  std::size_t size_ = 0;
  std::vector<std::int32_t> max_;   // subtree max including this node's pending add
  std::vector<std::int32_t> pending_;
};

}  // namespace detail

/// Incumbent for f_Π that keeps the zero count of every window of the
/// current point in a WindowMaxTree.
///
/// An offspring is judged from the flipped positions only: the windows that
/// could become the new active window are located through the tree and
/// checked exactly against the flips touching them, and ties inside the
/// active window are decided by the heaviest flipped bit. Accepting a move
/// costs O(flips x occurrences x log L'). The verdicts are identical to
/// comparing fitness_key values, which the tests check.
class FPiIncumbent final : public Incumbent {
 public:
  FPiIncumbent(FPiInstance instance, BitString x);

  bool offer(const BitString& offspring, std::span<const std::uint32_t> flips) override;
  void adopt(const BitString& offspring, std::span<const std::uint32_t> flips) override;
  std::optional<PathView> path_view() const override;

  [[nodiscard]] Tier tier() const noexcept { return tier_; }
  /// 1-based active level (1 in the pre-path tier).
  [[nodiscard]] std::size_t level() const noexcept { return level_ + 1; }
  [[nodiscard]] std::size_t zeros() const noexcept { return zeros_; }

 private:
  struct Flip {
    std::uint32_t offset;
    bool to_zero;  // the bit was 1 and becomes 0
  };

  void classify(std::span<const std::uint32_t> flips);
  /// Window slot of 0-based position `pos` in 0-based window i, if inside.
  [[nodiscard]] std::optional<std::size_t> slot_in_window(std::uint32_t pos, std::size_t window) const;
  /// Rightmost 0-based window in [lo, L') that qualifies after the flips.
  [[nodiscard]] std::optional<std::size_t> find_level(std::size_t lo, std::int64_t zeros_after, std::size_t down)
      const;
  /// Sign of the heaviest flipped bit inside `window` under the given
  /// permutation: +1 for a 0->1 flip, -1 for 1->0, 0 if none lies inside.
  [[nodiscard]] int heaviest_flip(std::size_t window, PermutationContext ctx, std::uint64_t k);
  void apply(std::span<const Flip> flips);
  void locate();

  FPiInstance inst_;
  detail::WindowMaxTree tree_;
  std::size_t zeros_ = 0;
  Tier tier_ = Tier::PrePath;
  std::size_t level_ = 0;  // 0-based active window
  std::size_t on_path_end_ = 0;  // first 0-based window past the path

  std::vector<Flip> scratch_;
  PermutationContext cached_ctx_ = PermutationContext::PrePath;
  std::uint64_t cached_k_ = 0;
  std::shared_ptr<const SlotPermutation> cached_perm_;
};

}  // namespace monolab
