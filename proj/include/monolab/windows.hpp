#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "monolab/random.hpp"

namespace monolab {

/// Parameters of the window index sequence b_1..b_L.
///
/// `ell` = floor(beta n). `window_count` (L') = L - ell + 1 may be zero or
/// negative for the theoretical L at desk-scale n; such parameters are
/// reported as degenerate and cannot be built without a length override.
struct ConstructionParams {
  std::size_t n = 0;
  double beta = 0.0;
  double gamma = 0.0;
  double rho = 0.0;
  std::size_t ell = 0;
  std::uint64_t length = 0;          ///< L
  std::int64_t window_count = 0;     ///< L'

  /// rho < gamma, the regime in which the overlap bound is meaningful.
  [[nodiscard]] bool overlap_regime() const noexcept { return rho < gamma; }
  [[nodiscard]] bool degenerate() const noexcept { return window_count < 1; }
};

/// Parameters with L from the existence bound floor(exp((γ-ρ)²(1-2β)n/6)).
/// Requires 0 < beta < 1/2 and rho < gamma < 1.
[[nodiscard]] ConstructionParams theoretical_parameters(std::size_t n, double beta, double gamma);

/// Parameters with an explicit path length L. Requires 0 < beta < 1/2,
/// 0 < gamma < 1, ell >= 1 and L >= ell; rho < gamma is not required, so
/// surrogate instances outside the overlap regime can be built.
[[nodiscard]] ConstructionParams parameters_with_length(std::size_t n, double beta, double gamma,
                                                        std::uint64_t length);

class WindowSequence {
 public:
  WindowSequence() = default;
  /// Entries are 1-based positions in [n].
  WindowSequence(std::size_t n, std::size_t ell, std::vector<std::uint32_t> entries);

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t ell() const noexcept { return ell_; }
  [[nodiscard]] std::size_t length() const noexcept { return entries_.size(); }
  [[nodiscard]] std::size_t window_count() const noexcept { return entries_.size() - ell_ + 1; }

  /// b_i for 1-based i.
  [[nodiscard]] std::uint32_t entry(std::size_t i) const { return entries_.at(i - 1); }
  [[nodiscard]] std::span<const std::uint32_t> entries() const noexcept { return entries_; }
  /// B_i as the ell entries b_i..b_{i+ell-1}, for 1-based i in [L'].
  [[nodiscard]] std::span<const std::uint32_t> window(std::size_t i) const;

  friend bool operator==(const WindowSequence&, const WindowSequence&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t ell_ = 0;
  std::vector<std::uint32_t> entries_;
};

/// Samples b_1 uniformly from [n] and each later b_i uniformly from [n]
/// minus the previous min(i-1, ell-1) entries, so every window has ell
/// distinct positions. Requires n > 2 ell and an effective L >= ell.
[[nodiscard]] WindowSequence build_window_sequence(const ConstructionParams& params,
                                                   std::optional<std::uint64_t> length_override,
                                                   SeededGenerator& gen);

enum class VerifyMode { Exact, Sampled };

struct WindowPair {
  std::size_t i = 0;
  std::size_t j = 0;
  friend bool operator==(const WindowPair&, const WindowPair&) = default;
};

struct WindowReport {
  bool distinct_windows = true;              ///< every |B_i| = ell
  std::optional<std::size_t> repeated_window;///< first window with a repeated entry
  bool overlap_bounded = true;               ///< |B_i ∩ B_j| <= γ ell for |i-j| >= ell
  std::size_t max_overlap = 0;
  std::optional<WindowPair> worst_pair;
  std::uint64_t pairs_checked = 0;
  double overlap_limit = 0.0;                ///< γ ell

  [[nodiscard]] bool passed() const noexcept { return distinct_windows && overlap_bounded; }
};

/// Largest L' accepted by exact verification.
inline constexpr std::size_t kMaxExactVerifyWindows = 10'000;

/// Checks distinctness within every window and the overlap bound on all
/// (Exact) or `sample_pairs` random (Sampled) pairs with |i - j| >= ell.
[[nodiscard]] WindowReport verify_window_properties(const WindowSequence& seq, double gamma, VerifyMode mode,
                                                    std::uint64_t sample_pairs, SeededGenerator& gen);

/// Union bound L² exp(-((γ-ρ)/ρ)² ρ ell / 3) on the probability that some
/// qualifying pair of a freshly built sequence exceeds overlap γ ell.
[[nodiscard]] double collision_failure_bound(const ConstructionParams& params, std::uint64_t length);

/// Binary layout: "WSEQ1", then n, ell, L as little-endian u64, then L
/// little-endian u32 entries.
void write_window_sequence(std::ostream& out, const WindowSequence& seq);
[[nodiscard]] WindowSequence read_window_sequence(std::istream& in);
void save_window_sequence(const std::filesystem::path& path, const WindowSequence& seq);
[[nodiscard]] WindowSequence load_window_sequence(const std::filesystem::path& path);

}  // namespace monolab
