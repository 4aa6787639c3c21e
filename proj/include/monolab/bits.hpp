#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "monolab/random.hpp"

namespace monolab {

/// Fixed-length packed bit vector, the search point of the EA.
///
/// Positions are 1-based (`test(1)` is the first bit). The `*_offset`
/// accessors take 0-based offsets and skip bounds checks; they exist for
/// the inner loops of mutation and fitness tracking.
class BitString {
 public:
  using word_type = std::uint64_t;
  static constexpr std::size_t word_bits = 64;

  BitString() = default;
  /// n must be positive.
  explicit BitString(std::size_t n, bool value = false);

  /// Parses a string of '0'/'1'; character k is bit k+1.
  static BitString parse(std::string_view text);
  static BitString ones(std::size_t n) { return BitString(n, true); }
  static BitString zeros(std::size_t n) { return BitString(n, false); }

  [[nodiscard]] std::size_t size() const noexcept { return size_; }

  [[nodiscard]] bool test(std::size_t i) const;
  void set(std::size_t i, bool value);
  void flip(std::size_t i);

  [[nodiscard]] bool test_offset(std::size_t k) const noexcept {
    return (words_[k / word_bits] >> (k % word_bits)) & 1U;
  }
  void flip_offset(std::size_t k) noexcept { words_[k / word_bits] ^= word_type{1} << (k % word_bits); }

  [[nodiscard]] std::size_t count_ones() const noexcept;
  [[nodiscard]] std::size_t count_zeros() const noexcept { return size_ - count_ones(); }
  [[nodiscard]] bool all_ones() const noexcept { return count_ones() == size_; }

  /// Z(x): 1-based positions holding 0, ascending.
  [[nodiscard]] std::vector<std::size_t> zero_positions() const;
  /// Substring x|_I for 1-based positions I, in the given order.
  [[nodiscard]] BitString restrict_to(std::span<const std::size_t> positions) const;
  [[nodiscard]] BitString complement() const;

  /// Componentwise x <= y. Lengths must match.
  [[nodiscard]] bool dominated_by(const BitString& y) const;

  [[nodiscard]] std::span<const word_type> words() const noexcept { return words_; }
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  void check_position(std::size_t i) const;
  void clear_tail() noexcept;

  std::size_t size_ = 0;
  std::vector<word_type> words_;
};

[[nodiscard]] std::size_t hamming_distance(const BitString& x, const BitString& y);

/// Bits that differ between x and y as 0-based offsets, ascending.
[[nodiscard]] std::vector<std::uint32_t> differing_offsets(const BitString& x, const BitString& y);

/// Uniform random point of {0,1}^n. Rejects n = 0.
[[nodiscard]] BitString random_bitstring(std::size_t n, SeededGenerator& gen);

/// Draws the set of positions flipped by standard bit mutation.
///
/// Each of the n positions is included independently with probability p.
/// For small p·n the positions are found by geometric skipping, otherwise by
/// one Bernoulli draw per bit; both give exactly the same distribution.
class FlipSampler {
 public:
  FlipSampler(std::size_t n, double p);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] double probability() const noexcept { return p_; }

  /// Replaces `out` with the sampled 0-based offsets in ascending order.
  void sample(SeededGenerator& gen, std::vector<std::uint32_t>& out) const;

 private:
  std::size_t n_;
  double p_;
  double log_q_ = 0.0;  // log(1 - p), used for skipping
  bool skipping_ = false;
};

/// mut(x): copy of x with each bit flipped independently with probability p.
[[nodiscard]] BitString mutate(const BitString& x, double p, SeededGenerator& gen);

}  // namespace monolab
