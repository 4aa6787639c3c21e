#include "monolab/bits.hpp"

#include <bit>
#include <cmath>

#include "monolab/error.hpp"

namespace monolab {

namespace {

std::size_t word_count(std::size_t n) { return (n + BitString::word_bits - 1) / BitString::word_bits; }

}  // namespace

BitString::BitString(std::size_t n, bool value) : size_(n), words_(word_count(n), value ? ~word_type{0} : 0) {
  if (n == 0) throw InvalidArgument("BitString: length must be positive");
  clear_tail();
}

BitString BitString::parse(std::string_view text) {
  BitString x(text.size());
  for (std::size_t k = 0; k < text.size(); ++k) {
    if (text[k] == '1') {
      x.flip_offset(k);
    } else if (text[k] != '0') {
      throw InvalidArgument("BitString::parse: expected only '0' and '1'");
    }
  }
  return x;
}

void BitString::check_position(std::size_t i) const {
  if (i < 1 || i > size_) {
    throw InvalidArgument("BitString: position " + std::to_string(i) + " outside [1, " + std::to_string(size_) + "]");
  }
}

void BitString::clear_tail() noexcept {
  const std::size_t rem = size_ % word_bits;
  if (rem != 0 && !words_.empty()) words_.back() &= (word_type{1} << rem) - 1;
}

bool BitString::test(std::size_t i) const {
  check_position(i);
  return test_offset(i - 1);
}

void BitString::set(std::size_t i, bool value) {
  check_position(i);
  if (test_offset(i - 1) != value) flip_offset(i - 1);
}

void BitString::flip(std::size_t i) {
  check_position(i);
  flip_offset(i - 1);
}

std::size_t BitString::count_ones() const noexcept {
  std::size_t total = 0;
  for (const word_type w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::vector<std::size_t> BitString::zero_positions() const {
  std::vector<std::size_t> out;
  out.reserve(count_zeros());
  for (std::size_t k = 0; k < size_; ++k) {
    if (!test_offset(k)) out.push_back(k + 1);
  }
  return out;
}

BitString BitString::restrict_to(std::span<const std::size_t> positions) const {
  if (positions.empty()) throw InvalidArgument("BitString::restrict_to: empty index set");
  BitString out(positions.size());
  for (std::size_t k = 0; k < positions.size(); ++k) {
    if (test(positions[k])) out.flip_offset(k);
  }
  return out;
}

BitString BitString::complement() const {
  BitString out = *this;
  for (word_type& w : out.words_) w = ~w;
  out.clear_tail();
  return out;
}

bool BitString::dominated_by(const BitString& y) const {
  if (y.size_ != size_) throw InvalidArgument("BitString::dominated_by: length mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & ~y.words_[w]) != 0) return false;
  }
  return true;
}

std::string BitString::to_string() const {
  std::string s(size_, '0');
  for (std::size_t k = 0; k < size_; ++k) {
    if (test_offset(k)) s[k] = '1';
  }
  return s;
}

std::size_t hamming_distance(const BitString& x, const BitString& y) {
  if (x.size() != y.size()) throw InvalidArgument("hamming_distance: length mismatch");
  std::size_t d = 0;
  const auto a = x.words();
  const auto b = y.words();
  for (std::size_t w = 0; w < a.size(); ++w) d += static_cast<std::size_t>(std::popcount(a[w] ^ b[w]));
  return d;
}

std::vector<std::uint32_t> differing_offsets(const BitString& x, const BitString& y) {
  if (x.size() != y.size()) throw InvalidArgument("differing_offsets: length mismatch");
  std::vector<std::uint32_t> out;
  const auto a = x.words();
  const auto b = y.words();
  for (std::size_t w = 0; w < a.size(); ++w) {
    BitString::word_type diff = a[w] ^ b[w];
    while (diff != 0) {
      out.push_back(static_cast<std::uint32_t>(w * BitString::word_bits + std::countr_zero(diff)));
      diff &= diff - 1;
    }
  }
  return out;
}

BitString random_bitstring(std::size_t n, SeededGenerator& gen) {
  if (n == 0) throw InvalidArgument("random_bitstring: length must be positive");
  BitString x(n);
  for (std::size_t k = 0; k < n; k += BitString::word_bits) {
    const std::uint64_t word = gen();
    const std::size_t limit = std::min(BitString::word_bits, n - k);
    for (std::size_t j = 0; j < limit; ++j) {
      if ((word >> j) & 1U) x.flip_offset(k + j);
    }
  }
  return x;
}

FlipSampler::FlipSampler(std::size_t n, double p) : n_(n), p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("mutation probability must lie in [0, 1]");
  // Skipping costs one log per flip, Bernoulli one uniform per bit.
  skipping_ = p > 0.0 && p < 0.1;
  if (skipping_) log_q_ = std::log1p(-p);
}

void FlipSampler::sample(SeededGenerator& gen, std::vector<std::uint32_t>& out) const {
  out.clear();
  if (p_ == 0.0) return;
  if (p_ == 1.0) {
    for (std::size_t k = 0; k < n_; ++k) out.push_back(static_cast<std::uint32_t>(k));
    return;
  }
  if (!skipping_) {
    for (std::size_t k = 0; k < n_; ++k) {
      if (gen.uniform01() < p_) out.push_back(static_cast<std::uint32_t>(k));
    }
    return;
  }
  // Gap before the next flip is Geometric(p) on {0, 1, ...}:
  // floor(log(U) / log(1 - p)) with U uniform on (0, 1].
  double pos = -1.0;
  const double limit = static_cast<double>(n_);
  while (true) {
    const double u = 1.0 - gen.uniform01();
    pos += 1.0 + std::floor(std::log(u) / log_q_);
    if (pos >= limit) break;
    out.push_back(static_cast<std::uint32_t>(pos));
  }
}

BitString mutate(const BitString& x, double p, SeededGenerator& gen) {
  const FlipSampler sampler(x.size(), p);
  std::vector<std::uint32_t> flips;
  sampler.sample(gen, flips);
  BitString y = x;
  for (const std::uint32_t k : flips) y.flip_offset(k);
  return y;
}

}  // namespace monolab
