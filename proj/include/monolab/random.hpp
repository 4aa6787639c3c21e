#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace monolab {

/// Reproducible random stream identified by a (seed, label) pair.
///
/// The engine is seeded from a hash of both components, so two generators
/// with the same seed but different labels behave as independent streams,
/// and adding a new consumer under a fresh label never perturbs existing
/// ones. Satisfies UniformRandomBitGenerator.
class SeededGenerator {
 public:
  using result_type = std::uint64_t;

  SeededGenerator(std::uint64_t seed, std::string_view label);

  /// Child stream for a sub-purpose, e.g. `gen.derive("mutation")`.
  [[nodiscard]] SeededGenerator derive(std::string_view label) const;
  /// Child stream for the index-th replicate or worker.
  [[nodiscard]] SeededGenerator derive(std::string_view label, std::uint64_t index) const;

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] const std::string& label() const noexcept { return label_; }

  static constexpr result_type min() noexcept { return std::mt19937_64::min(); }
  static constexpr result_type max() noexcept { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform real in [0, 1).
  double uniform01();
  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::uint64_t seed_;
  std::string label_;
  std::mt19937_64 engine_;
};

/// 64-bit finalizer from splitmix64; used to turn structured keys into seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over the bytes of a label.
constexpr std::uint64_t hash_label(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char ch : label) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace monolab
