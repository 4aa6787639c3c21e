#include "monolab/random.hpp"

#include "monolab/error.hpp"

namespace monolab {

namespace {

std::uint64_t engine_seed(std::uint64_t seed, std::string_view label) {
  return mix64(seed ^ mix64(hash_label(label)));
}

}  // namespace

SeededGenerator::SeededGenerator(std::uint64_t seed, std::string_view label)
    : seed_(seed), label_(label), engine_(engine_seed(seed, label)) {}

SeededGenerator SeededGenerator::derive(std::string_view label) const {
  std::string full = label_;
  full += '/';
  full += label;
  return SeededGenerator(seed_, full);
}

SeededGenerator SeededGenerator::derive(std::string_view label, std::uint64_t index) const {
  std::string full = label_;
  full += '/';
  full += label;
  full += '#';
  full += std::to_string(index);
  return SeededGenerator(seed_, full);
}

__extension__ using u128 = unsigned __int128;

std::uint64_t SeededGenerator::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("SeededGenerator::below: bound must be positive");
  // Lemire's nearly-divisionless method; exact and platform independent.
  u128 m = static_cast<u128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<u128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double SeededGenerator::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace monolab
