#include "monolab/functions.hpp"

#include <algorithm>
#include <numeric>

#include "monolab/error.hpp"

namespace monolab {

namespace {

std::strong_ordering order_of(double a, double b) {
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

class ComparingIncumbent final : public Incumbent {
 public:
  ComparingIncumbent(const PseudoBooleanFunction& f, BitString x) : Incumbent(std::move(x)), f_(f) {}

  bool offer(const BitString& offspring, std::span<const std::uint32_t> /*flips*/) override {
    if (f_.compare(offspring, x_) < 0) return false;
    x_ = offspring;
    return true;
  }
  void adopt(const BitString& offspring, std::span<const std::uint32_t> /*flips*/) override { x_ = offspring; }
  std::optional<PathView> path_view() const override { return f_.path_view(x_); }

 private:
  const PseudoBooleanFunction& f_;
};

class OneMaxIncumbent final : public Incumbent {
 public:
  using Incumbent::Incumbent;

  bool offer(const BitString& offspring, std::span<const std::uint32_t> flips) override {
    std::ptrdiff_t gain = 0;
    for (const std::uint32_t k : flips) gain += x_.test_offset(k) ? -1 : 1;
    if (gain < 0) return false;
    x_ = offspring;
    return true;
  }
  void adopt(const BitString& offspring, std::span<const std::uint32_t> /*flips*/) override { x_ = offspring; }
};

void check_permutation(std::span<const std::size_t> order, std::size_t n) {
  if (order.size() != n) throw InvalidArgument("binval order length differs from n");
  std::vector<bool> seen(n, false);
  for (const std::size_t p : order) {
    if (p < 1 || p > n || seen[p - 1]) throw InvalidArgument("binval order is not a permutation of [n]");
    seen[p - 1] = true;
  }
}

}  // namespace

std::unique_ptr<Incumbent> PseudoBooleanFunction::make_incumbent(BitString x) const {
  return std::make_unique<ComparingIncumbent>(*this, std::move(x));
}

std::size_t onemax(const BitString& x) { return x.count_ones(); }

double linear_value(const BitString& x, std::span<const double> weights) {
  if (weights.size() != x.size()) throw InvalidArgument("linear_value: weight vector length differs from n");
  double total = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (x.test_offset(k)) total += weights[k];
  }
  return total;
}

std::strong_ordering binval_compare(const BitString& x, const BitString& y, std::span<const std::size_t> order) {
  if (x.size() != y.size() || order.size() != x.size()) throw InvalidArgument("binval_compare: length mismatch");
  for (const std::size_t pos : order) {
    const bool a = x.test(pos);
    const bool b = y.test(pos);
    if (a != b) return a ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return std::strong_ordering::equal;
}

std::vector<std::size_t> identity_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{1});
  return order;
}

OneMax::OneMax(std::size_t n) : n_(n) {
  if (n == 0) throw InvalidArgument("OneMax: n must be positive");
}

std::strong_ordering OneMax::compare(const BitString& x, const BitString& y) const {
  return onemax(x) <=> onemax(y);
}

std::unique_ptr<Incumbent> OneMax::make_incumbent(BitString x) const {
  return std::make_unique<OneMaxIncumbent>(std::move(x));
}

LinearFunction::LinearFunction(WeightVector weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidArgument("LinearFunction: empty weight vector");
}

std::strong_ordering LinearFunction::compare(const BitString& x, const BitString& y) const {
  return order_of(linear_value(x, weights_), linear_value(y, weights_));
}

BinVal::BinVal(std::size_t n) : order_(identity_order(n)) {
  if (n == 0) throw InvalidArgument("BinVal: n must be positive");
}

BinVal::BinVal(std::vector<std::size_t> order) : order_(std::move(order)) {
  if (order_.empty()) throw InvalidArgument("BinVal: empty order");
  check_permutation(order_, order_.size());
}

std::strong_ordering BinVal::compare(const BitString& x, const BitString& y) const {
  return binval_compare(x, y, order_);
}

ValueFunction::ValueFunction(std::string name, std::size_t n, std::function<double(const BitString&)> value)
    : name_(std::move(name)), n_(n), value_(std::move(value)) {
  if (n == 0) throw InvalidArgument("ValueFunction: n must be positive");
}

std::strong_ordering ValueFunction::compare(const BitString& x, const BitString& y) const {
  return order_of(value_(x), value_(y));
}

BitString bitstring_from_value(std::size_t n, std::uint64_t value) {
  BitString x(n);
  for (std::size_t k = 0; k < n; ++k) {
    if ((value >> (n - 1 - k)) & 1U) x.flip_offset(k);
  }
  return x;
}

MonotoneVerdict check_monotone(const PseudoBooleanFunction& f, MonotoneCheckMode mode, std::uint64_t samples,
                               SeededGenerator& gen) {
  const std::size_t n = f.size();
  MonotoneVerdict verdict;
  auto probe = [&](const BitString& x, std::size_t k) {
    BitString y = x;
    y.flip_offset(k);
    ++verdict.pairs_checked;
    if (f.compare(x, y) < 0) return true;
    verdict.passed = false;
    verdict.counterexample = MonotoneCounterexample{x, k + 1};
    return false;
  };

  if (mode == MonotoneCheckMode::Exhaustive) {
    if (n > kMaxExhaustiveMonotoneLength) {
      throw InvalidArgument("check_monotone: exhaustive mode needs n <= " +
                            std::to_string(kMaxExhaustiveMonotoneLength));
    }
    const std::uint64_t points = std::uint64_t{1} << n;
    for (std::uint64_t v = 0; v < points; ++v) {
      const BitString x = bitstring_from_value(n, v);
      for (std::size_t k = 0; k < n; ++k) {
        if (!x.test_offset(k) && !probe(x, k)) return verdict;
      }
    }
    return verdict;
  }

  for (std::uint64_t s = 0; s < samples; ++s) {
    const BitString x = random_bitstring(n, gen);
    const auto zeros = x.zero_positions();
    if (zeros.empty()) continue;
    const std::size_t j = zeros[gen.below(zeros.size())];
    if (!probe(x, j - 1)) return verdict;
  }
  return verdict;
}

}  // namespace monolab
