#include "monolab/fpi_incumbent.hpp"

#include <algorithm>
#include <limits>

#include "monolab/error.hpp"

namespace monolab {

namespace detail {

WindowMaxTree::WindowMaxTree(std::span<const std::int32_t> values) : size_(values.size()) {
  if (values.empty()) throw InvalidArgument("WindowMaxTree: no entries");
  max_.assign(4 * size_, 0);
  pending_.assign(4 * size_, 0);
  build(1, 0, size_ - 1, values);
}

void WindowMaxTree::build(std::size_t node, std::size_t l, std::size_t r, std::span<const std::int32_t> values) {
  if (l == r) {
    max_[node] = values[l];
    return;
  }
  const std::size_t mid = (l + r) / 2;
  build(2 * node, l, mid, values);
  build(2 * node + 1, mid + 1, r, values);
  max_[node] = std::max(max_[2 * node], max_[2 * node + 1]);
}

void WindowMaxTree::add(std::size_t lo, std::size_t hi, std::int32_t delta) {
  if (lo > hi || hi >= size_) throw InvalidArgument("WindowMaxTree::add: bad range");
  add(1, 0, size_ - 1, lo, hi, delta);
}

void WindowMaxTree::add(std::size_t node, std::size_t l, std::size_t r, std::size_t lo, std::size_t hi,
                        std::int32_t delta) {
  if (lo <= l && r <= hi) {
    max_[node] += delta;
    pending_[node] += delta;
    return;
  }
  const std::size_t mid = (l + r) / 2;
  if (lo <= mid) add(2 * node, l, mid, lo, hi, delta);
  if (hi > mid) add(2 * node + 1, mid + 1, r, lo, hi, delta);
  max_[node] = std::max(max_[2 * node], max_[2 * node + 1]) + pending_[node];
}

std::int32_t WindowMaxTree::value(std::size_t i) const {
  std::size_t node = 1;
  std::size_t l = 0;
  std::size_t r = size_ - 1;
  std::int32_t carried = 0;
  while (l != r) {
    carried += pending_[node];
    const std::size_t mid = (l + r) / 2;
    if (i <= mid) {
      node = 2 * node;
      r = mid;
    } else {
      node = 2 * node + 1;
      l = mid + 1;
    }
  }
  return max_[node] + carried;
}

std::optional<WindowMaxTree::Hit> WindowMaxTree::rightmost_at_least(std::size_t lo, std::size_t hi,
                                                                      std::int64_t bound) const {
  if (lo > hi || hi >= size_) return std::nullopt;
  return search(1, 0, size_ - 1, lo, hi, bound, 0);
}

std::optional<WindowMaxTree::Hit> WindowMaxTree::search(std::size_t node, std::size_t l, std::size_t r,
                                                          std::size_t lo, std::size_t hi, std::int64_t bound,
                                                          std::int64_t carried) const {
  if (r < lo || l > hi || max_[node] + carried < bound) return std::nullopt;
  if (l == r) return Hit{l, static_cast<std::int32_t>(max_[node] + carried)};
  const std::int64_t below = carried + pending_[node];
  const std::size_t mid = (l + r) / 2;
  if (auto hit = search(2 * node + 1, mid + 1, r, lo, hi, bound, below)) return hit;
  return search(2 * node, l, mid, lo, hi, bound, below);
}

}  // namespace detail

FPiIncumbent::FPiIncumbent(FPiInstance instance, BitString x) : Incumbent(std::move(x)), inst_(std::move(instance)) {
  if (x_.size() != inst_.n()) throw InvalidArgument("FPiIncumbent: length mismatch");
  const auto b = inst_.sequence().entries();
  const std::size_t ell = inst_.ell();
  const std::size_t windows = inst_.window_count();
  std::vector<std::int32_t> inside(windows);
  std::int32_t count = 0;
  for (std::size_t k = 0; k < ell; ++k) count += x_.test_offset(b[k] - 1) ? 0 : 1;
  for (std::size_t i = 0; i < windows; ++i) {
    inside[i] = count;
    if (i + 1 == windows) break;
    count -= x_.test_offset(b[i] - 1) ? 0 : 1;
    count += x_.test_offset(b[i + ell] - 1) ? 0 : 1;
  }
  tree_ = detail::WindowMaxTree(inside);
  zeros_ = x_.count_zeros();
  const std::size_t margin = inst_.params().end_margin;
  on_path_end_ = windows > margin + 1 ? windows - margin - 1 : 0;
  locate();
}

void FPiIncumbent::locate() {
  const auto bound = static_cast<std::int64_t>(zeros_) - static_cast<std::int64_t>(inst_.alpha_threshold());
  if (const auto hit = tree_.rightmost_at_least(0, tree_.size() - 1, bound)) {
    level_ = hit->index;
    tier_ = level_ < on_path_end_ ? Tier::OnPath : Tier::PastPath;
  } else {
    level_ = 0;
    tier_ = Tier::PrePath;
  }
}

void FPiIncumbent::classify(std::span<const std::uint32_t> flips) {
  scratch_.clear();
  for (const std::uint32_t k : flips) scratch_.push_back(Flip{k, x_.test_offset(k)});
}

std::optional<std::size_t> FPiIncumbent::slot_in_window(std::uint32_t pos, std::size_t window) const {
  const auto occ = inst_.occurrences(pos + 1);
  const auto it = std::lower_bound(occ.begin(), occ.end(), static_cast<std::uint32_t>(window));
  if (it == occ.end() || *it >= window + inst_.ell()) return std::nullopt;
  return *it - window;
}

std::optional<std::size_t> FPiIncumbent::find_level(std::size_t lo, std::int64_t zeros_after,
                                                    std::size_t down) const {
  const std::int64_t needed = zeros_after - static_cast<std::int64_t>(inst_.alpha_threshold());
  // A window gains at most `down` zeros, so weaker ones cannot qualify.
  const std::int64_t bound = needed - static_cast<std::int64_t>(down);
  std::size_t hi = tree_.size() - 1;
  while (true) {
    const auto hit = tree_.rightmost_at_least(lo, hi, bound);
    if (!hit) return std::nullopt;
    std::int64_t inside = hit->value;
    for (const Flip& f : scratch_) {
      if (slot_in_window(f.offset, hit->index)) inside += f.to_zero ? 1 : -1;
    }
    if (inside >= needed) return hit->index;
    if (hit->index == lo) return std::nullopt;
    hi = hit->index - 1;
  }
}

int FPiIncumbent::heaviest_flip(std::size_t window, PermutationContext ctx, std::uint64_t k) {
  if (!cached_perm_ || cached_ctx_ != ctx || cached_k_ != k) {
    cached_perm_ = inst_.permutations().get(ctx, k);
    cached_ctx_ = ctx;
    cached_k_ = k;
  }
  std::uint32_t best_rank = std::numeric_limits<std::uint32_t>::max();
  int sign = 0;
  for (const Flip& f : scratch_) {
    if (const auto slot = slot_in_window(f.offset, window)) {
      const std::uint32_t rank = cached_perm_->rank_of_slot[*slot];
      if (rank < best_rank) {
        best_rank = rank;
        sign = f.to_zero ? -1 : 1;
      }
    }
  }
  return sign;
}

void FPiIncumbent::apply(std::span<const Flip> flips) {
  const std::size_t ell = inst_.ell();
  const std::size_t last = tree_.size() - 1;
  for (const Flip& f : flips) {
    const std::int32_t delta = f.to_zero ? 1 : -1;
    for (const std::uint32_t j : inst_.occurrences(f.offset + 1)) {
      const std::size_t lo = j + 1 >= ell ? j + 1 - ell : 0;
      tree_.add(lo, std::min<std::size_t>(j, last), delta);
    }
    zeros_ = f.to_zero ? zeros_ + 1 : zeros_ - 1;
  }
}

bool FPiIncumbent::offer(const BitString& offspring, std::span<const std::uint32_t> flips) {
  if (flips.empty()) return true;
  classify(flips);
  std::size_t down = 0;
  for (const Flip& f : scratch_) down += f.to_zero ? 1 : 0;
  const std::size_t up = scratch_.size() - down;
  // Only 1->0 flips: the offspring is dominated, hence strictly worse.
  if (up == 0) return false;

  const auto zeros_after = static_cast<std::int64_t>(zeros_ + down) - static_cast<std::int64_t>(up);
  bool accept = false;
  std::optional<std::size_t> found;
  switch (tier_) {
    case Tier::PastPath:
      found = find_level(on_path_end_, zeros_after, down);
      accept = found && up >= down;
      break;
    case Tier::OnPath:
      found = find_level(level_, zeros_after, down);
      if (found) {
        accept = *found > level_ || heaviest_flip(level_, PermutationContext::OnPath, level_ + 1) >= 0;
      }
      break;
    case Tier::PrePath: {
      found = find_level(0, zeros_after, down);
      if (found) {
        accept = true;
        break;
      }
      std::int64_t major_change = 0;
      for (const Flip& f : scratch_) {
        if (!slot_in_window(f.offset, 0)) major_change += f.to_zero ? -1 : 1;
      }
      if (major_change != 0) {
        accept = major_change > 0;
      } else {
        const std::size_t outside_zeros = zeros_ - static_cast<std::size_t>(tree_.value(0));
        const std::uint64_t major = (inst_.n() - inst_.ell()) - outside_zeros;
        accept = heaviest_flip(0, PermutationContext::PrePath, major) >= 0;
      }
      break;
    }
  }
  if (!accept) return false;

  apply(scratch_);
  x_ = offspring;
  if (found) {
    level_ = *found;
    tier_ = level_ < on_path_end_ ? Tier::OnPath : Tier::PastPath;
  }
  return true;
}

void FPiIncumbent::adopt(const BitString& offspring, std::span<const std::uint32_t> flips) {
  classify(flips);
  apply(scratch_);
  x_ = offspring;
  locate();
}

std::optional<PathView> FPiIncumbent::path_view() const {
  PathView pv;
  pv.tier = static_cast<int>(tier_);
  pv.level = level_ + 1;
  pv.zeros_in_window = static_cast<std::size_t>(tree_.value(level_));
  pv.zeros_outside_window = zeros_ - pv.zeros_in_window;
  return pv;
}

}  // namespace monolab
