#include "monolab/windows.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "io_util.hpp"
#include "monolab/error.hpp"

namespace monolab {

namespace {

void check_beta_gamma(double beta, double gamma) {
  if (!(beta > 0.0 && beta < 0.5)) throw InvalidArgument("beta must lie in (0, 1/2)");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("gamma must lie in (0, 1)");
}

ConstructionParams base_params(std::size_t n, double beta, double gamma) {
  check_beta_gamma(beta, gamma);
  if (n == 0) throw InvalidArgument("n must be positive");
  ConstructionParams p;
  p.n = n;
  p.beta = beta;
  p.gamma = gamma;
  p.rho = beta / (1.0 - 2.0 * beta);
  p.ell = static_cast<std::size_t>(std::floor(beta * static_cast<double>(n)));
  return p;
}

// Order-statistics over the currently selectable positions [n].
class AvailablePositions {
 public:
  explicit AvailablePositions(std::size_t n) : n_(n), tree_(n + 1, 0) {
    for (std::size_t i = 1; i <= n; ++i) {
      tree_[i] += 1;
      const std::size_t parent = i + (i & (~i + 1));
      if (parent <= n) tree_[parent] += tree_[i];
    }
    count_ = n;
    top_ = std::bit_floor(n);
  }

  [[nodiscard]] std::size_t count() const noexcept { return count_; }

  void add(std::size_t pos, int delta) {
    count_ = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(count_) + delta);
    for (std::size_t i = pos; i <= n_; i += i & (~i + 1)) tree_[i] += delta;
  }

  // 1-based position of the (rank+1)-th available entry.
  [[nodiscard]] std::size_t select(std::size_t rank) const {
    std::size_t pos = 0;
    auto remaining = static_cast<int>(rank);
    for (std::size_t step = top_; step != 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next <= n_ && tree_[next] <= remaining) {
        pos = next;
        remaining -= tree_[next];
      }
    }
    return pos + 1;
  }

 private:
  std::size_t n_;
  std::vector<int> tree_;
  std::size_t count_ = 0;
  std::size_t top_ = 1;
};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> buf{};
  for (std::size_t k = 0; k < 8; ++k) buf[k] = static_cast<char>((v >> (8 * k)) & 0xFFU);
  out.write(buf.data(), buf.size());
}

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> buf{};
  for (std::size_t k = 0; k < 4; ++k) buf[k] = static_cast<char>((v >> (8 * k)) & 0xFFU);
  out.write(buf.data(), buf.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> buf{};
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) throw IoError("window file truncated in header");
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < 8; ++k) v |= std::uint64_t{buf[k]} << (8 * k);
  return v;
}

constexpr std::string_view kMagic = "WSEQ1";

}  // namespace

ConstructionParams theoretical_parameters(std::size_t n, double beta, double gamma) {
  ConstructionParams p = base_params(n, beta, gamma);
  if (!(p.rho < p.gamma)) {
    throw InvalidArgument("theoretical_parameters: need rho < gamma, got rho = " + std::to_string(p.rho) +
                          ", gamma = " + std::to_string(gamma));
  }
  const double diff = gamma - p.rho;
  const double exponent = diff * diff * (1.0 - 2.0 * beta) * static_cast<double>(n) / 6.0;
  // Saturate instead of overflowing; such lengths cannot be materialized anyway.
  const double length = std::floor(std::exp(exponent));
  p.length = length >= 0x1.0p63 ? (std::uint64_t{1} << 63) : static_cast<std::uint64_t>(length);
  p.window_count = static_cast<std::int64_t>(p.length) - static_cast<std::int64_t>(p.ell) + 1;
  return p;
}

ConstructionParams parameters_with_length(std::size_t n, double beta, double gamma, std::uint64_t length) {
  ConstructionParams p = base_params(n, beta, gamma);
  if (p.ell < 1) throw InvalidArgument("floor(beta n) must be at least 1");
  if (length < p.ell) throw InvalidArgument("path length L must be at least ell = " + std::to_string(p.ell));
  p.length = length;
  p.window_count = static_cast<std::int64_t>(length) - static_cast<std::int64_t>(p.ell) + 1;
  return p;
}

WindowSequence::WindowSequence(std::size_t n, std::size_t ell, std::vector<std::uint32_t> entries)
    : n_(n), ell_(ell), entries_(std::move(entries)) {
  if (ell_ < 1 || entries_.size() < ell_) throw InvalidArgument("WindowSequence: need 1 <= ell <= L");
  for (const std::uint32_t b : entries_) {
    if (b < 1 || b > n_) throw InvalidArgument("WindowSequence: entry outside [n]");
  }
}

std::span<const std::uint32_t> WindowSequence::window(std::size_t i) const {
  if (i < 1 || i > window_count()) throw InvalidArgument("WindowSequence::window: index outside [L']");
  return std::span<const std::uint32_t>(entries_).subspan(i - 1, ell_);
}

WindowSequence build_window_sequence(const ConstructionParams& params, std::optional<std::uint64_t> length_override,
                                     SeededGenerator& gen) {
  const std::size_t n = params.n;
  const std::size_t ell = params.ell;
  if (ell < 1) throw InvalidArgument("build_window_sequence: ell must be at least 1");
  if (n <= 2 * ell) throw InvalidArgument("build_window_sequence: need n > 2 ell");
  const std::uint64_t length = length_override.value_or(params.length);
  if (length < ell) throw InvalidArgument("build_window_sequence: need L >= ell");
  if (length > std::uint64_t{1} << 32) throw InvalidArgument("build_window_sequence: L too large to materialize");

  std::vector<std::uint32_t> entries;
  entries.reserve(length);
  AvailablePositions available(n);
  for (std::uint64_t i = 0; i < length; ++i) {
    const std::size_t pos = available.select(gen.below(available.count()));
    entries.push_back(static_cast<std::uint32_t>(pos));
    available.add(pos, -1);
    // The next entry must avoid only the last ell - 1 chosen ones.
    if (i + 1 >= ell) available.add(entries[i + 1 - ell], +1);
  }
  return WindowSequence(n, ell, std::move(entries));
}

WindowReport verify_window_properties(const WindowSequence& seq, double gamma, VerifyMode mode,
                                      std::uint64_t sample_pairs, SeededGenerator& gen) {
  const std::size_t n = seq.n();
  const std::size_t ell = seq.ell();
  const std::size_t windows = seq.window_count();
  const auto b = seq.entries();
  if (mode == VerifyMode::Exact && windows > kMaxExactVerifyWindows) {
    throw InvalidArgument("verify_window_properties: exact mode needs L' <= " +
                          std::to_string(kMaxExactVerifyWindows));
  }

  WindowReport report;
  report.overlap_limit = gamma * static_cast<double>(ell);

  // Distinctness: slide one window across the sequence with multiplicities.
  {
    std::vector<std::uint32_t> count(n + 1, 0);
    std::size_t duplicates = 0;
    for (std::size_t k = 0; k < ell; ++k) {
      if (count[b[k]]++ > 0) ++duplicates;
    }
    for (std::size_t i = 0; i < windows; ++i) {
      if (duplicates > 0) {
        report.distinct_windows = false;
        report.repeated_window = i + 1;
        break;
      }
      if (i + 1 == windows) break;
      if (--count[b[i]] > 0) --duplicates;
      if (count[b[i + ell]]++ > 0) ++duplicates;
    }
  }

  auto record = [&](std::size_t overlap, std::size_t i, std::size_t j) {
    ++report.pairs_checked;
    if (!report.worst_pair || overlap > report.max_overlap) {
      report.max_overlap = overlap;
      report.worst_pair = WindowPair{i + 1, j + 1};
    }
  };

  if (windows <= ell) {
    report.overlap_bounded = true;
    return report;
  }

  if (mode == VerifyMode::Exact) {
    // For each offset d >= ell, slide the pair (B_i, B_{i+d}) and maintain
    // the number of distinct common positions in O(1) per step.
    std::vector<std::uint32_t> in_a(n + 1, 0);
    std::vector<std::uint32_t> in_b(n + 1, 0);
    for (std::size_t d = ell; d < windows; ++d) {
      std::fill(in_a.begin(), in_a.end(), 0);
      std::fill(in_b.begin(), in_b.end(), 0);
      std::size_t overlap = 0;
      for (std::size_t k = 0; k < ell; ++k) ++in_a[b[k]];
      for (std::size_t k = 0; k < ell; ++k) {
        if (in_b[b[d + k]]++ == 0 && in_a[b[d + k]] > 0) ++overlap;
      }
      record(overlap, 0, d);
      for (std::size_t i = 0; i + d + 1 < windows; ++i) {
        const std::uint32_t a_out = b[i];
        const std::uint32_t a_in = b[i + ell];
        const std::uint32_t b_out = b[i + d];
        const std::uint32_t b_in = b[i + d + ell];
        if (--in_a[a_out] == 0 && in_b[a_out] > 0) --overlap;
        if (in_a[a_in]++ == 0 && in_b[a_in] > 0) ++overlap;
        if (--in_b[b_out] == 0 && in_a[b_out] > 0) --overlap;
        if (in_b[b_in]++ == 0 && in_a[b_in] > 0) ++overlap;
        record(overlap, i + 1, i + 1 + d);
      }
    }
  } else {
    std::vector<std::uint64_t> stamp(n + 1, 0);
    std::uint64_t epoch = 0;
    for (std::uint64_t s = 0; s < sample_pairs; ++s) {
      std::size_t i = 0;
      std::size_t j = 0;
      do {
        i = gen.below(windows);
        j = gen.below(windows);
      } while ((i > j ? i - j : j - i) < ell);
      if (i > j) std::swap(i, j);
      ++epoch;
      for (std::size_t k = 0; k < ell; ++k) stamp[b[i + k]] = epoch;
      std::size_t overlap = 0;
      for (std::size_t k = 0; k < ell; ++k) {
        if (stamp[b[j + k]] == epoch) {
          ++overlap;
          stamp[b[j + k]] = 0;  // count each common position once
        }
      }
      record(overlap, i, j);
    }
  }
  report.overlap_bounded = static_cast<double>(report.max_overlap) <= report.overlap_limit;
  return report;
}

double collision_failure_bound(const ConstructionParams& params, std::uint64_t length) {
  if (!(params.rho < params.gamma)) throw InvalidArgument("collision_failure_bound: need gamma > rho");
  const double ratio = (params.gamma - params.rho) / params.rho;
  const double exponent = -ratio * ratio * params.rho * static_cast<double>(params.ell) / 3.0;
  const auto len = static_cast<double>(length);
  return len * len * std::exp(exponent);
}

void write_window_sequence(std::ostream& out, const WindowSequence& seq) {
  out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
  put_u64(out, seq.n());
  put_u64(out, seq.ell());
  put_u64(out, seq.length());
  for (const std::uint32_t b : seq.entries()) put_u32(out, b);
  if (!out) throw IoError("failed writing window sequence");
}

WindowSequence read_window_sequence(std::istream& in) {
  std::array<char, 5> magic{};
  if (!in.read(magic.data(), magic.size()) || std::string_view(magic.data(), magic.size()) != kMagic) {
    throw IoError("not a WSEQ1 window file");
  }
  const std::uint64_t n = get_u64(in);
  const std::uint64_t ell = get_u64(in);
  const std::uint64_t length = get_u64(in);
  if (length > std::uint64_t{1} << 32) throw IoError("window file declares an implausible length");
  std::vector<std::uint32_t> entries(length);
  std::vector<unsigned char> buf(4 * length);
  if (length > 0 && !in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
    throw IoError("window file truncated in entries");
  }
  for (std::size_t k = 0; k < length; ++k) {
    entries[k] = static_cast<std::uint32_t>(buf[4 * k]) | static_cast<std::uint32_t>(buf[4 * k + 1]) << 8 |
                 static_cast<std::uint32_t>(buf[4 * k + 2]) << 16 | static_cast<std::uint32_t>(buf[4 * k + 3]) << 24;
  }
  try {
    return WindowSequence(n, ell, std::move(entries));
  } catch (const InvalidArgument& e) {
    throw IoError(std::string("window file inconsistent: ") + e.what());
  }
}

void save_window_sequence(const std::filesystem::path& path, const WindowSequence& seq) {
  detail::atomic_write(path, [&](std::ostream& out) { write_window_sequence(out, seq); }, true);
}

WindowSequence load_window_sequence(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open window file " + path.string());
  return read_window_sequence(in);
}

}  // namespace monolab
