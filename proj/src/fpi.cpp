#include "monolab/fpi.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "io_util.hpp"
#include "monolab/error.hpp"
#include "monolab/fpi_incumbent.hpp"

namespace monolab {

namespace {

std::string context_name(PermutationContext ctx) { return ctx == PermutationContext::PrePath ? "pre" : "on"; }

std::size_t zeros_in(const BitString& x, std::span<const std::uint32_t> positions) {
  std::size_t zeros = 0;
  for (const std::uint32_t p : positions) zeros += x.test_offset(p - 1) ? 0 : 1;
  return zeros;
}

std::vector<std::uint8_t> window_word(const FPiInstance& inst, const BitString& x, std::size_t level,
                                      PermutationContext ctx, std::uint64_t k) {
  const auto perm = inst.permutations().get(ctx, k);
  const auto window = inst.sequence().window(level);
  std::vector<std::uint8_t> word(window.size());
  for (std::size_t r = 0; r < window.size(); ++r) {
    word[r] = x.test_offset(window[perm->slot_of_rank[r]] - 1) ? 1 : 0;
  }
  return word;
}

BigNatural word_value(const std::vector<std::uint8_t>& word) {
  BigNatural v = 0;
  for (const std::uint8_t bit : word) {
    v <<= 1;
    v += bit;
  }
  return v;
}

BigNatural power_of_two(std::size_t e) {
  BigNatural v = 1;
  v <<= static_cast<unsigned>(e);
  return v;
}

}  // namespace

PermutationSupply::PermutationSupply(std::uint64_t seed, std::size_t ell, std::size_t cache_capacity)
    : seed_(seed), ell_(ell), capacity_(std::max<std::size_t>(cache_capacity, 1)) {
  if (ell == 0) throw InvalidArgument("PermutationSupply: ell must be positive");
}

SlotPermutation PermutationSupply::generate(PermutationContext ctx, std::uint64_t k) const {
  SeededGenerator gen(seed_, "permutation/" + context_name(ctx) + "#" + std::to_string(k));
  SlotPermutation perm;
  perm.slot_of_rank.resize(ell_);
  std::iota(perm.slot_of_rank.begin(), perm.slot_of_rank.end(), 0U);
  for (std::size_t r = ell_ - 1; r > 0; --r) {
    std::swap(perm.slot_of_rank[r], perm.slot_of_rank[gen.below(r + 1)]);
  }
  perm.rank_of_slot.resize(ell_);
  for (std::size_t r = 0; r < ell_; ++r) perm.rank_of_slot[perm.slot_of_rank[r]] = static_cast<std::uint32_t>(r);
  return perm;
}

std::shared_ptr<const SlotPermutation> PermutationSupply::get(PermutationContext ctx, std::uint64_t k) const {
  auto& cache = cache_[static_cast<int>(ctx)];
  {
    const std::lock_guard lock(mutex_);
    if (const auto it = cache.find(k); it != cache.end()) return it->second;
  }
  auto perm = std::make_shared<const SlotPermutation>(generate(ctx, k));
  const std::lock_guard lock(mutex_);
  if (cache.size() >= capacity_) cache.clear();
  cache.emplace(k, perm);
  return perm;
}

std::vector<std::uint32_t> permutation_for(const PermutationSupply& supply, PermutationContext ctx, std::uint64_t k) {
  auto perm = supply.get(ctx, k);
  std::vector<std::uint32_t> out(perm->slot_of_rank.size());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = perm->slot_of_rank[r] + 1;
  return out;
}

FPiInstance FPiInstance::build(const FPiParams& params) {
  const ConstructionParams construction =
      parameters_with_length(params.n, params.beta, params.gamma, params.length);
  SeededGenerator gen(params.seed, "construction");
  return FPiInstance(params, build_window_sequence(construction, std::nullopt, gen));
}

FPiInstance::FPiInstance(const FPiParams& params, WindowSequence sequence) {
  if (!(params.alpha > 0.0 && params.alpha < params.beta)) throw InvalidArgument("need 0 < alpha < beta");
  auto data = std::make_shared<Data>();
  data->params = params;
  data->construction = parameters_with_length(params.n, params.beta, params.gamma, params.length);
  if (sequence.n() != params.n || sequence.ell() != data->construction.ell || sequence.length() != params.length) {
    throw InvalidArgument("window sequence does not match instance parameters");
  }
  data->sequence = std::move(sequence);
  data->alpha_threshold = static_cast<std::size_t>(std::floor(params.alpha * static_cast<double>(params.n)));
  data->permutations = std::make_unique<PermutationSupply>(params.seed, data->construction.ell);

  const auto entries = data->sequence.entries();
  data->occurrence_start.assign(params.n + 1, 0);
  for (const std::uint32_t b : entries) ++data->occurrence_start[b];
  std::partial_sum(data->occurrence_start.begin(), data->occurrence_start.end(), data->occurrence_start.begin());
  data->occurrence_index.resize(entries.size());
  std::vector<std::uint32_t> fill(data->occurrence_start.begin(), data->occurrence_start.end() - 1);
  for (std::size_t j = 0; j < entries.size(); ++j) {
    data->occurrence_index[fill[entries[j] - 1]++] = static_cast<std::uint32_t>(j);
  }
  data_ = std::move(data);
}

std::span<const std::uint32_t> FPiInstance::occurrences(std::size_t position) const {
  const std::uint32_t begin = position == 1 ? 0 : data_->occurrence_start[position - 1];
  const std::uint32_t end = data_->occurrence_start[position];
  return std::span<const std::uint32_t>(data_->occurrence_index).subspan(begin, end - begin);
}

LevelView level_of(const FPiInstance& inst, const BitString& x) {
  if (x.size() != inst.n()) throw InvalidArgument("level_of: length mismatch");
  const auto b = inst.sequence().entries();
  const std::size_t ell = inst.ell();
  const std::size_t windows = inst.window_count();
  const std::size_t zeros = x.count_zeros();
  const std::size_t allowance = inst.alpha_threshold();

  std::size_t inside = zeros_in(x, b.subspan(0, ell));
  const std::size_t first_inside = inside;
  LevelView view;
  for (std::size_t i = 0;; ++i) {
    if (zeros - inside <= allowance) {
      view.empty = false;
      view.i_star = i + 1;
      view.zeros_inside = inside;
    }
    if (i + 1 == windows) break;
    inside -= x.test_offset(b[i] - 1) ? 0 : 1;
    inside += x.test_offset(b[i + ell] - 1) ? 0 : 1;
  }
  if (view.empty) view.zeros_inside = first_inside;
  view.zeros_outside = zeros - view.zeros_inside;
  return view;
}

FitnessKey fitness_key(const FPiInstance& inst, const BitString& x) {
  const LevelView view = level_of(inst, x);
  FitnessKey key;
  if (view.empty) {
    key.tier = Tier::PrePath;
    key.major = (inst.n() - inst.ell()) - view.zeros_outside;
    key.window_word = window_word(inst, x, 1, PermutationContext::PrePath, key.major);
  } else if (inst.on_path(view.i_star)) {
    key.tier = Tier::OnPath;
    key.major = view.i_star;
    key.window_word = window_word(inst, x, view.i_star, PermutationContext::OnPath, view.i_star);
  } else {
    key.tier = Tier::PastPath;
    key.major = x.count_ones();
  }
  return key;
}

PathView path_view_of(const FPiInstance& inst, const BitString& x) {
  const LevelView view = level_of(inst, x);
  PathView pv;
  pv.tier = view.empty ? 0 : (inst.on_path(view.i_star) ? 1 : 2);
  pv.level = view.empty ? 1 : view.i_star;
  pv.zeros_in_window = view.zeros_inside;
  pv.zeros_outside_window = view.zeros_outside;
  return pv;
}

BigNatural exact_value(const FPiInstance& inst, const BitString& x) {
  if (x.size() != inst.n()) throw InvalidArgument("exact_value: length mismatch");
  const std::size_t n = inst.n();
  const std::size_t zeros = x.count_zeros();
  const auto& seq = inst.sequence();

  std::optional<std::size_t> i_star;
  for (std::size_t i = 1; i <= seq.window_count(); ++i) {
    if (zeros - zeros_in(x, seq.window(i)) <= inst.alpha_threshold()) i_star = i;
  }

  const BigNatural step0 = power_of_two(n);
  const BigNatural step1 = power_of_two(2 * n);
  const BigNatural tier2_base = BigNatural(seq.length()) * power_of_two(3 * n);

  BigNatural value;
  if (!i_star) {
    std::vector<bool> in_first(n, false);
    for (const std::uint32_t p : seq.window(1)) in_first[p - 1] = true;
    std::uint64_t ones_outside = 0;
    for (std::size_t k = 0; k < n; ++k) ones_outside += (!in_first[k] && x.test_offset(k)) ? 1 : 0;
    const BigNatural window =
        word_value(window_word(inst, x, 1, PermutationContext::PrePath, ones_outside));
    if (window >= step0) throw InvariantViolation("exact_value: pre-path window term reaches 2^n");
    value = BigNatural(ones_outside) * step0 + window;
    if (value >= step1) throw InvariantViolation("exact_value: pre-path value reaches 2^{2n}");
  } else if (inst.on_path(*i_star)) {
    const BigNatural window = word_value(window_word(inst, x, *i_star, PermutationContext::OnPath, *i_star));
    if (window >= step1) throw InvariantViolation("exact_value: on-path window term reaches 2^{2n}");
    value = BigNatural(*i_star) * step1 + window;
    if (value < step1 || value >= tier2_base) throw InvariantViolation("exact_value: on-path value out of range");
  } else {
    value = tier2_base + x.count_ones();
  }
  return value;
}

PathInvariantResult check_path_invariant(const FPiInstance& inst, const BitString& x) {
  const LevelView view = level_of(inst, x);
  PathInvariantResult result;
  result.i_star = view.i_star;
  result.zeros_outside = view.zeros_outside;
  if (view.empty || !inst.on_path(view.i_star)) {
    result.status = PathInvariantStatus::NotApplicable;
  } else {
    result.status = view.zeros_outside == inst.alpha_threshold() ? PathInvariantStatus::Checked
                                                                 : PathInvariantStatus::Violation;
  }
  return result;
}

FPiFunction::FPiFunction(FPiInstance instance, bool incremental)
    : instance_(std::move(instance)), incremental_(incremental) {}

std::strong_ordering FPiFunction::compare(const BitString& x, const BitString& y) const {
  return fitness_key(instance_, x) <=> fitness_key(instance_, y);
}

std::unique_ptr<Incumbent> FPiFunction::make_incumbent(BitString x) const {
  if (!incremental_) return PseudoBooleanFunction::make_incumbent(std::move(x));
  return std::make_unique<FPiIncumbent>(instance_, std::move(x));
}

void save_instance_descriptor(const std::filesystem::path& path, const FPiParams& params,
                              const std::string& window_file) {
  detail::atomic_write(
      path,
      [&](std::ostream& out) {
        out.precision(17);
        out << "n=" << params.n << '\n'
            << "alpha=" << params.alpha << '\n'
            << "beta=" << params.beta << '\n'
            << "gamma=" << params.gamma << '\n'
            << "length=" << params.length << '\n'
            << "seed=" << params.seed << '\n'
            << "end_margin=" << params.end_margin << '\n'
            << "window_file=" << window_file << '\n';
      },
      false);
}

FPiInstance load_instance_descriptor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance descriptor " + path.string());
  std::map<std::string, std::string> fields;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("malformed descriptor line: " + line);
    fields[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    const auto it = fields.find(key);
    if (it == fields.end()) throw IoError("descriptor lacks field " + key);
    return it->second;
  };
  FPiParams params;
  try {
    params.n = std::stoull(need("n"));
    params.alpha = std::stod(need("alpha"));
    params.beta = std::stod(need("beta"));
    params.gamma = std::stod(need("gamma"));
    params.length = std::stoull(need("length"));
    params.seed = std::stoull(need("seed"));
    params.end_margin = fields.contains("end_margin") ? std::stoull(fields["end_margin"]) : 0;
  } catch (const std::logic_error&) {
    throw IoError("descriptor has a non-numeric field");
  }
  std::filesystem::path window_path = need("window_file");
  if (window_path.is_relative()) window_path = path.parent_path() / window_path;
  return FPiInstance(params, load_window_sequence(window_path));
}

}  // namespace monolab
