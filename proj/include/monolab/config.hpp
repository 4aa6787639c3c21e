#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace monolab {

inline constexpr std::string_view kToolVersion = "monolab 1.0.0";

enum class ExperimentKind { Scaling, Stagnation };
enum class FunctionFamily { OneMax, FPi };

/// Named parameter sets for f_Π.
///  - surrogate: beta 0.4, alpha 0.01, gamma 0.45, c = 10, L = 10^4
///  - literal: beta 10/131, gamma 20/221, alpha 1/(1000 c) with c = 33, and
///    the existence-bound L, which collapses to a single window at desk scale
///  - custom: whatever the config sets
enum class Preset { Surrogate, Literal, Custom };

/// How many generations each run may use.
struct BudgetRule {
  enum class Kind { Auto, Absolute, NLogN, N15 } kind = Kind::Auto;
  double value = 30.0;  ///< multiplier, or the absolute count

  /// Auto: 30 n ln n for c < 1 and 30 n^{3/2} otherwise.
  [[nodiscard]] std::uint64_t budget(std::size_t n, double c) const;
  [[nodiscard]] std::string to_string() const;
  static BudgetRule parse(std::string_view text);
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Scaling;
  FunctionFamily function = FunctionFamily::OneMax;
  Preset preset = Preset::Surrogate;
  double alpha = 0.01;
  double beta = 0.4;
  double gamma = 0.45;
  std::uint64_t length = 10'000;
  std::size_t end_margin = 0;
  std::vector<std::size_t> n_values{128, 256, 512, 1024};
  std::vector<double> c_values{0.5};
  std::size_t replicates = 100;
  BudgetRule budget;
  std::uint64_t seed = 1;
  std::uint64_t trace_stride = 1000;
  std::size_t threads = 1;
  std::string output;        ///< not part of the echo
  std::string trace_output;  ///< optional per-stride file for stagnation studies

  /// Sets one field from its textual form; throws ConfigError.
  void set(const std::string& key, const std::string& value);
  /// All fields affecting results, as key=value lines in a fixed order.
  [[nodiscard]] std::vector<std::string> echo() const;
};

/// Applies the preset's values over the fields it governs.
void apply_preset(ExperimentConfig& cfg, Preset preset);

/// key=value lines; blank lines and '#' comments are skipped.
[[nodiscard]] ExperimentConfig parse_config(std::string_view text);
/// Reconstructs a config from the '# key=value' echo trailing a report.
[[nodiscard]] ExperimentConfig parse_config_echo(std::string_view report_text);

[[nodiscard]] std::string to_string(ExperimentKind kind);
[[nodiscard]] std::string to_string(FunctionFamily family);
[[nodiscard]] std::string to_string(Preset preset);

}  // namespace monolab
