#include "monolab/config.hpp"

#include <cmath>
#include <sstream>

#include "monolab/csv.hpp"
#include "monolab/error.hpp"

namespace monolab {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    // Accept scientific shorthand such as 1e7 for whole numbers.
    if (v.find_first_of("eE.") != std::string::npos) {
      const double d = std::stod(v, &used);
      if (used != v.size() || d < 0 || d != std::floor(d)) throw std::invalid_argument(v);
      return static_cast<std::uint64_t>(d);
    }
    const auto x = std::stoull(v, &used);
    if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
    return x;
  } catch (const std::logic_error&) {
    throw ConfigError("config: " + key + " expects a nonnegative integer, got '" + v + "'");
  }
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    // Ratios such as 10/131 keep the presets exact in the echo.
    if (const auto slash = v.find('/'); slash != std::string::npos) {
      return parse_real(key, v.substr(0, slash)) / parse_real(key, v.substr(slash + 1));
    }
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::logic_error&) {
    throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
  }
}

template <typename T, typename F>
std::vector<T> parse_list(const std::string& v, F&& parse_one) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_one(item));
  }
  return out;
}

std::string real_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::uint64_t BudgetRule::budget(std::size_t n, double c) const {
  const auto nn = static_cast<double>(n);
  switch (kind) {
    case Kind::Absolute:
      return static_cast<std::uint64_t>(value);
    case Kind::NLogN:
      return static_cast<std::uint64_t>(std::ceil(value * nn * std::log(nn)));
    case Kind::N15:
      return static_cast<std::uint64_t>(std::ceil(value * nn * std::sqrt(nn)));
    case Kind::Auto:
      break;
  }
  return c < 1.0 ? static_cast<std::uint64_t>(std::ceil(30.0 * nn * std::log(nn)))
                 : static_cast<std::uint64_t>(std::ceil(30.0 * nn * std::sqrt(nn)));
}

std::string BudgetRule::to_string() const {
  switch (kind) {
    case Kind::Absolute:
      return "absolute:" + std::to_string(static_cast<std::uint64_t>(value));
    case Kind::NLogN:
      return "nlogn:" + real_text(value);
    case Kind::N15:
      return "n15:" + real_text(value);
    case Kind::Auto:
      break;
  }
  return "auto";
}

BudgetRule BudgetRule::parse(std::string_view text) {
  const std::string t = trim(text);
  BudgetRule rule;
  if (t == "auto") return rule;
  const auto colon = t.find(':');
  if (colon == std::string::npos) {
    rule.kind = Kind::Absolute;
    rule.value = static_cast<double>(parse_count("budget", t));
    return rule;
  }
  const std::string head = t.substr(0, colon);
  const std::string tail = t.substr(colon + 1);
  if (head == "absolute") {
    rule.kind = Kind::Absolute;
    rule.value = static_cast<double>(parse_count("budget", tail));
  } else if (head == "nlogn") {
    rule.kind = Kind::NLogN;
    rule.value = parse_real("budget", tail);
  } else if (head == "n15") {
    rule.kind = Kind::N15;
    rule.value = parse_real("budget", tail);
  } else {
    throw ConfigError("config: unknown budget rule '" + t + "'");
  }
  return rule;
}

std::string to_string(ExperimentKind kind) { return kind == ExperimentKind::Scaling ? "scaling" : "stagnation"; }
std::string to_string(FunctionFamily family) { return family == FunctionFamily::OneMax ? "onemax" : "fpi"; }
std::string to_string(Preset preset) {
  switch (preset) {
    case Preset::Surrogate:
      return "surrogate";
    case Preset::Literal:
      return "literal";
    case Preset::Custom:
      break;
  }
  return "custom";
}

void apply_preset(ExperimentConfig& cfg, Preset preset) {
  cfg.preset = preset;
  if (preset == Preset::Surrogate) {
    cfg.beta = 0.4;
    cfg.alpha = 0.01;
    cfg.gamma = 0.45;
    cfg.length = 10'000;
    cfg.c_values = {10.0};
  } else if (preset == Preset::Literal) {
    cfg.beta = 10.0 / 131.0;
    cfg.gamma = 20.0 / 221.0;
    cfg.alpha = 1.0 / (1000.0 * 33.0);
    cfg.length = 0;  // existence bound, resolved per n
    cfg.c_values = {33.0};
  }
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "kind") {
    if (v == "scaling") kind = ExperimentKind::Scaling;
    else if (v == "stagnation") kind = ExperimentKind::Stagnation;
    else throw ConfigError("config: unknown kind '" + v + "'");
  } else if (key == "function") {
    if (v == "onemax") function = FunctionFamily::OneMax;
    else if (v == "fpi") function = FunctionFamily::FPi;
    else throw ConfigError("config: unknown function '" + v + "'");
  } else if (key == "preset") {
    if (v == "surrogate") apply_preset(*this, Preset::Surrogate);
    else if (v == "literal") apply_preset(*this, Preset::Literal);
    else if (v == "custom") preset = Preset::Custom;
    else throw ConfigError("config: unknown preset '" + v + "'");
  } else if (key == "alpha") {
    alpha = parse_real(key, v);
  } else if (key == "beta") {
    beta = parse_real(key, v);
  } else if (key == "gamma") {
    gamma = parse_real(key, v);
  } else if (key == "length") {
    length = parse_count(key, v);
  } else if (key == "end_margin") {
    end_margin = parse_count(key, v);
  } else if (key == "n") {
    n_values = parse_list<std::size_t>(v, [&](const std::string& s) { return parse_count(key, s); });
    if (n_values.empty()) throw ConfigError("config: n list is empty");
  } else if (key == "c") {
    c_values = parse_list<double>(v, [&](const std::string& s) { return parse_real(key, s); });
    if (c_values.empty()) throw ConfigError("config: c list is empty");
  } else if (key == "replicates") {
    replicates = parse_count(key, v);
  } else if (key == "budget") {
    budget = BudgetRule::parse(v);
  } else if (key == "seed") {
    seed = parse_count(key, v);
  } else if (key == "trace_stride") {
    trace_stride = parse_count(key, v);
  } else if (key == "threads") {
    threads = parse_count(key, v);
  } else if (key == "output") {
    output = v;
  } else if (key == "trace_output") {
    trace_output = v;
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

std::vector<std::string> ExperimentConfig::echo() const {
  std::string ns;
  for (std::size_t k = 0; k < n_values.size(); ++k) ns += (k ? "," : "") + std::to_string(n_values[k]);
  std::string cs;
  for (std::size_t k = 0; k < c_values.size(); ++k) cs += (k ? "," : "") + real_text(c_values[k]);
  // preset is echoed first so that replaying it does not clobber the
  // explicit values that follow.
  return {
      "preset=" + monolab::to_string(preset),
      "kind=" + monolab::to_string(kind),
      "function=" + monolab::to_string(function),
      "alpha=" + real_text(alpha),
      "beta=" + real_text(beta),
      "gamma=" + real_text(gamma),
      "length=" + std::to_string(length),
      "end_margin=" + std::to_string(end_margin),
      "n=" + ns,
      "c=" + cs,
      "replicates=" + std::to_string(replicates),
      "budget=" + budget.to_string(),
      "seed=" + std::to_string(seed),
      "trace_stride=" + std::to_string(trace_stride),
  };
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::stringstream ss{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    cfg.set(trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig parse_config_echo(std::string_view report_text) {
  std::string body;
  std::stringstream ss{std::string(report_text)};
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind("# ", 0) != 0) continue;
    const std::string kv = line.substr(2);
    const auto eq = kv.find('=');
    if (eq == std::string::npos || kv.find_first_of(" :") < eq) continue;
    if (kv.rfind("tool_version=", 0) == 0) continue;
    body += kv;
    body += '\n';
  }
  return parse_config(body);
}

}  // namespace monolab
