#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace monolab {

/// Header, data rows, then '#'-prefixed trailing comment lines.
struct CsvReport {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;
};

/// Shortest round-trippable-enough text for a real ("%.10g"); integral
/// values print without a fraction.
[[nodiscard]] std::string format_real(double v);

/// Throws InvalidArgument if some row's width differs from the header's
/// or a field contains a separator, quote or newline.
void validate_report(const CsvReport& report);

/// Comma-separated, '\n' line endings.
void write_csv(std::ostream& out, const CsvReport& report);

/// Validates, then writes atomically (temp file + rename). Throws IoError.
void emit_csv(const CsvReport& report, const std::filesystem::path& path);

}  // namespace monolab
