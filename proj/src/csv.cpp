#include "monolab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <system_error>

#include "io_util.hpp"
#include "monolab/error.hpp"

namespace monolab {

namespace detail {

void atomic_write(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fill, bool binary) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    try {
      fill(out);
    } catch (...) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw;
    }
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

}  // namespace detail

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void validate_report(const CsvReport& report) {
  auto check_field = [](const std::string& f) {
    if (f.find_first_of(",\"\n\r") != std::string::npos) {
      throw InvalidArgument("csv field contains a separator: " + f);
    }
  };
  for (const auto& h : report.header) check_field(h);
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    if (report.rows[r].size() != report.header.size()) {
      throw InvalidArgument("csv row " + std::to_string(r) + " has " + std::to_string(report.rows[r].size()) +
                            " fields, header has " + std::to_string(report.header.size()));
    }
    for (const auto& f : report.rows[r]) check_field(f);
  }
  for (const auto& c : report.comments) {
    if (c.find_first_of("\n\r") != std::string::npos) throw InvalidArgument("csv comment contains a newline");
  }
}

void write_csv(std::ostream& out, const CsvReport& report) {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (k > 0) out << ',';
      out << fields[k];
    }
    out << '\n';
  };
  line(report.header);
  for (const auto& row : report.rows) line(row);
  for (const auto& c : report.comments) out << "# " << c << '\n';
}

void emit_csv(const CsvReport& report, const std::filesystem::path& path) {
  validate_report(report);
  detail::atomic_write(path, [&](std::ostream& out) { write_csv(out, report); }, true);
}

}  // namespace monolab
