#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>

namespace monolab::detail {

/// Writes through `fill` into a sibling temporary file and renames it over
/// `path`, so readers never observe a partial file. Throws IoError.
void atomic_write(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fill,
                  bool binary);

}  // namespace monolab::detail
