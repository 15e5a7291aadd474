#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace noderank::io {

/// Reads a whole file; gzip-compressed input is inflated transparently.
/// Throws DataError naming the path when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Formats with `%.<digits>g`.
std::string format_real(double value, int digits);

}  // namespace noderank::io
