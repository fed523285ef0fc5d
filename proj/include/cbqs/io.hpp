#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cbqs::io {

// Writes to a sibling temporary file and renames it into place, so readers
// never observe a truncated file.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

std::string read_file(const std::filesystem::path& path);

// Splits on runs of whitespace.
std::vector<std::string> split_ws(std::string_view line);

// Strips a trailing '#' comment and surrounding whitespace.
std::string_view strip_comment(std::string_view line);

std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace cbqs::io
