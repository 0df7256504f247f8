#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace alphaloss {

/// "%.17g": enough digits for every double to round-trip.
std::string format_double(double v);

/// Parses a full decimal token (also "inf", "-inf"); throws ParseError otherwise.
double parse_double(const std::string& token, std::size_t line = 0);

std::string read_text_file(const std::filesystem::path& path);

/// Writes every (path, contents) pair to a sibling temporary file first, then
/// renames them into place. On failure nothing new is left at the target paths.
void write_files_atomically(const std::vector<std::pair<std::filesystem::path, std::string>>& files);

/// Splits on commas, trimming ASCII whitespace around each field.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace alphaloss
