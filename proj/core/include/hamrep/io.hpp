#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hamrep::io {

/// Shortest round-trip decimal form; `inf` / `-inf` / `nan` for non-finite.
std::string format_double(double v);
/// Parses a decimal number, accepting `inf` and `+inf`. Throws InputError.
double parse_double(std::string_view s);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Comma-separated rows, whitespace trimmed, blank lines and lines starting
/// with '#' skipped.
std::vector<std::vector<std::string>> read_csv_rows(const std::filesystem::path& path);

/// True when every field of the row parses as a number.
bool is_numeric_row(const std::vector<std::string>& row);

}  // namespace hamrep::io
