#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace semnet::io {

using CsvRow = std::vector<std::string>;

/// RFC-4180 reader: quoted fields may contain commas, doubled quotes and line
/// breaks. A leading UTF-8 BOM is skipped. Blank lines are ignored.
std::vector<CsvRow> parse_csv(std::string_view text);

/// Quotes a field only when it contains a comma, quote, or line break.
std::string csv_field(std::string_view value);
std::string csv_line(const CsvRow& fields);

/// Shortest round-trip decimal form of a double ("%.17g" trimmed); stable
/// across runs, which keeps exported bundles byte-identical.
std::string format_double(double value);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
/// Writes to a sibling temporary then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view data);

std::string to_lower_ascii(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace semnet::io
