#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace qnbm::io {

/// Writes `content` to `<path>.tmp` and renames it over `path`, so a reader
/// sees either the old file or the complete new one.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

/// Parses text produced by format_double; throws std::invalid_argument.
double parse_double(std::string_view text);

using CsvRow = std::vector<std::string>;

/// RFC 4180 quoting for fields containing a comma, quote or newline.
std::string csv_line(const CsvRow& fields);

/// Splits CSV text into rows; handles the quoting produced by csv_line.
std::vector<CsvRow> parse_csv(std::string_view text);

}  // namespace qnbm::io
