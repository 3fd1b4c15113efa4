#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace specsense {

/// A rectangular table of text cells with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a named column; throws std::out_of_range if absent.
  std::size_t column(const std::string &name) const;
  /// Column parsed as numbers; throws std::invalid_argument on bad cells.
  std::vector<double> numeric(const std::string &name) const;
  void add_row(std::vector<std::string> row);
};

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
std::string format_number(double value);
std::string format_number(long long value);

/// RFC 4180 output: CRLF line ends, fields quoted when they contain a
/// comma, quote, CR or LF, with embedded quotes doubled.
std::string to_csv(const CsvTable &table);
/// Inverse of to_csv; accepts LF or CRLF. Throws std::invalid_argument on
/// an unterminated quote or a row whose width differs from the header.
CsvTable parse_csv(const std::string &text);

void write_text(const std::filesystem::path &path, const std::string &text);
std::string read_text(const std::filesystem::path &path);

} // namespace specsense
