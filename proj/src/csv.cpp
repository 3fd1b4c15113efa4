#include "specsense/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace specsense {

std::size_t CsvTable::column(const std::string &name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw std::out_of_range("no column named '" + name + "'");
}

std::vector<double> CsvTable::numeric(const std::string &name) const {
  const std::size_t c = column(name);
  std::vector<double> values;
  values.reserve(rows.size());
  for (const auto &row : rows) {
    const std::string &cell = row.at(c);
    if (cell == "nan") {
      values.push_back(std::nan(""));
      continue;
    }
    if (cell == "inf" || cell == "-inf") {
      values.push_back(cell[0] == '-' ? -INFINITY : INFINITY);
      continue;
    }
    double v = 0.0;
    const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || end != cell.data() + cell.size()) {
      throw std::invalid_argument("column '" + name + "': '" + cell + "' is not a number");
    }
    values.push_back(v);
  }
  return values;
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) {
    throw std::invalid_argument("row has " + std::to_string(row.size()) + " cells, header has " +
                                std::to_string(header.size()));
  }
  rows.push_back(std::move(row));
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string format_number(long long value) { return std::to_string(value); }

namespace {

void append_field(std::string &out, const std::string &field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) {
    out += field;
    return;
  }
  out += '"';
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
}

void append_row(std::string &out, const std::vector<std::string> &row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    append_field(out, row[i]);
  }
  out += "\r\n";
}

} // namespace

std::string to_csv(const CsvTable &table) {
  std::string out;
  append_row(out, table.header);
  for (const auto &row : table.rows) append_row(out, row);
  return out;
}

CsvTable parse_csv(const std::string &text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false; // current record has content
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (ch == '\r' || ch == '\n') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      record.push_back(std::move(field));
      field.clear();
      records.push_back(std::move(record));
      record.clear();
      any = false;
    } else {
      field += ch;
      any = true;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted field");
  if (any) {
    record.push_back(std::move(field));
    records.push_back(std::move(record));
  }
  if (records.empty()) throw std::invalid_argument("table has no header");
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw std::invalid_argument("row " + std::to_string(r) + " has " +
                                  std::to_string(records[r].size()) + " cells, header has " +
                                  std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

void write_text(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string read_text(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace specsense
