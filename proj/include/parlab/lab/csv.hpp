#ifndef PARLAB_LAB_CSV_HPP
#define PARLAB_LAB_CSV_HPP

// Flat CSV tables: header row, comma separated, LF line endings, doubles at
// 17 significant digits so that files round-trip exactly.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "parlab/errors.hpp"

namespace parlab::lab {

using Cell = std::variant<std::string, long long, double>;

inline std::string format_cell(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(c));
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw ConfigError("row width does not match the header");
    rows.push_back(std::move(row));
  }

  int column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
  }

  /// Removes the named columns that are present.
  void drop(const std::vector<std::string>& names) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (std::find(names.begin(), names.end(), columns[i]) == names.end()) keep.push_back(i);
    std::vector<std::string> cols;
    for (auto i : keep) cols.push_back(columns[i]);
    for (auto& r : rows) {
      std::vector<Cell> nr;
      for (auto i : keep) nr.push_back(r[i]);
      r = std::move(nr);
    }
    columns = std::move(cols);
  }

  std::string to_csv() const {
    std::string out;
    auto line = [&out](const auto& cells, auto fmt) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += fmt(cells[i]);
      }
      out += '\n';
    };
    line(columns, [](const std::string& s) { return s; });
    for (const auto& r : rows) line(r, format_cell);
    return out;
  }
};

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot open " + path + " for writing");
  f << text;
  if (!f) throw ConfigError("failed writing " + path);
}

inline void write_csv(const std::string& path, const Table& t) { write_file(path, t.to_csv()); }

/// Text table as read back from disk; cells stay strings.
struct TextTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
  }
};

inline std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline TextTable read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path);
  TextTable t;
  std::string line;
  if (!std::getline(f, line)) throw ConfigError(path + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.columns = split_commas(line);
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_commas(line);
    if (cells.size() != t.columns.size())
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(t.columns.size()) +
                        " cells, found " + std::to_string(cells.size()));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace parlab::lab

#endif  // PARLAB_LAB_CSV_HPP
