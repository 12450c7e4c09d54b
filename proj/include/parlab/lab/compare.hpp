#ifndef PARLAB_LAB_COMPARE_HPP
#define PARLAB_LAB_COMPARE_HPP

// Row-by-row comparison of two result tables matched on key columns.

#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "parlab/errors.hpp"
#include "parlab/lab/csv.hpp"

namespace parlab::lab {

struct CompareOptions {
  std::vector<std::string> keys;
  std::vector<std::string> columns;  // empty: every shared non-key column
  std::vector<std::pair<std::string, std::string>> where;  // row filters, applied where the column exists
  double tol = 1e-9;
};

struct Mismatch {
  std::string key;
  std::string column;
  std::string a, b;
};

struct CompareResult {
  int shared_keys = 0;
  int compared_values = 0;
  std::vector<Mismatch> mismatches;
  bool agree() const { return shared_keys > 0 && mismatches.empty(); }
};

namespace detail {

inline std::optional<double> as_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (*end != '\0') return std::nullopt;
  return v;
}

// Numeric cells match to a relative 1e-9 so that keys computed in different
// ways (lambda^3 against a typed-in value) still pair up.
inline bool same_key_cell(const std::string& a, const std::string& b) {
  if (a == b) return true;
  const auto x = as_number(a), y = as_number(b);
  if (!x || !y) return false;
  return std::abs(*x - *y) <= 1e-9 * std::max(std::abs(*x), std::abs(*y));
}

inline bool within(const std::string& a, const std::string& b, double tol) {
  if (a == b) return true;
  const auto x = as_number(a), y = as_number(b);
  if (!x || !y) return false;
  if (std::isnan(*x) || std::isnan(*y)) return std::isnan(*x) && std::isnan(*y);
  return std::abs(*x - *y) <= tol;
}

inline std::vector<const std::vector<std::string>*> filtered(const TextTable& t, const CompareOptions& o) {
  std::vector<const std::vector<std::string>*> out;
  for (const auto& r : t.rows) {
    bool keep = true;
    for (const auto& [col, value] : o.where) {
      const int c = t.column(col);
      if (c >= 0 && !same_key_cell(r[static_cast<std::size_t>(c)], value)) keep = false;
    }
    if (keep) out.push_back(&r);
  }
  return out;
}

}  // namespace detail

/// Throws ConfigError on schema problems: a missing key or value column, no
/// value column to compare, or a key that is not unique within a file.
inline CompareResult compare_tables(const TextTable& a, const TextTable& b, const CompareOptions& o) {
  if (o.keys.empty()) throw ConfigError("compare: no key columns given");
  if (!(o.tol >= 0.0)) throw ConfigError("compare: tolerance must not be negative");
  std::vector<int> ka, kb;
  for (const auto& k : o.keys) {
    ka.push_back(a.column(k));
    kb.push_back(b.column(k));
    if (ka.back() < 0 || kb.back() < 0) throw ConfigError("compare: key column '" + k + "' missing in one file");
  }
  std::vector<std::string> cols = o.columns;
  if (cols.empty()) {
    for (const auto& c : a.columns)
      if (c != "scenario" && b.column(c) >= 0 && std::find(o.keys.begin(), o.keys.end(), c) == o.keys.end())
        cols.push_back(c);
    for (const auto& [col, value] : o.where) std::erase(cols, col);
  }
  if (cols.empty()) throw ConfigError("compare: no shared value columns");
  for (const auto& c : cols)
    if (a.column(c) < 0 || b.column(c) < 0) throw ConfigError("compare: column '" + c + "' missing in one file");

  const auto ra = detail::filtered(a, o), rb = detail::filtered(b, o);
  auto key_of = [](const std::vector<std::string>& row, const std::vector<int>& idx) {
    std::vector<std::string> k;
    for (int i : idx) k.push_back(row[static_cast<std::size_t>(i)]);
    return k;
  };
  auto same_key = [](const std::vector<std::string>& x, const std::vector<std::string>& y) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!detail::same_key_cell(x[i], y[i])) return false;
    return true;
  };
  auto check_unique = [&](const auto& rows, const std::vector<int>& idx, const char* which) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = i + 1; j < rows.size(); ++j)
        if (same_key(key_of(*rows[i], idx), key_of(*rows[j], idx)))
          throw ConfigError(std::string("compare: key is not unique in file ") + which);
  };
  check_unique(ra, ka, "a");
  check_unique(rb, kb, "b");

  CompareResult res;
  for (const auto* rowa : ra) {
    const auto key = key_of(*rowa, ka);
    for (const auto* rowb : rb) {
      if (!same_key(key, key_of(*rowb, kb))) continue;
      ++res.shared_keys;
      std::string label;
      for (std::size_t i = 0; i < key.size(); ++i) label += (i ? "," : "") + o.keys[i] + "=" + key[i];
      for (const auto& c : cols) {
        const auto& va = (*rowa)[static_cast<std::size_t>(a.column(c))];
        const auto& vb = (*rowb)[static_cast<std::size_t>(b.column(c))];
        ++res.compared_values;
        if (!detail::within(va, vb, o.tol)) res.mismatches.push_back({label, c, va, vb});
      }
      break;
    }
  }
  return res;
}

}  // namespace parlab::lab

#endif  // PARLAB_LAB_COMPARE_HPP
