#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace dime {

// A table cell. RawNumber carries an already-exact decimal rendering (used for
// micro-unit amounts) that is emitted unquoted in every format.
struct RawNumber {
  std::string text;
};
using Cell = std::variant<std::int64_t, double, bool, std::string, RawNumber>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

namespace detail {

inline std::string format_double(double v, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, v);
  return buf;
}

inline bool csv_needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

inline std::string csv_escape(const std::string& s) {
  if (!csv_needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace detail

// CSV with a header row; floating-point cells carry 12 significant digits.
inline void write_csv(const ResultTable& table, std::ostream& os) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) os << ',';
    os << detail::csv_escape(table.columns[i]);
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::int64_t>) {
              os << v;
            } else if constexpr (std::is_same_v<T, double>) {
              os << detail::format_double(v, 12);
            } else if constexpr (std::is_same_v<T, bool>) {
              os << (v ? "true" : "false");
            } else if constexpr (std::is_same_v<T, RawNumber>) {
              os << v.text;
            } else {
              os << detail::csv_escape(v);
            }
          },
          row[i]);
    }
    os << '\n';
  }
}

// JSON-lines, one object per row, full double precision.
inline void write_jsonl(const ResultTable& table, std::ostream& os) {
  for (const auto& row : table.rows) {
    os << '{';
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << detail::json_escape(table.columns[i]) << ':';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::int64_t>) {
              os << v;
            } else if constexpr (std::is_same_v<T, double>) {
              if (std::isfinite(v)) {
                os << detail::format_double(v, 17);
              } else {
                os << detail::json_escape(detail::format_double(v, 17));
              }
            } else if constexpr (std::is_same_v<T, bool>) {
              os << (v ? "true" : "false");
            } else if constexpr (std::is_same_v<T, RawNumber>) {
              os << v.text;
            } else {
              os << detail::json_escape(v);
            }
          },
          row[i]);
    }
    os << "}\n";
  }
}

}  // namespace dime
