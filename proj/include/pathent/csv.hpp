#pragma once

// Locale-independent CSV: one header line, ',' delimiter, '.' decimal point,
// doubles written with 17 significant digits so that reading them back is
// bit-exact.

#include <pathent/error.hpp>

#include <charconv>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace pathent::csv {

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline std::string format_int(std::int64_t v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    // from_chars rejects the words it does not produce itself in some
    // standard libraries; handle the three IEEE specials explicitly.
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw DomainError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

class Writer {
public:
  Writer(std::ostream& os, const std::vector<std::string>& header) : os_(os), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) os_ << ',';
      os_ << header[i];
    }
    os_ << '\n';
  }

  /// Writes one row of preformatted cells.
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw DomainError("CSV row width does not match header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      os_ << cells[i];
    }
    os_ << '\n';
  }

  void row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    row(cells);
  }

private:
  std::ostream& os_;
  std::size_t columns_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads a numeric table written by Writer. Every data cell must parse as a
/// double.
inline Table read(std::istream& is) {
  Table t;
  std::string line;
  if (!std::getline(is, line)) throw DomainError("CSV input is empty");
  for (auto cell : split(line)) t.header.emplace_back(cell);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.header.size()) throw DomainError("CSV row width does not match header");
    std::vector<double> r;
    r.reserve(cells.size());
    for (auto c : cells) r.push_back(parse_double(c));
    t.rows.push_back(std::move(r));
  }
  return t;
}

}  // namespace pathent::csv
