#include "gaussbell/csv.hpp"

#include "gaussbell/errors.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace gaussbell {

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw InvalidInput("unknown column: " + name);
}

double Table::number(std::size_t row, const std::string& column) const {
  const Cell& c = rows.at(row).at(column_index(column));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? 1.0 : 0.0;
  return std::numeric_limits<double>::quiet_NaN();
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_cell(const Table::Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "1" : "0"; }
    std::string operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, c);
}

void write_csv(std::ostream& os, const Table& t, const ConfigEcho& config) {
  for (const auto& [k, v] : config) os << "# " << k << '=' << v << '\n';
  for (const auto& c : t.columns) os << c << ',';
  os << "format_version\n";
  for (const auto& row : t.rows) {
    for (const auto& cell : row) os << format_cell(cell) << ',';
    os << kFormatVersion << '\n';
  }
}

}  // namespace gaussbell
