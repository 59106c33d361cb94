#pragma once

// Deterministic CSV tables: '#' comment header, comma delimiter, '.' decimal
// point, doubles with 17 significant digits independent of the locale.

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gaussbell {

inline constexpr int kFormatVersion = 1;

struct Table {
  using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::size_t column_index(const std::string& name) const;
  double number(std::size_t row, const std::string& column) const;
};

/// Shortest round-trip-safe text: 17 significant digits, "nan", "inf", "-inf".
std::string format_double(double v);
std::string format_cell(const Table::Cell& c);

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// Writes "# key=value" lines, then the header and rows with a trailing
/// format_version column.
void write_csv(std::ostream& os, const Table& t, const ConfigEcho& config = {});

}  // namespace gaussbell
