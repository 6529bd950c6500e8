#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace lopt {

// Shortest round-trip decimal form, '.' separator, independent of locale.
std::string format_number(double x);
double parse_number(std::string_view text);

using Cell = std::variant<double, std::int64_t, std::string>;

// Plain column table shared by every CSV export.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> metadata; // written as '# key: value'

  void add_row(std::vector<Cell> row);
};

std::string to_string(const Cell& c);
void write_csv(std::ostream& os, const Table& table);

} // namespace lopt
