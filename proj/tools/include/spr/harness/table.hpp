#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace spr::harness {

using Value = std::variant<std::int64_t, double, std::string>;

// A rectangular result table with named columns.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  void add_row(std::vector<Value> row);
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  std::string text(std::size_t row, const std::string& name) const;

  // Header row plus one line per row. Doubles use 12 significant digits.
  std::string to_csv() const;
};

std::string format_value(const Value& v);

}  // namespace spr::harness
