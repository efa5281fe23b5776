#include "spr/harness/table.hpp"

#include <cmath>
#include <cstdio>

#include "spr/errors.hpp"

namespace spr::harness {

void Table::add_row(std::vector<Value> row) {
  if (row.size() != columns.size()) throw InvalidArgument("Table: row width does not match header");
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw InvalidArgument("Table: no column named " + name);
}

double Table::number(std::size_t row, const std::string& name) const {
  const Value& v = rows.at(row).at(column(name));
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  throw InvalidArgument("Table: column " + name + " is not numeric");
}

std::string Table::text(std::size_t row, const std::string& name) const {
  return format_value(rows.at(row).at(column(name)));
}

std::string format_value(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  const double d = std::get<double>(v);
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  if (std::isnan(d)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", d);
  return buf;
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_value(row[i]);
    out += '\n';
  }
  return out;
}

}  // namespace spr::harness
