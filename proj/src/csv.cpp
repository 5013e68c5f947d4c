#include "rlab/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace rlab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v,
                               std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : width_(header.size()) {
  add_row(header);
}

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != width_)
    throw std::invalid_argument("CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

std::string CsvTable::str() const { return text_; }

} // namespace rlab
