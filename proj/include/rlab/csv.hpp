#ifndef RLAB_CSV_HPP
#define RLAB_CSV_HPP

#include <string>
#include <vector>

namespace rlab {

/// Shortest locale-independent form with 17 significant digits.
std::string format_double(double v);

/// Accumulates rows of a CSV table with '.' decimals.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::string>& cells);
  std::string str() const;

private:
  std::size_t width_;
  std::string text_;
};

} // namespace rlab

#endif
