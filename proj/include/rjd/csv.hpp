#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rjd {

/// Shortest text that reads back to the same double; "nan"/"inf"/"-inf"
/// for non-finite values. Uses 17 significant digits.
std::string format_number(double v);

/// Streams numeric rows under a fixed header.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> columns);

  void row(std::span<const double> values);
  void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }

  std::size_t columns() const { return columns_.size(); }

 private:
  std::ostream* out_;
  std::vector<std::string> columns_;
};

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column_index(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
void write_csv(std::ostream& out, const CsvTable& table);

}  // namespace rjd
