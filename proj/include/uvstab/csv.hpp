// Comma-separated output with a header row. Floats carry 17 significant
// digits, independent of locale, so re-parsing is bit-exact.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace uvstab {

std::string format_double(double value);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& columns);
  CsvWriter& field(double value);
  CsvWriter& field(std::string_view value);
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  bool row_started_ = false;
};

struct NumericTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Reads a table written by CsvWriter whose fields are all numeric.
NumericTable read_numeric_csv(std::istream& in);

}  // namespace uvstab
