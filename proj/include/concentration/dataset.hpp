#pragma once

#include <istream>
#include <string>
#include <vector>

namespace conc {

struct Dataset {
  std::vector<std::string> header;  // empty when the file had none
  std::vector<std::vector<double>> rows;

  std::size_t n() const noexcept { return rows.size(); }
  std::size_t d() const noexcept { return rows.empty() ? 0 : rows.front().size(); }
};

/// Numeric CSV, one point per row. A first row that does not parse as numbers
/// is taken as a header. Ragged rows and non-numeric cells raise InvalidInput
/// naming the 1-based line and column.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::string& path);

/// Every numeric cell of a CSV, pooled (header auto-detected as above).
std::vector<double> read_values_csv(const std::string& path);

}  // namespace conc
