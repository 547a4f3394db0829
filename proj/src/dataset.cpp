#include "concentration/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>

#include "concentration/errors.hpp"

namespace conc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc() || ptr != end || cell.empty() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line);

    std::vector<double> row;
    row.reserve(cells.size());
    std::optional<std::size_t> bad_column;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_number(cells[c]);
      if (!v) {
        bad_column = c;
        break;
      }
      row.push_back(*v);
    }

    if (bad_column) {
      if (first) {
        for (auto cell : cells) ds.header.emplace_back(cell);
        first = false;
        continue;
      }
      std::ostringstream msg;
      msg << "line " << line_no << ", column " << (*bad_column + 1)
          << ": not a finite number: '" << cells[*bad_column] << "'";
      throw InvalidInput(msg.str());
    }
    first = false;

    const std::size_t expected =
        !ds.rows.empty() ? ds.rows.front().size() : ds.header.size();
    if (expected != 0 && row.size() != expected) {
      std::ostringstream msg;
      msg << "line " << line_no << ": ragged row with " << row.size()
          << " columns, expected " << expected;
      throw InvalidInput(msg.str());
    }
    ds.rows.push_back(std::move(row));
  }
  if (ds.rows.empty()) throw InvalidInput("dataset has no numeric rows");
  return ds;
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open dataset '" + path + "'");
  return read_dataset_csv(in);
}

std::vector<double> read_values_csv(const std::string& path) {
  const Dataset ds = read_dataset_csv(path);
  std::vector<double> values;
  values.reserve(ds.n() * ds.d());
  for (const auto& row : ds.rows) values.insert(values.end(), row.begin(), row.end());
  return values;
}

}  // namespace conc
