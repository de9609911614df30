#include "motr/app/io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <fmt/format.h>

namespace motr::app {
namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto a = cell.find_first_not_of(" \t\r");
    const auto b = cell.find_last_not_of(" \t\r");
    cells.push_back(a == std::string::npos ? std::string{} : cell.substr(a, b - a + 1));
  }
  return cells;
}

std::optional<double> to_number(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::vector<ObjectiveVector> read_objectives_csv(std::istream& in) {
  std::vector<ObjectiveVector> out;
  std::vector<std::size_t> columns;
  bool first = true;
  std::size_t width = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const auto cells = split_row(line);
    if (first) {
      first = false;
      width = cells.size();
      bool numeric = true;
      for (const auto& c : cells) numeric = numeric && to_number(c).has_value();
      if (!numeric) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
          if (cells[i].rfind("f_", 0) == 0) columns.push_back(i);
        }
        if (columns.empty()) {
          for (std::size_t i = 0; i < cells.size(); ++i) columns.push_back(i);
        }
        continue;
      }
      for (std::size_t i = 0; i < cells.size(); ++i) columns.push_back(i);
    }
    if (cells.size() != width) {
      throw DimensionError(fmt::format("csv line {}: expected {} cells, got {}", line_no, width, cells.size()));
    }
    ObjectiveVector f(static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const auto v = to_number(cells[columns[j]]);
      if (!v) throw DomainError(fmt::format("csv line {}: '{}' is not a number", line_no, cells[columns[j]]));
      f[static_cast<Eigen::Index>(j)] = *v;
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<ObjectiveVector> read_objectives_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot read '{}'", path.string()));
  return read_objectives_csv(in);
}

}  // namespace motr::app
