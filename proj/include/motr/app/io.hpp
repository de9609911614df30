#pragma once

#include <filesystem>
#include <istream>
#include <vector>

#include "motr/core.hpp"

namespace motr::app {

/// Reads objective vectors from CSV. With a header, the `f_*` columns are
/// used when present and every column otherwise. A numeric first row is
/// treated as data. Blank lines and `#` comments are skipped.
std::vector<ObjectiveVector> read_objectives_csv(std::istream& in);
std::vector<ObjectiveVector> read_objectives_csv(const std::filesystem::path& path);

}  // namespace motr::app
