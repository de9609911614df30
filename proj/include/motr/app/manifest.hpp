#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "motr/core.hpp"
#include "motr/driver.hpp"

namespace motr::app {

/// User-supplied black box run as a persistent child process.
struct ExternalProblem {
  std::string command;
  int n = 0;
  int p = 0;
  Vector lower;
  Vector upper;
};

/// Everything a `solve` invocation needs.
///
/// The text format is one `key = value` pair per line with dotted keys
/// (`solver.delta0 = 1`). `#` starts a comment. Vectors are comma
/// separated. Relative paths resolve against the manifest's directory.
struct RunManifest {
  std::string problem;  ///< registered name; empty when `external` is set
  bool literal = false;  ///< fonseca only: keep the printed duplicate f2
  std::optional<ExternalProblem> external;
  SolverConfig solver;
  /// Unset means "log GD whenever a front sample is available".
  std::optional<bool> gd;
  bool hv = true;
  std::optional<std::filesystem::path> front;
  std::optional<ObjectiveVector> hv_reference;
  std::optional<std::filesystem::path> output;
};

/// Parses manifest text. Throws ConfigError naming the key for unknown
/// keys, malformed values and violated solver constraints.
RunManifest parse_manifest_text(const std::string& text,
                                const std::filesystem::path& base_dir = {});

RunManifest parse_manifest(const std::filesystem::path& path);

/// The problem the manifest refers to. External problems spawn their child
/// on first evaluation.
Problem build_problem(const RunManifest& manifest);

/// Splits "a, b, c" into doubles. Throws ConfigError(field, ...) on junk.
Vector parse_vector(const std::string& text, const std::string& field);

}  // namespace motr::app
