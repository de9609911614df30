#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "motr/app/manifest.hpp"
#include "motr/driver.hpp"

namespace motr::app {

/// Process exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// One JSON object per iteration with keys k, ref_index, delta,
/// inner_shrinks, t_plus, rho, accepted, archive_size, evals, gd, hv.
void write_iterations_jsonl(std::ostream& os, const RunResult& result);

/// Density grid and projected archive on the final hyperplane. Columns:
/// kind (grid, point or reference), y_1..y_{p-1}, density.
void write_density_surface_csv(std::ostream& os, const Archive& archive,
                               const SolverConfig& config);

/// Runs one manifest and writes archive.csv, iterations.jsonl,
/// density_surface.csv and metrics.json into `out`.
RunResult solve_into(const RunManifest& manifest, const std::filesystem::path& out);

/// `solve`. With replicates > 1 the runs use seeds seed, seed+1, ... and
/// write to out/rep_<r>; they run on separate threads.
int solve_command(const std::filesystem::path& manifest_path,
                  const std::optional<std::filesystem::path>& out, int replicates);

/// `metrics`: GD and HV of a produced front as a JSON object on `os`.
int metrics_command(const std::filesystem::path& produced, const std::filesystem::path& front,
                    const std::optional<std::string>& ref, std::ostream& os);

/// `problems list`
int problems_list_command(std::ostream& os);

/// `evaluate`: objective vector of a registered problem as a JSON array.
int evaluate_command(const std::string& problem, const std::string& x, std::ostream& os);

}  // namespace motr::app
