#include "motr/app/commands.hpp"

#include <exception>
#include <fstream>
#include <iostream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "motr/app/io.hpp"
#include "motr/geometry.hpp"
#include "motr/log.hpp"
#include "motr/metrics.hpp"
#include "motr/problems.hpp"

namespace motr::app {
namespace {

using Json = nlohmann::ordered_json;

Json to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(fmt::format("cannot write '{}'", path.string()));
  return os;
}

struct HvSummary {
  double value = 0.0;
  bool exact = true;
  double std_error = 0.0;
  std::size_t points = 0;
};

// Points outside the reference box are dropped, as in per-iteration logging.
HvSummary hv_of(const std::vector<ObjectiveVector>& points, const ObjectiveVector& ref) {
  const auto inside = metrics::dominating_subset(points, ref);
  if (inside.size() != points.size()) {
    logger().warn("{} point(s) do not dominate the HV reference and are left out",
                  points.size() - inside.size());
  }
  const auto r = metrics::hypervolume(inside, ref);
  return {r.value, r.exact, r.std_error, inside.size()};
}

}  // namespace

void write_iterations_jsonl(std::ostream& os, const RunResult& result) {
  for (const auto& it : result.iterations) {
    Json j;
    j["k"] = it.k;
    j["ref_index"] = it.ref_index;
    j["delta"] = it.delta;
    j["inner_shrinks"] = it.inner_shrinks;
    j["t_plus"] = it.t_plus;
    j["rho"] = it.rho;
    j["accepted"] = it.accepted;
    j["archive_size"] = it.archive_size;
    j["evals"] = it.evals;
    j["gd"] = optional_json(it.gd);
    j["hv"] = optional_json(it.hv);
    os << j.dump() << '\n';
  }
}

void write_density_surface_csv(std::ostream& os, const Archive& archive, const SolverConfig& config) {
  if (archive.empty()) return;
  const auto fun = config.decreasing_function();
  const auto sel = geometry::select_reference(archive, fun, {config.normalize_objectives});
  const auto dims = archive[0].f.size() - 1;
  os << "kind";
  for (Eigen::Index d = 0; d < dims; ++d) os << ",y_" << d + 1;
  os << ",density\n";
  const auto row = [&](std::string_view kind, const Vector& y, double density) {
    os << kind;
    for (Eigen::Index d = 0; d < y.size(); ++d) fmt::print(os, ",{:.17g}", y[d]);
    fmt::print(os, ",{:.17g}\n", density);
  };
  const int per_axis = dims == 1 ? 400 : dims == 2 ? 60 : 10;
  for (const auto& s : geometry::density_surface(sel.projections, fun, per_axis)) {
    row("grid", s.y, s.density);
  }
  for (std::size_t i = 0; i < sel.projections.size(); ++i) {
    row(i == sel.index ? "reference" : "point", sel.projections[i], sel.densities[i]);
  }
}

RunResult solve_into(const RunManifest& manifest, const std::filesystem::path& out) {
  const Problem problem = build_problem(manifest);
  RunOptions options;
  if (manifest.gd.value_or(true)) {
    if (manifest.front) {
      options.front = read_objectives_csv(*manifest.front);
    } else if (problem.front) {
      options.front = problem.front();
    }
  }
  options.log_hv = manifest.hv;
  options.hv_reference = manifest.hv_reference;

  const RunResult result = run(problem, manifest.solver, options);

  std::filesystem::create_directories(out);
  {
    auto os = open_out(out / "archive.csv");
    write_archive_csv(os, result.archive);
  }
  {
    auto os = open_out(out / "iterations.jsonl");
    write_iterations_jsonl(os, result);
  }
  {
    auto os = open_out(out / "density_surface.csv");
    write_density_surface_csv(os, result.archive, manifest.solver);
  }

  const auto objectives = result.archive.objectives();
  Json m;
  m["problem"] = problem.name;
  m["termination"] = to_string(result.reason);
  m["evaluations"] = result.evaluations;
  m["iterations"] = result.iterations.size();
  m["archive_size"] = result.archive.size();
  m["gd"] = options.front.empty() ? Json(nullptr) : Json(metrics::gd(objectives, options.front));
  if (manifest.hv) {
    const ObjectiveVector ref = result.hv_reference ? *result.hv_reference
                                                    : metrics::default_hv_reference(objectives);
    const auto hv = hv_of(objectives, ref);
    m["hv"] = hv.value;
    m["hv_reference"] = to_json(ref);
    m["hv_points"] = hv.points;
    m["hv_exact"] = hv.exact;
    m["hv_std_error"] = hv.std_error;
  } else {
    m["hv"] = nullptr;
    m["hv_reference"] = nullptr;
  }
  m["seed"] = manifest.solver.seed;
  auto os = open_out(out / "metrics.json");
  os << m.dump(2) << '\n';

  logger().info("{}: {} after {} iterations, {} evaluations, {} archive points", out.string(),
                to_string(result.reason), result.iterations.size(), result.evaluations,
                result.archive.size());
  return result;
}

int solve_command(const std::filesystem::path& manifest_path,
                  const std::optional<std::filesystem::path>& out, int replicates) {
  RunManifest manifest;
  try {
    manifest = parse_manifest(manifest_path);
  } catch (const ConfigError& e) {
    logger().error("invalid manifest '{}': {}", manifest_path.string(), e.what());
    return kExitUsage;
  }
  const auto dir = out ? *out : manifest.output;
  if (!dir) {
    logger().error("no output directory: pass --out or set 'output' in the manifest");
    return kExitUsage;
  }
  if (replicates < 1) {
    logger().error("--replicates must be at least 1");
    return kExitUsage;
  }

  const auto run_one = [&](const RunManifest& m, const std::filesystem::path& d) {
    try {
      solve_into(m, d);
      return kExitOk;
    } catch (const EvaluatorFailure& e) {
      logger().error("run aborted: {}", e.what());
    } catch (const std::exception& e) {
      logger().error("run failed: {}", e.what());
    }
    return kExitFailure;
  };

  if (replicates == 1) return run_one(manifest, *dir);

  std::vector<int> codes(static_cast<std::size_t>(replicates), kExitOk);
  std::vector<std::thread> workers;
  for (int r = 0; r < replicates; ++r) {
    RunManifest m = manifest;
    m.solver.seed += static_cast<std::uint64_t>(r);
    workers.emplace_back([&, r, m = std::move(m)] {
      codes[static_cast<std::size_t>(r)] = run_one(m, *dir / fmt::format("rep_{}", r));
    });
  }
  for (auto& w : workers) w.join();
  for (int c : codes) {
    if (c != kExitOk) return c;
  }
  return kExitOk;
}

int metrics_command(const std::filesystem::path& produced_path, const std::filesystem::path& front_path,
                    const std::optional<std::string>& ref_text, std::ostream& os) {
  try {
    const auto produced = read_objectives_csv(produced_path);
    const auto front = read_objectives_csv(front_path);
    if (produced.empty()) throw DomainError("produced set is empty");
    const ObjectiveVector ref = ref_text ? parse_vector(*ref_text, "--ref")
                                         : metrics::default_hv_reference(produced);
    check_vector(ref, produced.front().size(), "--ref");
    const auto hv = hv_of(produced, ref);
    Json j;
    j["gd"] = metrics::gd(produced, front);
    j["hv"] = hv.value;
    j["hv_reference"] = to_json(ref);
    j["hv_points"] = hv.points;
    j["hv_exact"] = hv.exact;
    j["hv_std_error"] = hv.std_error;
    os << j.dump(2) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    logger().error("metrics: {}", e.what());
    return kExitUsage;
  }
}

int problems_list_command(std::ostream& os) {
  for (const auto& name : problems::registered_names()) {
    const auto p = problems::by_name(name);
    fmt::print(os, "{:<16} n={} p={} box=[{}]x[{}] front={}\n", name, p.n, p.p,
               fmt::join(p.box.lower.begin(), p.box.lower.end(), ","),
               fmt::join(p.box.upper.begin(), p.box.upper.end(), ","), p.front ? "yes" : "no");
  }
  return kExitOk;
}

int evaluate_command(const std::string& problem, const std::string& x, std::ostream& os) {
  try {
    const auto p = problems::by_name(problem);
    const Vector xv = parse_vector(x, "--x");
    check_vector(xv, p.n, "--x");
    os << to_json(p.objectives(xv)).dump() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    logger().error("evaluate: {}", e.what());
    return kExitUsage;
  }
}

}  // namespace motr::app
