#include "motr/app/manifest.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "motr/app/external_evaluator.hpp"
#include "motr/problems.hpp"
#include "motr/surrogate.hpp"

namespace motr::app {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

double parse_double(const std::string& text, const std::string& field) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(field, fmt::format("'{}' is not a number", s));
  }
  return v;
}

long parse_long(const std::string& text, const std::string& field) {
  const std::string s = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(field, fmt::format("'{}' is not an integer", s));
  }
  return v;
}

bool parse_bool(const std::string& s, const std::string& field) {
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw ConfigError(field, fmt::format("'{}' is not a boolean", s));
}

std::filesystem::path resolve(const std::string& value, const std::filesystem::path& base) {
  std::filesystem::path p(value);
  return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

Vector parse_vector(const std::string& text, const std::string& field) {
  std::vector<double> values;
  std::string s = trim(text);
  if (s.size() >= 2 && ((s.front() == '(' && s.back() == ')') || (s.front() == '[' && s.back() == ']'))) {
    s = s.substr(1, s.size() - 2);
  }
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(parse_double(item, field));
  if (values.empty()) throw ConfigError(field, "empty vector");
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

RunManifest parse_manifest_text(const std::string& text, const std::filesystem::path& base_dir) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("line {}", line_no), "expected 'key = value'");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = unquote(trim(std::string_view(line).substr(eq + 1)));
    if (key.empty()) throw ConfigError(fmt::format("line {}", line_no), "missing key");
    if (!kv.emplace(key, value).second) throw ConfigError(key, "given more than once");
  }

  RunManifest m;
  SolverConfig& c = m.solver;
  ExternalProblem ext;
  bool has_x0 = false;
  std::optional<long> budget;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"problem", [&](auto& k, auto& v) { m.problem = v; if (v.empty()) throw ConfigError(k, "empty name"); }},
      {"problem.literal", [&](auto& k, auto& v) { m.literal = parse_bool(v, k); }},
      {"problem.command", [&](auto&, auto& v) { ext.command = v; }},
      {"problem.n", [&](auto& k, auto& v) { ext.n = static_cast<int>(parse_long(v, k)); }},
      {"problem.p", [&](auto& k, auto& v) { ext.p = static_cast<int>(parse_long(v, k)); }},
      {"problem.lower", [&](auto& k, auto& v) { ext.lower = parse_vector(v, k); }},
      {"problem.upper", [&](auto& k, auto& v) { ext.upper = parse_vector(v, k); }},
      {"solver.x0", [&](auto& k, auto& v) { c.x0 = parse_vector(v, k); has_x0 = true; }},
      {"solver.delta0", [&](auto& k, auto& v) { c.delta0 = parse_double(v, k); }},
      {"solver.delta_tol", [&](auto& k, auto& v) { c.delta_tol = parse_double(v, k); }},
      {"solver.eta1", [&](auto& k, auto& v) { c.eta1 = parse_double(v, k); }},
      {"solver.eta2", [&](auto& k, auto& v) { c.eta2 = parse_double(v, k); }},
      {"solver.gamma0", [&](auto& k, auto& v) { c.gamma0 = parse_double(v, k); }},
      {"solver.gamma1", [&](auto& k, auto& v) { c.gamma1 = parse_double(v, k); }},
      {"solver.gamma2", [&](auto& k, auto& v) { c.gamma2 = parse_double(v, k); }},
      {"solver.expand_factor", [&](auto& k, auto& v) { c.expand_factor = parse_double(v, k); }},
      {"solver.sigma", [&](auto& k, auto& v) { c.sigma = parse_double(v, k); }},
      {"solver.influence",
       [&](auto& k, auto& v) {
         if (v == "gaussian") {
           c.influence = geometry::DecreasingFunction::Kind::Gaussian;
         } else if (v == "sharing") {
           c.influence = geometry::DecreasingFunction::Kind::Sharing;
         } else {
           throw ConfigError(k, fmt::format("'{}' is not one of gaussian, sharing", v));
         }
       }},
      {"solver.alpha", [&](auto& k, auto& v) { c.sharing_alpha = static_cast<int>(parse_long(v, k)); }},
      {"solver.normalize", [&](auto& k, auto& v) { c.normalize_objectives = parse_bool(v, k); }},
      {"solver.eval_budget", [&](auto& k, auto& v) { budget = parse_long(v, k); }},
      {"solver.max_iterations", [&](auto& k, auto& v) { c.max_iterations = parse_long(v, k); }},
      {"solver.max_inner_shrinks",
       [&](auto& k, auto& v) { c.max_inner_shrinks = static_cast<int>(parse_long(v, k)); }},
      {"solver.seed",
       [&](auto& k, auto& v) {
         const long s = parse_long(v, k);
         if (s < 0) throw ConfigError(k, "must be nonnegative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"solver.rho_rule",
       [&](auto& k, auto& v) {
         if (v == "min") {
           c.rho_rule = RhoRule::Min;
         } else if (v == "max") {
           c.rho_rule = RhoRule::Max;
         } else {
           throw ConfigError(k, fmt::format("'{}' is not one of min, max", v));
         }
       }},
      {"metrics.gd", [&](auto& k, auto& v) { m.gd = parse_bool(v, k); }},
      {"metrics.hv", [&](auto& k, auto& v) { m.hv = parse_bool(v, k); }},
      {"metrics.front", [&](auto&, auto& v) { m.front = resolve(v, base_dir); }},
      {"metrics.hv_ref", [&](auto& k, auto& v) { m.hv_reference = parse_vector(v, k); }},
      {"output", [&](auto&, auto& v) { m.output = resolve(v, base_dir); }},
  };

  for (const auto& [key, value] : kv) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(key, "unknown key");
    it->second(key, value);
  }

  const bool any_external = kv.count("problem.command") || kv.count("problem.n") ||
                            kv.count("problem.p") || kv.count("problem.lower") ||
                            kv.count("problem.upper");
  if (any_external) {
    if (!m.problem.empty()) throw ConfigError("problem", "give a name or problem.command, not both");
    if (ext.command.empty()) throw ConfigError("problem.command", "required for external problems");
    if (ext.n < 1) throw ConfigError("problem.n", "must be at least 1");
    if (ext.p < 2) throw ConfigError("problem.p", "must be at least 2");
    if (ext.lower.size() != ext.n) throw ConfigError("problem.lower", fmt::format("expected {} values", ext.n));
    if (ext.upper.size() != ext.n) throw ConfigError("problem.upper", fmt::format("expected {} values", ext.n));
    if (!(ext.lower.array() < ext.upper.array()).all()) {
      throw ConfigError("problem.upper", "must exceed problem.lower componentwise");
    }
    m.external = ext;
  } else if (m.problem.empty()) {
    throw ConfigError("problem", "missing; give a registered name or problem.command");
  }
  if (m.literal && m.problem != "fonseca") throw ConfigError("problem.literal", "only applies to fonseca");

  Problem shape;
  if (m.external) {
    shape.n = ext.n;
    shape.p = ext.p;
    shape.box = {ext.lower, ext.upper};
  } else {
    try {
      shape = problems::by_name(m.problem);
    } catch (const Unsupported& e) {
      throw ConfigError("problem", e.what());
    }
  }
  if (!has_x0) c.x0 = shape.box.center();

  const long q = static_cast<long>(surrogate::quadratic_size(shape.n));
  c.eval_budget = budget.value_or(std::max(c.eval_budget, q));
  if (c.eval_budget < q) {
    throw ConfigError("solver.eval_budget",
                      fmt::format("must be at least {} to fit one quadratic model in {} variables", q, shape.n));
  }

  try {
    c.validate(shape);
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    throw ConfigError("solver." + e.field(), what.substr(e.field().size() + 2));
  }

  if (m.front && !std::filesystem::exists(*m.front)) {
    throw ConfigError("metrics.front", fmt::format("'{}' does not exist", m.front->string()));
  }
  if (m.hv_reference && m.hv_reference->size() != shape.p) {
    throw ConfigError("metrics.hv_ref", fmt::format("expected {} values", shape.p));
  }
  if (m.gd.value_or(false) && !m.front && !shape.front) {
    throw ConfigError("metrics.gd", "no front sample: set metrics.front");
  }
  return m;
}

RunManifest parse_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("manifest", fmt::format("cannot read '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest_text(ss.str(), path.parent_path());
}

Problem build_problem(const RunManifest& manifest) {
  if (!manifest.external) {
    return manifest.problem == "fonseca" ? problems::make_fonseca(manifest.literal)
                                         : problems::by_name(manifest.problem);
  }
  const auto& ext = *manifest.external;
  Problem p;
  p.name = "external";
  p.n = ext.n;
  p.p = ext.p;
  p.box = {ext.lower, ext.upper};
  auto evaluator = std::make_shared<ExternalEvaluator>(ext.command, ext.p);
  p.objectives = [evaluator](const DecisionVector& x) { return (*evaluator)(x); };
  return p;
}

}  // namespace motr::app
