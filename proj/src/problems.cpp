#include "motr/problems.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace motr::problems {

namespace {

constexpr double kPi = std::numbers::pi;

void require_in_box(const DecisionVector& x, const Box& box, const char* name) {
  check_vector(x, box.dim(), name);
  if (!box.contains(x)) {
    throw DomainError(fmt::format("{}: point outside the feasible box", name));
  }
}

Box uniform_box(int n, double lo, double hi) {
  return Box{Vector::Constant(n, lo), Vector::Constant(n, hi)};
}

const Box& dtlz2_box() {
  static const Box box = uniform_box(3, 0.0, 1.0);
  return box;
}

const Box& comet_box() {
  static const Box box{(Vector(3) << 1.0, -2.0, 0.0).finished(),
                       (Vector(3) << 3.5, 2.0, 1.0).finished()};
  return box;
}

/// Keeps the points no other point dominates; O(N^2), run once per sampler.
std::vector<ObjectiveVector> nondominated(std::vector<ObjectiveVector> pts) {
  std::vector<ObjectiveVector> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < pts.size() && keep; ++j) {
      if (i == j) continue;
      auto d = dominates(pts[j], pts[i]);
      keep = !(d == Dominance::Dominates || (d == Dominance::Equal && j < i));
    }
    if (keep) out.push_back(pts[i]);
  }
  return out;
}

}  // namespace

ObjectiveVector fonseca_variant(const DecisionVector& x, bool literal) {
  check_vector(x, 4, "fonseca_variant");
  const double s1 = (x.array() - 0.5).square().sum();
  const double s2 = literal ? s1 : (x.array() + 0.5).square().sum();
  ObjectiveVector f(2);
  f << 1.0 - std::exp(-s1), 1.0 - std::exp(-s2);
  return f;
}

ObjectiveVector dtlz2(const DecisionVector& x) {
  require_in_box(x, dtlz2_box(), "dtlz2");
  const double g = (x[2] - 0.5) * (x[2] - 0.5);
  const double a = x[0] * kPi / 2.0;
  const double b = x[1] * kPi / 2.0;
  ObjectiveVector f(3);
  f << (1.0 + g) * std::cos(a) * std::cos(b), (1.0 + g) * std::cos(a) * std::sin(b),
      (1.0 + g) * std::sin(a);
  return f;
}

ObjectiveVector comet(const DecisionVector& x) {
  require_in_box(x, comet_box(), "comet");
  const double s = 1.0 + x[2];
  const double cubic = x[0] * x[0] * x[0] * x[1] * x[1];
  ObjectiveVector f(3);
  f << s * (cubic - 10.0 * x[0] - 4.0 * x[1]), s * (cubic - 10.0 * x[0] + 4.0 * x[1]),
      3.0 * s * x[0] * x[0];
  return f;
}

ObjectiveVector dtlz7(const DecisionVector& x) {
  require_in_box(x, dtlz2_box(), "dtlz7");
  const double g = 1.0 + 4.5 * x[2];
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) sum += x[i] / (1.0 + g) * (1.0 + std::sin(3.0 * kPi * x[i]));
  ObjectiveVector f(3);
  f << x[0], x[1], (1.0 + g) * (3.0 - sum);
  return f;
}

ObjectiveVector twin_sphere(const DecisionVector& x) {
  check_vector(x, 2, "twin_sphere");
  const Vector a = (Vector(2) << 0.5, -0.25).finished();
  const double v = (x - a).squaredNorm();
  return (ObjectiveVector(2) << v, v).finished();
}

std::vector<ObjectiveVector> fonseca_front(int count) {
  // Efficient set: x_1 = ... = x_4 = t with t in [-1/2, 1/2].
  std::vector<ObjectiveVector> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double t = -0.5 + static_cast<double>(k) / (count - 1);
    out.push_back(fonseca_variant(Vector::Constant(4, t)));
  }
  return out;
}

std::vector<ObjectiveVector> dtlz2_front(int per_axis) {
  // g = 0 puts F on the unit sphere octant. At x1 = 1 every x2 maps to the
  // pole, so that row contributes a single point.
  std::vector<ObjectiveVector> out;
  for (int i = 0; i < per_axis; ++i) {
    const double u = static_cast<double>(i) / (per_axis - 1);
    const int columns = (i == per_axis - 1) ? 1 : per_axis;
    for (int j = 0; j < columns; ++j) {
      const double v = static_cast<double>(j) / (per_axis - 1);
      out.push_back(dtlz2((Vector(3) << u, v, 0.5).finished()));
    }
  }
  return out;
}

std::vector<ObjectiveVector> dtlz7_front(int per_axis) {
  // Efficient points lie on x3 = 0 (g = 1); filter the nondominated pieces.
  std::vector<ObjectiveVector> pts;
  pts.reserve(static_cast<std::size_t>(per_axis) * per_axis);
  for (int i = 0; i < per_axis; ++i) {
    for (int j = 0; j < per_axis; ++j) {
      const double u = static_cast<double>(i) / (per_axis - 1);
      const double v = static_cast<double>(j) / (per_axis - 1);
      pts.push_back(dtlz7((Vector(3) << u, v, 0.0).finished()));
    }
  }
  return nondominated(std::move(pts));
}

Problem make_fonseca(bool literal) {
  Problem p;
  p.name = literal ? "fonseca_literal" : "fonseca";
  p.n = 4;
  p.p = 2;
  p.box = uniform_box(4, -2.0, 2.0);
  p.objectives = [literal](const DecisionVector& x) { return fonseca_variant(x, literal); };
  if (!literal) p.front = [] { return fonseca_front(); };
  return p;
}

Problem make_dtlz2() {
  Problem p;
  p.name = "dtlz2";
  p.n = 3;
  p.p = 3;
  p.box = dtlz2_box();
  p.objectives = dtlz2;
  p.front = [] { return dtlz2_front(); };
  return p;
}

Problem make_comet() {
  Problem p;
  p.name = "comet";
  p.n = 3;
  p.p = 3;
  p.box = comet_box();
  p.objectives = comet;
  return p;
}

Problem make_dtlz7() {
  Problem p;
  p.name = "dtlz7";
  p.n = 3;
  p.p = 3;
  p.box = dtlz2_box();
  p.objectives = dtlz7;
  p.front = [] { return dtlz7_front(); };
  return p;
}

Problem make_twin_sphere() {
  Problem p;
  p.name = "twin_sphere";
  p.n = 2;
  p.p = 2;
  p.box = uniform_box(2, -2.0, 2.0);
  p.objectives = twin_sphere;
  return p;
}

std::vector<std::string> registered_names() {
  return {"fonseca", "fonseca_literal", "dtlz2", "comet", "dtlz7", "twin_sphere"};
}

Problem by_name(const std::string& name) {
  if (name == "fonseca") return make_fonseca(false);
  if (name == "fonseca_literal") return make_fonseca(true);
  if (name == "dtlz2") return make_dtlz2();
  if (name == "comet") return make_comet();
  if (name == "dtlz7") return make_dtlz7();
  if (name == "twin_sphere") return make_twin_sphere();
  throw Unsupported(fmt::format("unknown problem '{}'", name));
}

std::vector<ObjectiveVector> front_sample(const Problem& problem) {
  if (!problem.front) {
    throw Unsupported(fmt::format("problem '{}' has no known Pareto front", problem.name));
  }
  return problem.front();
}

}  // namespace motr::problems
