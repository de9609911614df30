#include "motr/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <fmt/format.h>

namespace motr::surrogate {

namespace {

/// Monomials [1, s_j, s_j^2/2, s_a s_b (a<b)] at scaled offset s.
Vector monomials(const Vector& s) {
  const auto n = static_cast<int>(s.size());
  Vector phi(quadratic_size(n));
  int k = 0;
  phi[k++] = 1.0;
  for (int j = 0; j < n; ++j) phi[k++] = s[j];
  for (int j = 0; j < n; ++j) phi[k++] = 0.5 * s[j] * s[j];
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) phi[k++] = s[a] * s[b];
  }
  return phi;
}

Matrix monomial_matrix(const SampleSet& sample) {
  const auto q = static_cast<Eigen::Index>(sample.points.size());
  const auto n = static_cast<int>(sample.center.size());
  Matrix m(q, quadratic_size(n));
  for (Eigen::Index i = 0; i < q; ++i) {
    m.row(i) = monomials((sample.points[i] - sample.center) / sample.radius).transpose();
  }
  return m;
}

double condition_of(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv[sv.size() - 1];
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return sv[0] / smin;
}

/// Uniform points in the unit ball (fixed seed, so generation stays
/// deterministic).
std::vector<Vector> ball_candidates(int n, int count) {
  std::mt19937_64 rng(0x5eed'b0a1ULL + static_cast<unsigned>(n));
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    Vector v(n);
    for (int j = 0; j < n; ++j) v[j] = normal(rng);
    const double r = std::pow(unif(rng), 1.0 / n);
    out.push_back(v.normalized() * r);
    // boundary points matter most for Lagrange maximization
    out.push_back(v.normalized());
  }
  return out;
}

/// One improvement pass: swap the non-center point whose Lagrange
/// polynomial attains the largest magnitude over the region for its
/// maximizer. Returns false when nothing improves.
bool improve_once(SampleSet& sample, const std::optional<Box>& box) {
  const Matrix m = monomial_matrix(sample);
  Eigen::FullPivLU<Matrix> lu(m);
  const auto n = static_cast<int>(sample.center.size());
  const auto q = static_cast<Eigen::Index>(sample.points.size());
  // Without an invertible matrix, fall back to the pseudo-inverse so that
  // "Lagrange" magnitudes still rank the directions missing from the span.
  Matrix lagrange = lu.isInvertible()
                        ? Matrix(lu.inverse())
                        : Matrix(m.completeOrthogonalDecomposition().pseudoInverse());

  double best = 1.0 + 1e-9;
  Eigen::Index best_i = -1;
  Vector best_x;
  for (const auto& s : ball_candidates(n, 400)) {
    Vector x = sample.center + sample.radius * s;
    if (box) x = box->clip(x);
    const Vector phi = monomials((x - sample.center) / sample.radius);
    const Vector ell = lagrange.transpose() * phi;
    for (Eigen::Index i = 1; i < q; ++i) {
      if (std::abs(ell[i]) > best) {
        best = std::abs(ell[i]);
        best_i = i;
        best_x = x;
      }
    }
  }
  if (best_i < 0) return false;
  sample.points[static_cast<std::size_t>(best_i)] = best_x;
  return true;
}

}  // namespace

double interpolation_condition(const SampleSet& sample) {
  return condition_of(monomial_matrix(sample));
}

SampleSet generate_sample_set(const DecisionVector& center, double radius,
                              const std::optional<Box>& box) {
  if (!(radius > 0.0)) throw DomainError("generate_sample_set: radius must be positive");
  const auto n = static_cast<int>(center.size());
  if (n < 1) throw DimensionError("generate_sample_set: empty center");
  if (box) {
    check_vector(center, box->dim(), "sample center");
    if (!box->contains(center)) throw DomainError("generate_sample_set: center outside box");
  }

  const double h = 0.5 * radius;
  const double inf = std::numeric_limits<double>::infinity();
  Vector room_up = Vector::Constant(n, inf);
  Vector room_down = Vector::Constant(n, inf);
  if (box) {
    room_up = box->upper - center;
    room_down = center - box->lower;
  }
  const double tiny = 1e-3 * h;

  SampleSet sample{center, radius, {}};
  sample.points.reserve(static_cast<std::size_t>(quadratic_size(n)));
  sample.points.push_back(center);

  for (int j = 0; j < n; ++j) {
    const double up = std::min(h, room_up[j]);
    const double down = std::min(h, room_down[j]);
    Vector e = Vector::Unit(n, j);
    if (up >= tiny && down >= tiny) {
      sample.points.push_back(center + up * e);
      sample.points.push_back(center - down * e);
    } else if (up >= tiny) {
      sample.points.push_back(center + up * e);
      sample.points.push_back(center + 0.5 * up * e);
    } else if (down >= tiny) {
      sample.points.push_back(center - down * e);
      sample.points.push_back(center - 0.5 * down * e);
    } else {
      throw DegenerateRegion(fmt::format("box leaves no room along coordinate {}", j + 1));
    }
  }

  const double diag = h / std::sqrt(2.0);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      Vector step = Vector::Zero(n);
      step[a] = (room_up[a] >= diag || room_up[a] >= room_down[a]) ? diag : -diag;
      step[b] = (room_up[b] >= diag || room_up[b] >= room_down[b]) ? diag : -diag;
      Vector x = center + step;
      if (box) x = box->clip(x);
      sample.points.push_back(x);
    }
  }

  for (int round = 0; round < 10 && interpolation_condition(sample) > kMaxCondition; ++round) {
    if (!improve_once(sample, box)) break;
  }
  if (!(interpolation_condition(sample) <= kMaxCondition)) {
    throw DegenerateRegion(
        fmt::format("no well-poised sample set in a region of radius {:g}", radius));
  }
  return sample;
}

double QuadraticModel::eval(const DecisionVector& x) const {
  const Vector d = x - center;
  return c + g.dot(d) + 0.5 * d.dot(H * d);
}

Vector QuadraticModel::grad(const DecisionVector& x) const { return g + H * (x - center); }

double model_eval(const QuadraticModel& m, const DecisionVector& x) {
  check_vector(x, m.center.size(), "model_eval");
  return m.eval(x);
}

Vector model_grad(const QuadraticModel& m, const DecisionVector& x) {
  check_vector(x, m.center.size(), "model_grad");
  return m.grad(x);
}

ObjectiveVector ModelVector::eval(const DecisionVector& x) const {
  ObjectiveVector out(static_cast<Eigen::Index>(models.size()));
  for (std::size_t i = 0; i < models.size(); ++i) out[static_cast<Eigen::Index>(i)] = models[i].eval(x);
  return out;
}

Matrix ModelVector::gradients(const DecisionVector& x) const {
  Matrix out(x.size(), static_cast<Eigen::Index>(models.size()));
  for (std::size_t i = 0; i < models.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = models[i].grad(x);
  return out;
}

QuadraticModel fit_model(const SampleSet& sample, std::span<const double> values) {
  const auto n = static_cast<int>(sample.center.size());
  const auto q = static_cast<std::size_t>(quadratic_size(n));
  if (sample.points.size() != q || values.size() != q) {
    throw DimensionError(fmt::format("fit_model: need {} points and values", q));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("fit_model: non-finite sample value");
  }

  // The center row only touches the constant, so the remaining
  // coefficients solve the reduced system on differences f(y) - f(center).
  const Matrix full = monomial_matrix(sample);
  const auto qi = static_cast<Eigen::Index>(q);
  const Matrix reduced = full.bottomRightCorner(qi - 1, qi - 1);
  Vector rhs(qi - 1);
  for (Eigen::Index i = 1; i < qi; ++i) rhs[i - 1] = values[static_cast<std::size_t>(i)] - values[0];

  Eigen::FullPivLU<Matrix> lu(reduced);
  if (!lu.isInvertible() || condition_of(full) > 1e14) {
    throw SingularInterpolation("fit_model: interpolation system is singular");
  }
  const Vector coef = lu.solve(rhs);

  QuadraticModel m;
  m.center = sample.center;
  m.c = values[0];
  const double r = sample.radius;
  m.g = coef.head(n) / r;
  m.H = Matrix::Zero(n, n);
  int k = n;
  for (int j = 0; j < n; ++j) m.H(j, j) = coef[k++] / (r * r);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      m.H(a, b) = m.H(b, a) = coef[k++] / (r * r);
    }
  }
  return m;
}

ModelVector fit_models(const SampleSet& sample, std::span<const ObjectiveVector> evals) {
  if (evals.size() != sample.points.size() || evals.empty()) {
    throw DimensionError("fit_models: one objective vector per sample point required");
  }
  const auto p = evals.front().size();
  ModelVector mv;
  mv.models.reserve(static_cast<std::size_t>(p));
  std::vector<double> column(evals.size());
  for (Eigen::Index i = 0; i < p; ++i) {
    for (std::size_t k = 0; k < evals.size(); ++k) {
      if (evals[k].size() != p) throw DimensionError("fit_models: ragged objective vectors");
      column[k] = evals[k][i];
    }
    mv.models.push_back(fit_model(sample, column));
  }
  return mv;
}

}  // namespace motr::surrogate
