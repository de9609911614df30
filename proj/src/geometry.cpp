#include "motr/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <fmt/format.h>

namespace motr::geometry {

namespace {
constexpr double kDegenerate = 1e-12;
}

ProjectionBasis build_basis(const ObjectiveVector& utopia, const ObjectiveVector& anti_utopia) {
  if (utopia.size() != anti_utopia.size() || utopia.size() < 1) {
    throw DimensionError("build_basis: utopia and anti-utopia lengths differ");
  }
  const Eigen::Index p = utopia.size();
  const Vector diff = anti_utopia - utopia;
  const double len = diff.norm();
  if (!(len >= kDegenerate)) {
    throw DegenerateRange(fmt::format("build_basis: |B - G| = {:g} is degenerate", len));
  }

  ProjectionBasis basis{utopia, anti_utopia, Matrix::Zero(p, p)};
  basis.j.col(0) = diff / len;
  Eigen::Index filled = 1;

  // Cartesian candidates i_2, ..., i_p, then i_1.
  std::vector<Eigen::Index> order;
  for (Eigen::Index k = 1; k < p; ++k) order.push_back(k);
  order.push_back(0);

  for (Eigen::Index axis : order) {
    if (filled == p) break;
    Vector v = Vector::Unit(p, axis);
    for (Eigen::Index c = 0; c < filled; ++c) v -= v.dot(basis.j.col(c)) * basis.j.col(c);
    const double norm = v.norm();
    if (norm < kDegenerate) continue;
    v /= norm;
    // second pass keeps orthogonality at round-off level
    for (Eigen::Index c = 0; c < filled; ++c) v -= v.dot(basis.j.col(c)) * basis.j.col(c);
    basis.j.col(filled++) = v.normalized();
  }
  if (filled < p) {
    // Only reachable through round-off; complete from a QR of the frame.
    Eigen::HouseholderQR<Matrix> qr(basis.j.leftCols(filled));
    Matrix q = qr.householderQ();
    basis.j.rightCols(p - filled) = q.rightCols(p - filled);
  }
  return basis;
}

Vector project(const ProjectionBasis& basis, const ObjectiveVector& f) {
  const Eigen::Index p = basis.utopia.size();
  check_vector(f, p, "project");
  return basis.j.rightCols(p - 1).transpose() * (f - basis.utopia);
}

DecreasingFunction DecreasingFunction::sharing(double sigma, int alpha) {
  if (!(sigma > 0.0) || alpha < 1) throw DomainError("sharing function needs sigma > 0, alpha >= 1");
  return {Kind::Sharing, sigma, alpha};
}

DecreasingFunction DecreasingFunction::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("gaussian influence needs sigma > 0");
  return {Kind::Gaussian, sigma, 1};
}

double phi(const DecreasingFunction& fun, double d) {
  if (!(d >= 0.0)) throw DomainError("phi: distance must be nonnegative");
  switch (fun.kind) {
    case DecreasingFunction::Kind::Sharing:
      return d > fun.sigma ? 0.0 : 1.0 - std::pow(d / fun.sigma, fun.alpha);
    case DecreasingFunction::Kind::Gaussian:
      return std::exp(-d * d / (2.0 * fun.sigma * fun.sigma));
  }
  return 0.0;
}

double density_at(std::span<const Vector> projections, const DecreasingFunction& fun,
                  const Vector& y) {
  if (projections.empty()) throw DomainError("density_at: empty archive");
  double sum = 0.0;
  for (const auto& q : projections) {
    if (q.size() != y.size()) throw DimensionError("density_at: dimension mismatch");
    sum += phi(fun, (q - y).norm());
  }
  return sum;
}

ProjectionBasis basis_for(std::span<const ObjectiveVector> points, bool normalize) {
  if (points.empty()) throw DomainError("basis_for: no points");
  const Eigen::Index p = points.front().size();
  Vector lo = points.front();
  Vector hi = points.front();
  for (const auto& f : points) {
    lo = lo.cwiseMin(f);
    hi = hi.cwiseMax(f);
  }
  if (normalize) {
    // normalized coordinates run over [0,1] on every axis with spread
    const Vector range = hi - lo;
    Vector ones = Vector::Zero(p);
    for (Eigen::Index i = 0; i < p; ++i) ones[i] = range[i] > 0.0 ? 1.0 : 0.0;
    lo = Vector::Zero(p);
    hi = ones;
  }
  try {
    return build_basis(lo, hi);
  } catch (const DegenerateRange&) {
    return build_basis(lo, lo + Vector::Ones(p));
  }
}

std::vector<Vector> project_all(const ProjectionBasis& basis,
                                std::span<const ObjectiveVector> points, bool normalize) {
  std::vector<Vector> out;
  out.reserve(points.size());
  if (!normalize) {
    for (const auto& f : points) out.push_back(project(basis, f));
    return out;
  }
  const Eigen::Index p = points.front().size();
  Vector lo = points.front();
  Vector hi = points.front();
  for (const auto& f : points) {
    lo = lo.cwiseMin(f);
    hi = hi.cwiseMax(f);
  }
  Vector scale = Vector::Ones(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (hi[i] > lo[i]) scale[i] = 1.0 / (hi[i] - lo[i]);
  }
  for (const auto& f : points) {
    out.push_back(project(basis, ((f - lo).array() * scale.array()).matrix() + basis.utopia));
  }
  return out;
}

Selection select_reference(const Archive& archive, const DecreasingFunction& fun,
                           const SelectionOptions& options) {
  if (archive.empty()) throw DomainError("select_reference: empty archive");
  const auto points = archive.objectives();
  Selection sel;
  sel.basis = basis_for(points, options.normalize);
  sel.projections = project_all(sel.basis, points, options.normalize);
  sel.densities.reserve(points.size());
  for (const auto& y : sel.projections) sel.densities.push_back(density_at(sel.projections, fun, y));

  for (std::size_t i = 1; i < sel.densities.size(); ++i) {
    if (sel.densities[i] < sel.densities[sel.index]) sel.index = i;
  }
  return sel;
}

std::vector<DensitySample> density_surface(std::span<const Vector> projections,
                                           const DecreasingFunction& fun, int per_axis) {
  if (projections.empty()) throw DomainError("density_surface: empty archive");
  if (per_axis < 2) throw DomainError("density_surface: need at least 2 nodes per axis");
  const Eigen::Index dim = projections.front().size();
  Vector lo = projections.front();
  Vector hi = projections.front();
  for (const auto& y : projections) {
    lo = lo.cwiseMin(y);
    hi = hi.cwiseMax(y);
  }
  lo.array() -= 2.0 * fun.sigma;
  hi.array() += 2.0 * fun.sigma;

  std::size_t total = 1;
  for (Eigen::Index d = 0; d < dim; ++d) total *= static_cast<std::size_t>(per_axis);
  std::vector<DensitySample> out;
  out.reserve(total);
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  for (std::size_t node = 0; node < total; ++node) {
    Vector y(dim);
    for (Eigen::Index d = 0; d < dim; ++d) {
      y[d] = lo[d] + (hi[d] - lo[d]) * idx[d] / (per_axis - 1);
    }
    out.push_back({y, density_at(projections, fun, y)});
    // odometer increment, last axis fastest
    for (Eigen::Index d = dim - 1; d >= 0; --d) {
      if (++idx[d] < per_axis) break;
      idx[d] = 0;
    }
  }
  return out;
}

}  // namespace motr::geometry
