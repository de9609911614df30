#pragma once

#include <span>
#include <vector>

#include "motr/core.hpp"

namespace motr::geometry {

/// Orthonormal frame of objective space. Column 0 points from the utopia
/// point towards the anti-utopia point; columns 1..p-1 span the projection
/// hyperplane through the utopia point.
struct ProjectionBasis {
  ObjectiveVector utopia;
  ObjectiveVector anti_utopia;
  Matrix j;
};

/// j_1 = (B - G)/|B - G|, the rest by Gram-Schmidt on the Cartesian unit
/// vectors i_2..i_p. A unit vector that is (numerically) inside the span of
/// the frame built so far is skipped in favour of the next untried one,
/// with i_1 tried last.
///
/// Throws DegenerateRange when |B - G| < 1e-12.
ProjectionBasis build_basis(const ObjectiveVector& utopia, const ObjectiveVector& anti_utopia);

/// Hyperplane coordinates y_k = (f - G) . j_{k+1}, k = 1..p-1.
Vector project(const ProjectionBasis& basis, const ObjectiveVector& f);

/// Decreasing function phi : [0, inf) -> R used for influence functions.
struct DecreasingFunction {
  enum class Kind { Sharing, Gaussian };
  Kind kind = Kind::Gaussian;
  double sigma = 0.05;
  int alpha = 1;

  static DecreasingFunction sharing(double sigma, int alpha);
  static DecreasingFunction gaussian(double sigma);
};

/// Sharing: 1 - (d/sigma)^alpha for d <= sigma, 0 beyond.
/// Gaussian: exp(-d^2 / (2 sigma^2)).
double phi(const DecreasingFunction& fun, double d);

/// D(y) = sum_i phi(|Pr_i - y|).
double density_at(std::span<const Vector> projections, const DecreasingFunction& fun,
                  const Vector& y);

struct SelectionOptions {
  /// Divide each objective by its archive range before projecting.
  bool normalize = false;
};

/// Everything density-based selection computes, kept for logging and
/// plot dumps.
struct Selection {
  std::size_t index = 0;
  ProjectionBasis basis;
  std::vector<Vector> projections;
  std::vector<double> densities;
};

/// Basis from the componentwise min/max of `points`. Falls back to the
/// diagonal direction when the range is degenerate.
ProjectionBasis basis_for(std::span<const ObjectiveVector> points, bool normalize);

/// Projects all points, normalizing by the basis range when requested.
std::vector<Vector> project_all(const ProjectionBasis& basis,
                                std::span<const ObjectiveVector> points, bool normalize);

/// Archive index with the smallest density at its own projection; ties go
/// to the lowest index.
Selection select_reference(const Archive& archive, const DecreasingFunction& fun,
                           const SelectionOptions& options = {});

/// One grid node of a density dump.
struct DensitySample {
  Vector y;
  double density;
};

/// Density on a regular grid spanning the projections (padded by 2 sigma).
/// `per_axis` nodes along each of the p-1 hyperplane axes.
std::vector<DensitySample> density_surface(std::span<const Vector> projections,
                                           const DecreasingFunction& fun, int per_axis);

}  // namespace motr::geometry
