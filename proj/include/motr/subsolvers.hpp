#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "motr/core.hpp"
#include "motr/surrogate.hpp"

namespace motr::subsolvers {

/// B(center, radius), intersected with `box` when one is present.
struct TrustRegion {
  DecisionVector center;
  double radius = 1.0;
  std::optional<Box> box;

  bool contains(const DecisionVector& x, double tol = 1e-12) const;
};

/// Euclidean projection onto the ball-box intersection.
DecisionVector project_onto(const TrustRegion& region, const DecisionVector& y);

struct BallMinimum {
  DecisionVector x;
  double value = 0.0;
};

/// Global minimizer of a quadratic model over the trust region.
///
/// The ball problem is solved through the eigendecomposition of H and the
/// secular equation |s(lambda)| = radius, including the hard case. If the
/// ball minimizer leaves the box, projected-gradient runs over ball and box
/// refine it from several starts and the best value is returned.
BallMinimum min_quadratic_on_ball(const surrogate::QuadraticModel& m, const TrustRegion& region);

struct CriticalityResult {
  double omega = 0.0;
  Vector alpha;    ///< simplex weights of the min-norm convex combination
  Vector d_omega;  ///< -(sum alpha_i g_i)/|.|, or zero at a critical point
};

/// omega = -min_{|d|<=1} max_i g_i.d, computed as the minimum of
/// |sum alpha_i g_i| over the simplex (Frank-Wolfe with away steps).
/// `gradients` holds one gradient per column.
CriticalityResult omega(const Matrix& gradients);

/// Ideal point s_i = min over the region of m_i, with the minimizers.
struct IdealPoint {
  ObjectiveVector values;
  std::vector<DecisionVector> minimizers;
};

IdealPoint ideal_point(const surrogate::ModelVector& models, const TrustRegion& region);

struct ScalarizationResult {
  double t = 0.0;      ///< optimal value, clamped to [-1, 0]
  double raw_t = 0.0;  ///< value before clamping
  DecisionVector x_plus;
  ObjectiveVector r;   ///< r_i = f_i(center) - s_i
};

/// Trial point from min t s.t. f_center - m(x) + t r >= 0, x in region.
///
/// Solved as min_x max_i (m_i(x) - f_i)/r_i by multi-start projected
/// subgradient (center, the ideal minimizers and 8 seeded random points;
/// 300 steps of length 0.3 radius/sqrt(j)) followed by a smoothed
/// projected-gradient polish of the best point. Objectives with
/// r_i <= 1e-12 become the hard constraints m_i(x) <= f_i. If every r_i
/// vanishes the center is returned with t = 0.
ScalarizationResult pascoletti_serafini(const surrogate::ModelVector& models,
                                        const TrustRegion& region,
                                        const ObjectiveVector& f_center, const IdealPoint& ideal,
                                        std::uint64_t seed = 0);

ScalarizationResult pascoletti_serafini(const surrogate::ModelVector& models,
                                        const TrustRegion& region,
                                        const ObjectiveVector& f_center, std::uint64_t seed = 0);

}  // namespace motr::subsolvers
