#pragma once

#include <optional>
#include <span>
#include <vector>

#include "motr/core.hpp"

namespace motr::surrogate {

/// Number of coefficients of a full quadratic in n variables.
constexpr int quadratic_size(int n) { return (n + 1) * (n + 2) / 2; }

/// Interpolation points inside B(center, radius); points[0] is the center.
struct SampleSet {
  DecisionVector center;
  double radius = 0.0;
  std::vector<DecisionVector> points;
};

/// Condition number threshold for accepting a sample set.
inline constexpr double kMaxCondition = 1e8;

/// Deterministic poised set of (n+1)(n+2)/2 points.
///
/// Starts from center, center +- (radius/2) e_j and center +
/// (radius/2)(e_a + e_b)/sqrt(2). When a box is given, steps that would
/// leave it are shortened to the available room; a coordinate pinned on a
/// face gets two steps into the interior instead of a +- pair. If the
/// monomial matrix is still ill-conditioned, up to 10 rounds replace the
/// point whose Lagrange polynomial is largest over the region by its
/// maximizer.
///
/// Throws DegenerateRegion when no acceptable set is found.
SampleSet generate_sample_set(const DecisionVector& center, double radius,
                              const std::optional<Box>& box = std::nullopt);

/// 2-norm condition number of the monomial matrix in coordinates scaled by
/// the radius.
double interpolation_condition(const SampleSet& sample);

/// m(x) = c + g.(x - center) + 1/2 (x - center)^T H (x - center)
struct QuadraticModel {
  DecisionVector center;
  double c = 0.0;
  Vector g;
  Matrix H;

  double eval(const DecisionVector& x) const;
  Vector grad(const DecisionVector& x) const;
};

/// One model per objective, all built on the same sample set.
struct ModelVector {
  std::vector<QuadraticModel> models;

  std::size_t size() const { return models.size(); }
  const QuadraticModel& operator[](std::size_t i) const { return models[i]; }
  ObjectiveVector eval(const DecisionVector& x) const;
  /// n x p matrix whose columns are the model gradients at x.
  Matrix gradients(const DecisionVector& x) const;
};

/// Quadratic interpolating `values` on the sample points. The constant term
/// is the value at the center exactly.
///
/// Throws SingularInterpolation when the system is singular.
QuadraticModel fit_model(const SampleSet& sample, std::span<const double> values);

/// Fits every objective; evals[k] belongs to sample.points[k].
ModelVector fit_models(const SampleSet& sample, std::span<const ObjectiveVector> evals);

double model_eval(const QuadraticModel& m, const DecisionVector& x);
Vector model_grad(const QuadraticModel& m, const DecisionVector& x);

}  // namespace motr::surrogate
