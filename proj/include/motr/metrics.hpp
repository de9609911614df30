#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "motr/core.hpp"

namespace motr::metrics {

/// Generational distance sqrt(sum_j d_j^2) / M, d_j being the distance of
/// produced point j to its nearest front sample and M the number of
/// produced points.
double gd(std::span<const ObjectiveVector> produced, std::span<const ObjectiveVector> front);

struct HvResult {
  double value = 0.0;
  double std_error = 0.0;  ///< zero for exact results
  bool exact = true;
};

/// Lebesgue measure of the union of boxes [f, ref]. Exact for p <= 3,
/// Monte Carlo with `samples` draws otherwise.
///
/// Throws DomainError when a point does not weakly dominate ref.
HvResult hypervolume(std::span<const ObjectiveVector> points, const ObjectiveVector& ref,
                     long samples = 1'000'000, std::uint64_t seed = 0);

/// Monte Carlo estimate for any p; exposed for cross-checking the sweeps.
HvResult hypervolume_monte_carlo(std::span<const ObjectiveVector> points,
                                 const ObjectiveVector& ref, long samples, std::uint64_t seed);

/// Componentwise max plus `margin` times the per-objective range (or times
/// max(1, |max|) when the range is zero).
ObjectiveVector default_hv_reference(std::span<const ObjectiveVector> points, double margin = 0.1);

/// Points that weakly dominate ref, i.e. those hypervolume() accepts.
std::vector<ObjectiveVector> dominating_subset(std::span<const ObjectiveVector> points,
                                               const ObjectiveVector& ref);

}  // namespace motr::metrics
