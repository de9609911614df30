#include "motr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

namespace motr::metrics {

namespace {

std::string describe(const ObjectiveVector& f) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < f.size(); ++i) s += fmt::format("{}{:g}", i ? ", " : "", f[i]);
  return s + ")";
}

/// Area of the union of [a, ref] rectangles; points given as (x, y) pairs.
double sweep_2d(std::vector<std::pair<double, double>> pts, double rx, double ry) {
  std::sort(pts.begin(), pts.end());
  double area = 0.0;
  double ceiling = ry;
  for (const auto& [x, y] : pts) {
    if (y < ceiling) {
      area += (rx - x) * (ceiling - y);
      ceiling = y;
    }
  }
  return area;
}

double exact_3d(std::span<const ObjectiveVector> points, const ObjectiveVector& ref) {
  std::vector<const ObjectiveVector*> order;
  for (const auto& f : points) order.push_back(&f);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return (*a)[2] < (*b)[2]; });

  double volume = 0.0;
  std::vector<std::pair<double, double>> slab;
  for (std::size_t k = 0; k < order.size(); ++k) {
    slab.emplace_back((*order[k])[0], (*order[k])[1]);
    const double z = (*order[k])[2];
    const double z_next = (k + 1 < order.size()) ? (*order[k + 1])[2] : ref[2];
    if (z_next > z) volume += sweep_2d(slab, ref[0], ref[1]) * (z_next - z);
  }
  return volume;
}

void check_points(std::span<const ObjectiveVector> points, const ObjectiveVector& ref) {
  for (std::size_t k = 0; k < points.size(); ++k) {
    check_vector(points[k], ref.size(), "hypervolume point");
    if ((points[k].array() > ref.array()).any()) {
      throw DomainError(fmt::format("hypervolume: point {} {} does not dominate reference {}", k,
                                    describe(points[k]), describe(ref)));
    }
  }
}

}  // namespace

double gd(std::span<const ObjectiveVector> produced, std::span<const ObjectiveVector> front) {
  if (produced.empty()) throw DomainError("gd: empty produced set");
  if (front.empty()) throw DomainError("gd: empty front sample");
  double sum = 0.0;
  for (const auto& a : produced) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : front) {
      if (a.size() != b.size()) throw DimensionError("gd: dimension mismatch");
      best = std::min(best, (a - b).squaredNorm());
    }
    sum += best;
  }
  return std::sqrt(sum) / static_cast<double>(produced.size());
}

HvResult hypervolume_monte_carlo(std::span<const ObjectiveVector> points,
                                 const ObjectiveVector& ref, long samples, std::uint64_t seed) {
  check_points(points, ref);
  if (points.empty()) return {0.0, 0.0, false};
  if (samples < 1) throw DomainError("hypervolume: need at least one sample");
  Vector lo = points.front();
  for (const auto& f : points) lo = lo.cwiseMin(f);
  const Vector width = ref - lo;
  const double box_volume = width.prod();
  if (!(box_volume > 0.0)) return {0.0, 0.0, false};

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto p = ref.size();
  Vector z(p);
  long hits = 0;
  for (long s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < p; ++i) z[i] = lo[i] + width[i] * unif(rng);
    for (const auto& f : points) {
      if ((f.array() <= z.array()).all()) {
        ++hits;
        break;
      }
    }
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(samples);
  return {frac * box_volume,
          box_volume * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples)), false};
}

HvResult hypervolume(std::span<const ObjectiveVector> points, const ObjectiveVector& ref,
                     long samples, std::uint64_t seed) {
  if (ref.size() < 1 || !ref.allFinite()) throw DomainError("hypervolume: invalid reference");
  check_points(points, ref);
  if (points.empty()) return {};
  switch (ref.size()) {
    case 1: {
      double best = ref[0];
      for (const auto& f : points) best = std::min(best, f[0]);
      return {ref[0] - best, 0.0, true};
    }
    case 2: {
      std::vector<std::pair<double, double>> pts;
      for (const auto& f : points) pts.emplace_back(f[0], f[1]);
      return {sweep_2d(std::move(pts), ref[0], ref[1]), 0.0, true};
    }
    case 3:
      return {exact_3d(points, ref), 0.0, true};
    default:
      return hypervolume_monte_carlo(points, ref, samples, seed);
  }
}

ObjectiveVector default_hv_reference(std::span<const ObjectiveVector> points, double margin) {
  if (points.empty()) throw DomainError("default_hv_reference: no points");
  Vector lo = points.front();
  Vector hi = points.front();
  for (const auto& f : points) {
    lo = lo.cwiseMin(f);
    hi = hi.cwiseMax(f);
  }
  ObjectiveVector ref = hi;
  for (Eigen::Index i = 0; i < ref.size(); ++i) {
    const double range = hi[i] - lo[i];
    ref[i] += margin * (range > 0.0 ? range : std::max(1.0, std::abs(hi[i])));
  }
  return ref;
}

std::vector<ObjectiveVector> dominating_subset(std::span<const ObjectiveVector> points,
                                               const ObjectiveVector& ref) {
  std::vector<ObjectiveVector> out;
  for (const auto& f : points) {
    if (f.size() == ref.size() && (f.array() <= ref.array()).all()) out.push_back(f);
  }
  return out;
}

}  // namespace motr::metrics
