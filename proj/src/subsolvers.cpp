#include "motr/subsolvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

namespace motr::subsolvers {

using surrogate::ModelVector;
using surrogate::QuadraticModel;

bool TrustRegion::contains(const DecisionVector& x, double tol) const {
  if ((x - center).norm() > radius * (1.0 + tol) + tol) return false;
  if (!box) return true;
  return (x.array() >= box->lower.array() - tol).all() &&
         (x.array() <= box->upper.array() + tol).all();
}

DecisionVector project_onto(const TrustRegion& region, const DecisionVector& y) {
  auto ball = [&](const Vector& v) -> Vector {
    const Vector d = v - region.center;
    const double len = d.norm();
    return len <= region.radius ? v : Vector(region.center + d * (region.radius / len));
  };
  if (!region.box) return ball(y);

  const Box& box = *region.box;
  Vector x = box.clip(y);
  if ((x - region.center).norm() <= region.radius) return x;

  // KKT: x(mu) = clip((y + mu c)/(1 + mu)); |x(mu) - c| decreases in mu.
  auto at = [&](double mu) -> Vector { return box.clip((y + mu * region.center) / (1.0 + mu)); };
  double lo = 0.0;
  double hi = 1.0;
  while ((at(hi) - region.center).norm() > region.radius && hi < 1e300) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((at(mid) - region.center).norm() > region.radius) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // hi is on the feasible side; a final ball step absorbs round-off
  return ball(at(hi));
}

namespace {

/// Exact minimizer of g.s + 1/2 s^T H s over |s| <= radius.
Vector ball_step(const Vector& g, const Matrix& H, double radius) {
  const Eigen::Index n = g.size();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (H + H.transpose()));
  const Vector lam = eig.eigenvalues();  // ascending
  const Matrix& Q = eig.eigenvectors();
  const Vector gamma = Q.transpose() * g;
  const double scale = std::max({1.0, lam.cwiseAbs().maxCoeff(), g.norm()});
  const double eps = 1e-12 * scale;

  auto step_norm = [&](double mu) {
    double s2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double den = lam[i] + mu;
      if (std::abs(gamma[i]) <= 0.0) continue;
      if (den <= 0.0) return std::numeric_limits<double>::infinity();
      s2 += gamma[i] * gamma[i] / (den * den);
    }
    return std::sqrt(s2);
  };
  auto step_at = [&](double mu) {
    Vector coeff = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double den = lam[i] + mu;
      if (den > 0.0) coeff[i] = -gamma[i] / den;
    }
    return Vector(Q * coeff);
  };

  const double lam_min = lam[0];
  if (lam_min > eps && step_norm(0.0) <= radius) return step_at(0.0);

  const double mu_low = std::max(0.0, -lam_min);
  // Hard case: g has no component along the leftmost eigenspace and the
  // step at mu_low stays inside; complete it along that eigenspace.
  double gamma_left = 0.0;
  for (Eigen::Index i = 0; i < n && lam[i] <= lam_min + eps; ++i) gamma_left += gamma[i] * gamma[i];
  if (lam_min <= eps && std::sqrt(gamma_left) <= 1e-10 * scale) {
    Vector coeff = Vector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (lam[i] > lam_min + eps) coeff[i] = -gamma[i] / (lam[i] + mu_low);
    }
    const double len = coeff.norm();
    if (len <= radius) {
      coeff[0] += std::sqrt(std::max(0.0, radius * radius - len * len));
      return Q * coeff;
    }
  }

  // Safeguarded Newton on 1/|s(mu)| - 1/radius over (mu_low, mu_high].
  double lo = mu_low;
  double hi = mu_low + g.norm() / radius + eps;
  while (step_norm(hi) > radius) hi = 2.0 * hi + eps;
  double mu = hi;
  for (int it = 0; it < 200; ++it) {
    const double len = step_norm(mu);
    if (std::abs(len - radius) <= 1e-13 * radius) break;
    if (len > radius) {
      lo = mu;
    } else {
      hi = mu;
    }
    double d3 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double den = lam[i] + mu;
      if (den > 0.0) d3 += gamma[i] * gamma[i] / (den * den * den);
    }
    double next = 0.5 * (lo + hi);
    if (std::isfinite(len) && d3 > 0.0) {
      const double phi = 1.0 / len - 1.0 / radius;
      const double dphi = d3 / (len * len * len);
      const double newton = mu - phi / dphi;
      if (newton > lo && newton < hi) next = newton;
    }
    if (next == mu) break;
    mu = next;
    if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
  }
  Vector s = step_at(mu);
  if (s.norm() > radius) s *= radius / s.norm();
  return s;
}

/// Projected gradient over the region from x, fixed step 1/L.
Vector projected_descent(const QuadraticModel& m, const TrustRegion& region, Vector x) {
  const double lip = std::max(1e-12, m.H.cwiseAbs().rowwise().sum().maxCoeff());
  double fx = m.eval(x);
  for (int it = 0; it < 2000; ++it) {
    Vector next = project_onto(region, x - m.grad(x) / lip);
    const double fn = m.eval(next);
    if (!(fn < fx) || (next - x).norm() <= 1e-14 * (1.0 + region.radius)) break;
    x = std::move(next);
    fx = fn;
  }
  return x;
}

}  // namespace

BallMinimum min_quadratic_on_ball(const QuadraticModel& m, const TrustRegion& region) {
  if (!(region.radius > 0.0)) throw DomainError("trust region radius must be positive");
  check_vector(region.center, m.center.size(), "trust region center");

  // model expanded around the region center
  const Vector g_c = m.grad(region.center);
  const Vector ball_x = region.center + ball_step(g_c, m.H, region.radius);
  Vector best = project_onto(region, ball_x);
  double best_value = m.eval(best);

  if (region.box && !region.box->contains(ball_x)) {
    std::vector<Vector> starts{best, region.center};
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m.H + m.H.transpose()));
    for (Eigen::Index k = 0; k < m.H.cols(); ++k) {
      starts.push_back(project_onto(region, region.center + region.radius * eig.eigenvectors().col(k)));
      starts.push_back(project_onto(region, region.center - region.radius * eig.eigenvectors().col(k)));
    }
    starts.push_back(project_onto(region, region.center - region.radius * g_c.normalized()));
    for (const auto& s : starts) {
      Vector x = projected_descent(m, region, s);
      const double v = m.eval(x);
      if (v < best_value) {
        best_value = v;
        best = std::move(x);
      }
    }
  }
  const double center_value = m.eval(region.center);
  if (!(best_value <= center_value)) {
    best = region.center;
    best_value = center_value;
  }
  return {best, best_value};
}

CriticalityResult omega(const Matrix& gradients) {
  const Eigen::Index p = gradients.cols();
  if (p < 1) throw DimensionError("omega: need at least one gradient");
  if (!gradients.allFinite()) throw DomainError("omega: non-finite gradient");

  const Matrix gram = gradients.transpose() * gradients;
  Vector alpha = Vector::Zero(p);
  Eigen::Index start = 0;
  gram.diagonal().minCoeff(&start);
  alpha[start] = 1.0;

  for (int it = 0; it < 500 && p > 1; ++it) {
    const Vector grad = 2.0 * gram * alpha;
    const double at_alpha = grad.dot(alpha);
    Eigen::Index fw = 0;
    grad.minCoeff(&fw);
    Eigen::Index away = -1;
    for (Eigen::Index i = 0; i < p; ++i) {
      if (alpha[i] > 0.0 && (away < 0 || grad[i] > grad[away])) away = i;
    }
    const double fw_gap = at_alpha - grad[fw];
    if (fw_gap <= 1e-10) break;
    const double away_gap = grad[away] - at_alpha;

    Vector dir;
    double max_step = 1.0;
    if (fw_gap >= away_gap || alpha[away] >= 1.0) {
      dir = -alpha;
      dir[fw] += 1.0;
    } else {
      dir = alpha;
      dir[away] -= 1.0;
      max_step = alpha[away] / (1.0 - alpha[away]);
    }
    // exact line search on the quadratic |G(alpha + s dir)|^2
    const double curv = dir.dot(gram * dir);
    const double slope = alpha.dot(gram * dir);
    double step = curv > 0.0 ? -slope / curv : max_step;
    step = std::clamp(step, 0.0, max_step);
    if (step <= 0.0) break;
    alpha += step * dir;
    alpha = alpha.cwiseMax(0.0);
    alpha /= alpha.sum();
  }

  CriticalityResult out;
  const Vector v = gradients * alpha;
  out.omega = v.norm();
  out.alpha = alpha;
  out.d_omega = out.omega > 1e-12 ? Vector(-v / out.omega) : Vector(Vector::Zero(gradients.rows()));
  return out;
}

IdealPoint ideal_point(const ModelVector& models, const TrustRegion& region) {
  IdealPoint ideal;
  ideal.values.resize(static_cast<Eigen::Index>(models.size()));
  for (std::size_t i = 0; i < models.size(); ++i) {
    auto res = min_quadratic_on_ball(models[i], region);
    ideal.values[static_cast<Eigen::Index>(i)] = res.value;
    ideal.minimizers.push_back(std::move(res.x));
  }
  return ideal;
}

namespace {

constexpr double kZeroDirection = 1e-12;
constexpr double kHardTolerance = 1e-10;

/// max_i (m_i(x) - f_i)/r_i with the hard constraints for vanishing r_i.
class MinimaxObjective {
 public:
  MinimaxObjective(const ModelVector& models, const ObjectiveVector& f, const ObjectiveVector& r)
      : models_(models), f_(f), r_(r) {
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      (r[i] > kZeroDirection ? scaled_ : hard_).push_back(static_cast<std::size_t>(i));
    }
  }

  bool has_scaled() const { return !scaled_.empty(); }

  /// Largest hard-constraint violation (<= 0 when feasible).
  double violation(const Vector& x, std::size_t* worst = nullptr) const {
    double v = -std::numeric_limits<double>::infinity();
    for (auto i : hard_) {
      const double c = models_[i].eval(x) - f_[static_cast<Eigen::Index>(i)] - kHardTolerance;
      if (c > v) {
        v = c;
        if (worst) *worst = i;
      }
    }
    return v;
  }

  double value(const Vector& x) const {
    if (violation(x) > 0.0) return std::numeric_limits<double>::infinity();
    double v = -std::numeric_limits<double>::infinity();
    for (auto i : scaled_) v = std::max(v, ratio(i, x));
    return v;
  }

  /// Normalized subgradient direction of the value (or of the worst
  /// violated hard constraint).
  Vector subgradient(const Vector& x) const {
    std::size_t worst = 0;
    if (violation(x, &worst) > 0.0) return models_[worst].grad(x);
    std::size_t arg = scaled_.front();
    double v = -std::numeric_limits<double>::infinity();
    for (auto i : scaled_) {
      const double ri = ratio(i, x);
      if (ri > v) {
        v = ri;
        arg = i;
      }
    }
    return models_[arg].grad(x) / r_[static_cast<Eigen::Index>(arg)];
  }

  /// Log-sum-exp smoothing with temperature tau; +inf when infeasible.
  double smooth(const Vector& x, double tau, Vector* grad) const {
    if (violation(x) > 0.0) return std::numeric_limits<double>::infinity();
    double top = -std::numeric_limits<double>::infinity();
    std::vector<double> vals;
    vals.reserve(scaled_.size());
    for (auto i : scaled_) {
      vals.push_back(ratio(i, x));
      top = std::max(top, vals.back());
    }
    double sum = 0.0;
    std::vector<double> w(vals.size());
    for (std::size_t k = 0; k < vals.size(); ++k) {
      w[k] = std::exp((vals[k] - top) / tau);
      sum += w[k];
    }
    if (grad) {
      grad->setZero(x.size());
      for (std::size_t k = 0; k < vals.size(); ++k) {
        const auto i = scaled_[k];
        *grad += (w[k] / sum) * models_[i].grad(x) / r_[static_cast<Eigen::Index>(i)];
      }
    }
    return top + tau * std::log(sum);
  }

 private:
  double ratio(std::size_t i, const Vector& x) const {
    const auto k = static_cast<Eigen::Index>(i);
    return (models_[i].eval(x) - f_[k]) / r_[k];
  }

  const ModelVector& models_;
  const ObjectiveVector& f_;
  const ObjectiveVector& r_;
  std::vector<std::size_t> scaled_;
  std::vector<std::size_t> hard_;
};

Vector subgradient_run(const MinimaxObjective& obj, const TrustRegion& region, Vector x,
                       double* best_value) {
  Vector best = x;
  double best_v = obj.value(x);
  for (int j = 1; j <= 300; ++j) {
    Vector g = obj.subgradient(x);
    const double len = g.norm();
    if (!(len > 0.0)) break;
    const double step = 0.3 * region.radius / std::sqrt(static_cast<double>(j));
    x = project_onto(region, x - step * g / len);
    const double v = obj.value(x);
    if (v < best_v) {
      best_v = v;
      best = x;
    }
  }
  *best_value = best_v;
  return best;
}

/// Decreasing-temperature projected gradient on the log-sum-exp smoothing.
Vector smooth_polish(const MinimaxObjective& obj, const TrustRegion& region, Vector x) {
  double step = region.radius;
  for (double tau = 1e-2; tau >= 1e-9; tau *= 0.2) {
    Vector grad;
    double fx = obj.smooth(x, tau, &grad);
    if (!std::isfinite(fx)) break;
    for (int it = 0; it < 100; ++it) {
      bool moved = false;
      for (int bt = 0; bt < 50; ++bt) {
        Vector trial = project_onto(region, x - step * grad);
        const double ft = obj.smooth(trial, tau, nullptr);
        const double dist2 = (trial - x).squaredNorm();
        if (std::isfinite(ft) && ft <= fx - 1e-4 * dist2 / step && dist2 > 0.0) {
          x = std::move(trial);
          fx = obj.smooth(x, tau, &grad);
          step *= 2.0;
          moved = true;
          break;
        }
        step *= 0.5;
        if (step < 1e-16 * region.radius) break;
      }
      if (!moved) break;
    }
    step = std::max(step, 1e-6 * region.radius);
  }
  return x;
}

}  // namespace

ScalarizationResult pascoletti_serafini(const ModelVector& models, const TrustRegion& region,
                                        const ObjectiveVector& f_center, const IdealPoint& ideal,
                                        std::uint64_t seed) {
  const auto p = static_cast<Eigen::Index>(models.size());
  check_vector(f_center, p, "pascoletti_serafini: f_center");
  check_vector(ideal.values, p, "pascoletti_serafini: ideal point");

  ScalarizationResult out;
  out.r = (f_center - ideal.values).cwiseMax(0.0);
  out.x_plus = region.center;

  MinimaxObjective obj(models, f_center, out.r);
  if (!obj.has_scaled()) return out;

  std::vector<Vector> starts{region.center};
  for (const auto& m : ideal.minimizers) starts.push_back(project_onto(region, m));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  const auto n = region.center.size();
  for (int k = 0; k < 8; ++k) {
    Vector dir(n);
    for (Eigen::Index j = 0; j < n; ++j) dir[j] = normal(rng);
    const double rad = region.radius * std::pow(unif(rng), 1.0 / static_cast<double>(n));
    starts.push_back(project_onto(region, region.center + rad * dir.normalized()));
  }

  Vector best = region.center;
  double best_value = obj.value(region.center);
  for (const auto& s : starts) {
    double v = 0.0;
    Vector x = subgradient_run(obj, region, s, &v);
    if (v < best_value) {
      best_value = v;
      best = std::move(x);
    }
  }
  Vector polished = smooth_polish(obj, region, best);
  const double pv = obj.value(polished);
  if (pv < best_value) {
    best_value = pv;
    best = std::move(polished);
  }

  out.x_plus = std::move(best);
  out.raw_t = best_value;
  out.t = std::clamp(best_value, -1.0, 0.0);
  return out;
}

ScalarizationResult pascoletti_serafini(const ModelVector& models, const TrustRegion& region,
                                        const ObjectiveVector& f_center, std::uint64_t seed) {
  return pascoletti_serafini(models, region, f_center, ideal_point(models, region), seed);
}

}  // namespace motr::subsolvers
