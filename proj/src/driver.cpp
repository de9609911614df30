#include "motr/driver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "motr/log.hpp"
#include "motr/metrics.hpp"

namespace motr {

using geometry::DecreasingFunction;
using surrogate::ModelVector;

geometry::DecreasingFunction SolverConfig::decreasing_function() const {
  return influence == DecreasingFunction::Kind::Sharing
             ? DecreasingFunction::sharing(sigma, sharing_alpha)
             : DecreasingFunction::gaussian(sigma);
}

void SolverConfig::validate(const Problem& problem) const {
  if (x0.size() != 0) {
    if (x0.size() != problem.n) {
      throw ConfigError("x0", fmt::format("expected {} coordinates, got {}", problem.n, x0.size()));
    }
    if (!x0.allFinite()) throw ConfigError("x0", "coordinates must be finite");
    if (!problem.box.contains(x0)) throw ConfigError("x0", "initial point outside the box");
  }
  if (!(delta0 > 0.0)) throw ConfigError("delta0", "must be positive");
  if (!(delta_tol >= 0.0)) throw ConfigError("delta_tol", "must be nonnegative");
  if (!(eta1 > 0.0)) throw ConfigError("eta1", "must be positive");
  if (!(eta1 <= eta2)) throw ConfigError("eta2", "must satisfy eta1 <= eta2");
  if (!(eta2 < 1.0)) throw ConfigError("eta2", "must be below 1");
  if (!(gamma0 > 0.0 && gamma0 < 1.0)) throw ConfigError("gamma0", "must lie in (0, 1)");
  if (!(gamma1 > 0.0 && gamma1 < 1.0)) throw ConfigError("gamma1", "must lie in (0, 1)");
  if (!(gamma1 <= gamma2 && gamma2 <= 1.0)) {
    throw ConfigError("gamma2", "must satisfy gamma1 <= gamma2 <= 1");
  }
  if (!(expand_factor > 1.0)) throw ConfigError("expand_factor", "must exceed 1");
  if (!(sigma > 0.0)) throw ConfigError("sigma", "must be positive");
  if (sharing_alpha < 1) throw ConfigError("alpha", "must be a positive integer");
  if (eval_budget < 1) throw ConfigError("eval_budget", "must be positive");
  if (max_iterations < 1) throw ConfigError("max_iterations", "must be positive");
  if (max_inner_shrinks < 0) throw ConfigError("max_inner_shrinks", "must be nonnegative");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::BudgetExhausted:
      return "BudgetExhausted";
    case Termination::MaxIterations:
      return "MaxIterations";
    case Termination::AllRadiiBelowTol:
      return "AllRadiiBelowTol";
  }
  return "unknown";
}

double reduction_ratio(const ModelVector& models, const DecisionVector& center,
                       const ObjectiveVector& f_center, const DecisionVector& x_plus,
                       const ObjectiveVector& f_plus, double t_plus, RhoRule rule) {
  if (t_plus >= -1e-12) return 0.0;
  const auto p = static_cast<Eigen::Index>(models.size());
  check_vector(f_center, p, "reduction_ratio: f_center");
  check_vector(f_plus, p, "reduction_ratio: f_plus");
  double combined = rule == RhoRule::Min ? std::numeric_limits<double>::infinity()
                                         : -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < p; ++i) {
    const auto& m = models[static_cast<std::size_t>(i)];
    const double at_center = m.eval(center);
    const double predicted = at_center - m.eval(x_plus);
    if (std::abs(predicted) <= 1e-14 * (1.0 + std::abs(at_center))) return 0.0;
    const double ratio = (f_center[i] - f_plus[i]) / predicted;
    combined = rule == RhoRule::Min ? std::min(combined, ratio) : std::max(combined, ratio);
  }
  return combined;
}

double updated_radius(double rho, double delta_tilde, const SolverConfig& config) {
  double r = delta_tilde;
  if (rho < config.eta1) {
    r = config.gamma1 * delta_tilde;
  } else if (rho >= config.eta2) {
    r = std::min(config.expand_factor * delta_tilde, kExpandCap * config.delta0);
  }
  return std::max(r, config.delta_tol);
}

IterationOutcome evaluate_iteration(double rho, bool archive_changed, double eta1) {
  return (rho >= eta1 && archive_changed) ? IterationOutcome::Advance : IterationOutcome::Retry;
}

Solver::Solver(Problem problem, SolverConfig config, RunOptions options)
    : problem_(std::move(problem)),
      config_(std::move(config)),
      options_(std::move(options)),
      cache_(config_.eval_budget) {
  config_.validate(problem_);
  if (config_.x0.size() == 0) config_.x0 = problem_.box.center();
}

subsolvers::TrustRegion Solver::region(const DecisionVector& center, double radius) const {
  return {center, radius, problem_.box};
}

void Solver::initialize() {
  if (!archive_.empty()) return;
  const ObjectiveVector f0 = cache_.evaluate(problem_, config_.x0);
  archive_.insert({config_.x0, f0, config_.delta0, 0});
}

Solver::Reference Solver::step1_select_reference() {
  const auto sel = geometry::select_reference(archive_, config_.decreasing_function(),
                                              {config_.normalize_objectives});
  const auto& entry = archive_[sel.index];
  if (previous_reference_ && archive_.find(*previous_reference_) == sel.index) {
    archive_.set_radius(sel.index, entry.radius * config_.gamma0);
  }
  previous_reference_ = entry.x;
  return {sel.index, entry.x, entry.f, entry.radius};
}

Solver::ModelStage Solver::step2_model_loop(const DecisionVector& center,
                                            const ObjectiveVector& f_center, double delta_tilde) {
  if (!(delta_tilde > 0.0)) throw DomainError("step2: radius must be positive");
  ModelStage stage;
  stage.delta_tilde = delta_tilde;
  std::vector<ObjectiveVector> evals;
  for (;;) {
    const auto sample = surrogate::generate_sample_set(center, stage.delta_tilde, problem_.box);
    evals.clear();
    for (const auto& y : sample.points) {
      evals.push_back(cache_.evaluate(problem_, y));
      samples_.push_back(y);
    }
    evals.front() = f_center;
    stage.models = surrogate::fit_models(sample, evals);
    stage.omega_m = subsolvers::omega(stage.models.gradients(center)).omega;
    if (stage.delta_tilde <= std::max(config_.delta_tol, stage.omega_m)) break;
    if (stage.shrinks >= config_.max_inner_shrinks) {
      logger().warn("criticality loop hit the cap of {} shrinks (radius {:g}, omega_m {:g})",
                    config_.max_inner_shrinks, stage.delta_tilde, stage.omega_m);
      break;
    }
    stage.delta_tilde *= config_.gamma0;
    ++stage.shrinks;
  }
  return stage;
}

bool Solver::step6_7_update(double rho, double delta_tilde, const std::vector<DecisionVector>& points,
                            long k) {
  const double radius = updated_radius(rho, delta_tilde, config_);
  bool changed = false;
  for (const auto& x : points) {
    // entries already in X^{k-1} keep their radius
    if (archive_.find(x)) continue;
    const auto f = cache_.lookup(x);
    if (!f) continue;
    if (archive_.insert({x, *f, radius, static_cast<int>(k)}) == InsertOutcome::Accepted) {
      changed = true;
    }
  }
  return changed;
}

void Solver::log_quality(IterationRecord& rec) {
  const auto front_pts = archive_.objectives();
  if (!options_.front.empty()) rec.gd = metrics::gd(front_pts, options_.front);
  if (!options_.log_hv) return;
  if (!options_.hv_reference) {
    options_.hv_reference = metrics::default_hv_reference(cache_.values());
  }
  const auto inside = metrics::dominating_subset(front_pts, *options_.hv_reference);
  if (inside.size() != front_pts.size() && !hv_warned_) {
    logger().warn("{} archive point(s) do not dominate the HV reference and are left out",
                  front_pts.size() - inside.size());
    hv_warned_ = true;
  }
  rec.hv = metrics::hypervolume(inside, *options_.hv_reference).value;
}

RunResult Solver::run() {
  RunResult result;
  const auto finish = [&](Termination reason) {
    result.reason = reason;
    result.archive = archive_;
    result.evaluations = cache_.eval_count();
    result.hv_reference = options_.hv_reference;
    return result;
  };

  try {
    initialize();
  } catch (const BudgetExhausted&) {
    return finish(Termination::BudgetExhausted);
  }

  bool retry = false;
  Reference ref;
  for (long k = 1;; ++k) {
    if (k > config_.max_iterations) return finish(Termination::MaxIterations);

    if (retry) {
      ref.index = *archive_.find(ref.x);
      ref.delta_tilde = archive_[ref.index].radius;
    } else {
      ref = step1_select_reference();
    }
    clear_samples();

    IterationRecord rec;
    rec.k = k;
    rec.ref_index = ref.index;
    ModelStage stage;
    subsolvers::ScalarizationResult trial;
    double rho = 0.0;
    DecisionVector x_plus;
    try {
      stage = step2_model_loop(ref.x, ref.f, ref.delta_tilde);
      const auto tr = region(ref.x, stage.delta_tilde);
      const auto ideal = subsolvers::ideal_point(stage.models, tr);
      trial = subsolvers::pascoletti_serafini(stage.models, tr, ref.f, ideal,
                                              config_.seed * 0x9E3779B97F4A7C15ULL + k);
      if (trial.raw_t < -1.0 - 1e-6) {
        logger().warn("iteration {}: scalarization returned t = {:g} below -1", k, trial.raw_t);
      }
      x_plus = problem_.box.clip(trial.x_plus);
      const ObjectiveVector f_plus = cache_.evaluate(problem_, x_plus);
      rho = reduction_ratio(stage.models, ref.x, ref.f, x_plus, f_plus, trial.t, config_.rho_rule);
    } catch (const BudgetExhausted&) {
      // Steps 6-7 need rho, so an interrupted iteration leaves the archive alone.
      return finish(Termination::BudgetExhausted);
    } catch (const DegenerateRegion& e) {
      logger().warn("iteration {}: {}", k, e.what());
      archive_.set_radius(ref.index, config_.gamma1 * ref.delta_tilde);
      retry = false;
      continue;
    } catch (const SingularInterpolation& e) {
      logger().warn("iteration {}: {}", k, e.what());
      archive_.set_radius(ref.index, config_.gamma1 * ref.delta_tilde);
      retry = false;
      continue;
    }

    std::vector<DecisionVector> candidates = samples_;
    candidates.push_back(x_plus);
    const bool changed = step6_7_update(rho, stage.delta_tilde, candidates, k);
    const auto outcome = evaluate_iteration(rho, changed, config_.eta1);

    retry = false;
    if (outcome == IterationOutcome::Retry) {
      // The reference keeps its place only while it is still nondominated
      // and its shrunk radius stays at or above delta_tol.
      if (auto idx = archive_.find(ref.x)) {
        const double shrunk = config_.gamma1 * stage.delta_tilde;
        archive_.set_radius(*idx, shrunk);
        retry = shrunk >= config_.delta_tol;
      }
    }

    rec.delta = stage.delta_tilde;
    rec.inner_shrinks = stage.shrinks;
    rec.t_plus = trial.t;
    rec.rho = rho;
    rec.accepted = outcome == IterationOutcome::Advance;
    rec.archive_size = archive_.size();
    rec.evals = cache_.eval_count();
    rec.omega_m = stage.omega_m;
    log_quality(rec);
    logger().debug("k={} ref={} delta={:g} shrinks={} t={:g} rho={:g} {} |X|={} evals={}", k,
                   rec.ref_index, rec.delta, rec.inner_shrinks, rec.t_plus, rec.rho,
                   rec.accepted ? "advance" : "retry", rec.archive_size, rec.evals);
    result.iterations.push_back(rec);
    result.final_reference = ref.x;
    result.final_omega_m = stage.omega_m;

    const bool all_small = std::all_of(archive_.entries().begin(), archive_.entries().end(),
                                       [&](const ArchiveEntry& e) { return e.radius < config_.delta_tol; });
    if (all_small && stage.omega_m < config_.delta_tol) return finish(Termination::AllRadiiBelowTol);
  }
}

RunResult run(const Problem& problem, const SolverConfig& config, const RunOptions& options) {
  Solver solver(problem, config, options);
  return solver.run();
}

}  // namespace motr
