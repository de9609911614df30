#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "motr/core.hpp"
#include "motr/geometry.hpp"
#include "motr/subsolvers.hpp"
#include "motr/surrogate.hpp"

namespace motr {

/// How per-objective reduction ratios are combined.
enum class RhoRule { Min, Max };

struct SolverConfig {
  DecisionVector x0;
  double delta0 = 1.0;
  double delta_tol = 0.05;
  double eta1 = 0.5;
  double eta2 = 0.75;
  double gamma0 = 0.7;
  double gamma1 = 0.5;
  double gamma2 = 1.0;
  double expand_factor = 2.0;
  double sigma = 0.05;
  geometry::DecreasingFunction::Kind influence = geometry::DecreasingFunction::Kind::Gaussian;
  int sharing_alpha = 1;
  bool normalize_objectives = false;
  long eval_budget = 1000;
  long max_iterations = 100000;
  std::uint64_t seed = 0;
  RhoRule rho_rule = RhoRule::Min;
  int max_inner_shrinks = 50;

  geometry::DecreasingFunction decreasing_function() const;

  /// Throws ConfigError naming the first violated constraint.
  void validate(const Problem& problem) const;
};

/// Expanded radii never exceed this multiple of delta0.
inline constexpr double kExpandCap = 10.0;

struct IterationRecord {
  long k = 0;
  std::size_t ref_index = 0;
  double delta = 0.0;  ///< trust radius after the criticality loop
  int inner_shrinks = 0;
  double t_plus = 0.0;
  double rho = 0.0;
  bool accepted = false;
  std::size_t archive_size = 0;
  long evals = 0;
  std::optional<double> gd;
  std::optional<double> hv;
  double omega_m = 0.0;
};

enum class Termination { BudgetExhausted, MaxIterations, AllRadiiBelowTol };

std::string to_string(Termination t);

struct RunResult {
  Archive archive;
  std::vector<IterationRecord> iterations;
  Termination reason = Termination::BudgetExhausted;
  long evaluations = 0;
  /// Reference of the last completed iteration, as a decision vector.
  std::optional<DecisionVector> final_reference;
  double final_omega_m = 0.0;
  std::optional<ObjectiveVector> hv_reference;
};

/// Optional per-iteration quality logging.
struct RunOptions {
  /// Front sample for GD; GD is not logged when empty.
  std::vector<ObjectiveVector> front;
  bool log_hv = false;
  /// Fixed HV reference; when unset it is taken after the first iteration
  /// from the evaluations so far (componentwise max plus 10% of the range).
  std::optional<ObjectiveVector> hv_reference;
};

/// Step 5. Zero when t_plus vanishes or some model predicts no change;
/// otherwise the min (or max) over objectives of actual over predicted
/// decrease.
double reduction_ratio(const surrogate::ModelVector& models, const DecisionVector& center,
                       const ObjectiveVector& f_center, const DecisionVector& x_plus,
                       const ObjectiveVector& f_plus, double t_plus, RhoRule rule = RhoRule::Min);

/// Step 6 radius for points created in an iteration: gamma1 * delta on
/// failure, delta when rho is in [eta1, eta2), and
/// min(expand_factor * delta, kExpandCap * delta0) beyond. The result is
/// floored at delta_tol.
double updated_radius(double rho, double delta_tilde, const SolverConfig& config);

enum class IterationOutcome { Advance, Retry };

/// Step 8: Advance iff rho >= eta1 and the archive gained an entry.
IterationOutcome evaluate_iteration(double rho, bool archive_changed, double eta1);

/// Trust-region state machine for one run.
class Solver {
 public:
  Solver(Problem problem, SolverConfig config, RunOptions options = {});

  /// Runs to a termination reason. BudgetExhausted is a normal stop.
  RunResult run();

  struct Reference {
    std::size_t index = 0;
    DecisionVector x;
    ObjectiveVector f;
    double delta_tilde = 0.0;
  };

  struct ModelStage {
    surrogate::ModelVector models;
    double delta_tilde = 0.0;
    int shrinks = 0;
    double omega_m = 0.0;
  };

  /// Evaluates x0 and seeds the archive. Called by run(); exposed so the
  /// step functions can be driven individually.
  void initialize();

  /// Step 1: density-based choice, shrinking the stored radius by gamma0
  /// when the previous reference is chosen again.
  Reference step1_select_reference();

  /// Step 2: rebuild models, shrinking by gamma0 until
  /// delta <= max(delta_tol, omega_m) or the shrink cap is hit. Sample
  /// points accumulate into samples().
  ModelStage step2_model_loop(const DecisionVector& center, const ObjectiveVector& f_center,
                              double delta_tilde);

  /// Step 6 + 7: assign radii to the new points and fold them into the
  /// archive. Returns true when some new entry was accepted.
  bool step6_7_update(double rho, double delta_tilde, const std::vector<DecisionVector>& points,
                      long k);

  const Archive& archive() const { return archive_; }
  Archive& mutable_archive() { return archive_; }
  EvalCache& cache() { return cache_; }
  const std::vector<DecisionVector>& samples() const { return samples_; }
  void clear_samples() { samples_.clear(); }
  const Problem& problem() const { return problem_; }
  const SolverConfig& config() const { return config_; }

 private:
  subsolvers::TrustRegion region(const DecisionVector& center, double radius) const;
  void log_quality(IterationRecord& rec);

  Problem problem_;
  SolverConfig config_;
  RunOptions options_;
  Archive archive_;
  EvalCache cache_;
  std::vector<DecisionVector> samples_;
  std::optional<DecisionVector> previous_reference_;
  bool hv_warned_ = false;
};

/// Convenience wrapper around Solver.
RunResult run(const Problem& problem, const SolverConfig& config, const RunOptions& options = {});

}  // namespace motr
