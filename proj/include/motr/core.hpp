#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "motr/errors.hpp"

namespace motr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A point x in decision space R^n.
using DecisionVector = Eigen::VectorXd;
/// F(x) = (f_1(x), ..., f_p(x)).
using ObjectiveVector = Eigen::VectorXd;

/// Axis-aligned box constraint lower <= x <= upper.
struct Box {
  Vector lower;
  Vector upper;

  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Vector& x) const;
  Vector clip(const Vector& x) const;
  Vector center() const { return 0.5 * (lower + upper); }
};

/// A black-box multiobjective problem over a box.
struct Problem {
  std::string name;
  int n = 0;
  int p = 0;
  Box box;
  std::function<ObjectiveVector(const DecisionVector&)> objectives;
  /// Sampler of the analytic Pareto front, empty when the front is unknown.
  std::function<std::vector<ObjectiveVector>()> front;
};

/// Relation of a to b under componentwise minimization.
///
/// Weak dominance (a_i <= b_i for all i) is exactly `Equal` or `Dominates`;
/// use weakly_dominates() to test for it. `Incomparable` also covers the
/// case where b dominates a.
enum class Dominance { Dominates, Equal, Incomparable };

Dominance dominates(const ObjectiveVector& a, const ObjectiveVector& b);

inline bool weakly_dominates(Dominance d) {
  return d == Dominance::Dominates || d == Dominance::Equal;
}

/// A nondominated point together with its trust-region radius.
struct ArchiveEntry {
  DecisionVector x;
  ObjectiveVector f;
  double radius = 1.0;
  int birth_iteration = 0;
};

enum class InsertOutcome { Accepted, Rejected };

/// Mutually nondominated set of entries kept in insertion order.
class Archive {
 public:
  /// Rejects the candidate when an entry dominates or equals it; otherwise
  /// removes every entry the candidate dominates and appends it.
  InsertOutcome insert(ArchiveEntry candidate);

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const ArchiveEntry& operator[](std::size_t i) const { return entries_.at(i); }
  std::span<const ArchiveEntry> entries() const { return entries_; }

  /// Index of an entry with bitwise-equal decision vector.
  std::optional<std::size_t> find(const DecisionVector& x) const;
  void set_radius(std::size_t i, double radius);

  std::vector<ObjectiveVector> objectives() const;

 private:
  std::vector<ArchiveEntry> entries_;
};

/// Writes the archive as CSV with header x_1..x_n,f_1..f_p,delta.
void write_archive_csv(std::ostream& os, const Archive& archive);

/// Memoizing evaluator with a hard budget on distinct true evaluations.
class EvalCache {
 public:
  explicit EvalCache(long budget);

  /// Cached value when x was seen before; otherwise evaluates and counts.
  /// Throws BudgetExhausted when a new evaluation would exceed the budget.
  ObjectiveVector evaluate(const Problem& problem, const DecisionVector& x);

  std::optional<ObjectiveVector> lookup(const DecisionVector& x) const;
  bool contains(const DecisionVector& x) const { return lookup(x).has_value(); }

  /// Every cached objective vector.
  std::vector<ObjectiveVector> values() const;

  long eval_count() const { return eval_count_; }
  long budget() const { return budget_; }
  long remaining() const { return budget_ - eval_count_; }

 private:
  using Key = std::vector<std::uint64_t>;
  static Key key_of(const DecisionVector& x);

  std::map<Key, ObjectiveVector> values_;
  long eval_count_ = 0;
  long budget_;
};

/// Throws DimensionError unless v has the expected length and is finite.
void check_vector(const Vector& v, Eigen::Index expected, const char* what);

}  // namespace motr
