#include "motr/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <fmt/format.h>

namespace motr {

void check_vector(const Vector& v, Eigen::Index expected, const char* what) {
  if (v.size() != expected) {
    throw DimensionError(fmt::format("{}: expected length {}, got {}", what, expected, v.size()));
  }
  if (!v.allFinite()) {
    throw DimensionError(fmt::format("{}: non-finite component", what));
  }
}

bool Box::contains(const Vector& x) const {
  return x.size() == lower.size() && (x.array() >= lower.array()).all() &&
         (x.array() <= upper.array()).all();
}

Vector Box::clip(const Vector& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

Dominance dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError(fmt::format("dominates: lengths {} and {} differ", a.size(), b.size()));
  }
  bool strict = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return Dominance::Incomparable;
    if (a[i] < b[i]) strict = true;
  }
  return strict ? Dominance::Dominates : Dominance::Equal;
}

InsertOutcome Archive::insert(ArchiveEntry candidate) {
  if (!(candidate.radius > 0.0)) {
    throw DomainError("archive entry radius must be positive");
  }
  if (!entries_.empty()) {
    const auto p = entries_.front().f.size();
    check_vector(candidate.f, p, "archive candidate objectives");
    check_vector(candidate.x, entries_.front().x.size(), "archive candidate point");
  }
  for (const auto& e : entries_) {
    if (weakly_dominates(dominates(e.f, candidate.f))) return InsertOutcome::Rejected;
  }
  std::erase_if(entries_, [&](const ArchiveEntry& e) {
    return dominates(candidate.f, e.f) == Dominance::Dominates;
  });
  entries_.push_back(std::move(candidate));
  return InsertOutcome::Accepted;
}

std::optional<std::size_t> Archive::find(const DecisionVector& x) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& y = entries_[i].x;
    if (y.size() != x.size()) continue;
    bool same = true;
    for (Eigen::Index j = 0; j < x.size() && same; ++j) {
      same = std::bit_cast<std::uint64_t>(x[j]) == std::bit_cast<std::uint64_t>(y[j]);
    }
    if (same) return i;
  }
  return std::nullopt;
}

void Archive::set_radius(std::size_t i, double radius) {
  if (!(radius > 0.0)) throw DomainError("archive entry radius must be positive");
  entries_.at(i).radius = radius;
}

std::vector<ObjectiveVector> Archive::objectives() const {
  std::vector<ObjectiveVector> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.f);
  return out;
}

void write_archive_csv(std::ostream& os, const Archive& archive) {
  if (archive.empty()) {
    os << "delta\n";
    return;
  }
  const auto n = archive[0].x.size();
  const auto p = archive[0].f.size();
  std::string line;
  for (Eigen::Index i = 0; i < n; ++i) line += fmt::format("x_{},", i + 1);
  for (Eigen::Index i = 0; i < p; ++i) line += fmt::format("f_{},", i + 1);
  line += "delta\n";
  os << line;
  for (const auto& e : archive.entries()) {
    line.clear();
    for (Eigen::Index i = 0; i < n; ++i) line += fmt::format("{:.17g},", e.x[i]);
    for (Eigen::Index i = 0; i < p; ++i) line += fmt::format("{:.17g},", e.f[i]);
    line += fmt::format("{:.17g}\n", e.radius);
    os << line;
  }
}

EvalCache::EvalCache(long budget) : budget_(budget) {
  if (budget < 0) throw DomainError("evaluation budget must be nonnegative");
}

EvalCache::Key EvalCache::key_of(const DecisionVector& x) {
  Key k(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) k[i] = std::bit_cast<std::uint64_t>(x[i]);
  return k;
}

std::optional<ObjectiveVector> EvalCache::lookup(const DecisionVector& x) const {
  auto it = values_.find(key_of(x));
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::vector<ObjectiveVector> EvalCache::values() const {
  std::vector<ObjectiveVector> out;
  out.reserve(values_.size());
  for (const auto& [key, f] : values_) out.push_back(f);
  return out;
}

ObjectiveVector EvalCache::evaluate(const Problem& problem, const DecisionVector& x) {
  check_vector(x, problem.n, "decision vector");
  auto key = key_of(x);
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  if (eval_count_ >= budget_) {
    throw BudgetExhausted(fmt::format("evaluation budget of {} exhausted", budget_));
  }
  ObjectiveVector f = problem.objectives(x);
  ++eval_count_;
  check_vector(f, problem.p, "objective vector");
  values_.emplace(std::move(key), f);
  return f;
}

}  // namespace motr
