#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "motr/core.hpp"
#include "motr/problems.hpp"
#include "oracles.hpp"

using namespace motr;

namespace {

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

ArchiveEntry entry(const Vector& f, double x0) {
  return {Vector::Constant(1, x0), f, 1.0, 0};
}

Archive seeded() {
  Archive a;
  a.insert(entry(v2(1, 2), 0));
  a.insert(entry(v2(2, 1), 1));
  return a;
}

}  // namespace

TEST(Dominance, Examples) {
  EXPECT_EQ(dominates(v2(1, 2), v2(2, 2)), Dominance::Dominates);
  EXPECT_EQ(dominates(v2(1, 2), v2(1, 2)), Dominance::Equal);
  EXPECT_TRUE(weakly_dominates(dominates(v2(1, 2), v2(1, 2))));
  EXPECT_EQ(dominates(v2(1, 3), v2(2, 1)), Dominance::Incomparable);
  EXPECT_EQ(dominates(v2(2, 2), v2(1, 2)), Dominance::Incomparable);
}

TEST(Dominance, LengthMismatchThrows) {
  EXPECT_THROW(dominates(v2(1, 2), Vector::Zero(3)), DimensionError);
}

TEST(Dominance, StrictPartOrderOnRandomTriples) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(0, 3);
  for (int trial = 0; trial < 2000; ++trial) {
    Vector a(3), b(3), c(3);
    for (int i = 0; i < 3; ++i) {
      a[i] = d(rng);
      b[i] = d(rng);
      c[i] = d(rng);
    }
    EXPECT_NE(dominates(a, a), Dominance::Dominates);
    if (dominates(a, b) == Dominance::Dominates && dominates(b, c) == Dominance::Dominates) {
      EXPECT_EQ(dominates(a, c), Dominance::Dominates);
    }
  }
}

TEST(Archive, RejectsDominatedCandidate) {
  auto a = seeded();
  EXPECT_EQ(a.insert(entry(v2(2, 2), 5)), InsertOutcome::Rejected);
  EXPECT_EQ(a.size(), 2u);
}

TEST(Archive, DominatingCandidateClearsArchive) {
  auto a = seeded();
  EXPECT_EQ(a.insert(entry(v2(0, 0), 5)), InsertOutcome::Accepted);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].f, v2(0, 0));
}

TEST(Archive, IncomparableCandidateIsAppended) {
  auto a = seeded();
  EXPECT_EQ(a.insert(entry(v2(1.5, 1.5), 5)), InsertOutcome::Accepted);
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(a[2].f, v2(1.5, 1.5));
}

TEST(Archive, EqualObjectivesRejected) {
  auto a = seeded();
  EXPECT_EQ(a.insert(entry(v2(1, 2), 9)), InsertOutcome::Rejected);
}

TEST(Archive, ErrorsOnBadEntries) {
  auto a = seeded();
  EXPECT_THROW(a.insert(entry(Vector::Zero(3), 9)), DimensionError);
  ArchiveEntry bad = entry(v2(0.5, 3), 9);
  bad.radius = 0.0;
  EXPECT_THROW(a.insert(bad), DomainError);
}

TEST(Archive, MatchesBruteForceFilter) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 2 + trial % 3;
    const int n = 1 + static_cast<int>(rng() % 50);
    std::uniform_int_distribution<int> grid(0, 6);
    std::vector<Vector> pts;
    Archive a;
    for (int i = 0; i < n; ++i) {
      Vector f(p);
      for (int j = 0; j < p; ++j) f[j] = grid(rng);
      pts.push_back(f);
      a.insert({Vector::Constant(1, i), f, 1.0, 0});
    }
    auto expected = oracle::nondominated(pts);
    auto got = a.objectives();
    const auto lex = [](const Vector& x, const Vector& y) {
      return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
    };
    std::sort(expected.begin(), expected.end(), lex);
    std::sort(got.begin(), got.end(), lex);
    ASSERT_EQ(got.size(), expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i], expected[i]);
    for (std::size_t i = 0; i < got.size(); ++i) {
      for (std::size_t j = 0; j < got.size(); ++j) {
        if (i != j) EXPECT_FALSE(weakly_dominates(dominates(got[i], got[j])));
      }
    }
  }
}

TEST(Archive, CsvRoundTripsExactly) {
  Archive a;
  a.insert({v2(0.1, 1.0 / 3.0), v2(2.5e-17, 1.0), 0.7, 0});
  std::ostringstream os;
  write_archive_csv(os, a);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "x_1,x_2,f_1,f_2,delta");
  std::istringstream in(os.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  std::vector<double> values;
  std::stringstream ss(row);
  for (std::string cell; std::getline(ss, cell, ',');) values.push_back(std::stod(cell));
  ASSERT_EQ(values.size(), 5u);
  EXPECT_EQ(values[1], 1.0 / 3.0);
  EXPECT_EQ(values[2], 2.5e-17);
  EXPECT_EQ(values[4], 0.7);
}

TEST(EvalCache, RepeatedPointIsFree) {
  EvalCache cache(10);
  const auto p = problems::make_dtlz2();
  const Vector x = (Vector(3) << 0.2, 0.3, 0.4).finished();
  cache.evaluate(p, x);
  cache.evaluate(p, x);
  EXPECT_EQ(cache.eval_count(), 1);
  EXPECT_TRUE(cache.contains(x));
}

TEST(EvalCache, BudgetIsHard) {
  EvalCache cache(1);
  const auto p = problems::make_dtlz2();
  cache.evaluate(p, Vector::Constant(3, 0.5));
  EXPECT_THROW(cache.evaluate(p, Vector::Constant(3, 0.25)), BudgetExhausted);
  EXPECT_EQ(cache.eval_count(), 1);
  EXPECT_EQ(cache.remaining(), 0);
}

TEST(EvalCache, EvaluatesDtlz2) {
  EvalCache cache(5);
  const auto f = cache.evaluate(problems::make_dtlz2(), (Vector(3) << 0, 0, 0.5).finished());
  EXPECT_NEAR(f[0], 1.0, 1e-15);
  EXPECT_NEAR(f[1], 0.0, 1e-15);
  EXPECT_NEAR(f[2], 0.0, 1e-15);
}

TEST(EvalCache, RejectsWrongLengthAndNonFinite) {
  EvalCache cache(5);
  const auto p = problems::make_dtlz2();
  EXPECT_THROW(cache.evaluate(p, Vector::Zero(2)), DimensionError);
  Vector x = Vector::Constant(3, 0.5);
  x[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(cache.evaluate(p, x), DimensionError);
  EXPECT_EQ(cache.eval_count(), 0);
}
