#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "motr/metrics.hpp"
#include "oracles.hpp"

using namespace motr;
using namespace motr::metrics;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

std::vector<Vector> random_front(int p, int count, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Vector> pts;
  for (int i = 0; i < count; ++i) {
    Vector w(p);
    for (int j = 0; j < p; ++j) w[j] = u(rng) + 0.05;
    pts.push_back(w / w.norm());
  }
  return pts;
}

}  // namespace

TEST(Gd, SubsetOfFrontIsZero) {
  const std::vector<Vector> front{vec({0, 1}), vec({0.5, 0.5}), vec({1, 0})};
  EXPECT_EQ(gd(std::vector<Vector>{front[0], front[2]}, front), 0.0);
}

TEST(Gd, SinglePointIsItsDistance) {
  const std::vector<Vector> front{vec({0, 0})};
  EXPECT_NEAR(gd(std::vector<Vector>{vec({3, 4})}, front), 5.0, 1e-15);
}

TEST(Gd, PrintedFormula) {
  const std::vector<Vector> front{vec({0, 0})};
  EXPECT_NEAR(gd(std::vector<Vector>{vec({3, 0}), vec({0, 4})}, front), 2.5, 1e-15);
}

TEST(Gd, PermutationAndScaling) {
  std::mt19937 rng(43);
  auto front = random_front(3, 200, rng);
  std::vector<Vector> produced;
  std::normal_distribution<double> d(0, 0.05);
  for (int i = 0; i < 30; ++i) produced.push_back(front[static_cast<std::size_t>(i)] + vec({d(rng), d(rng), d(rng)}));
  const double base = gd(produced, front);
  EXPECT_NEAR(base, oracle::gd(produced, front), 1e-14);
  std::shuffle(produced.begin(), produced.end(), rng);
  EXPECT_NEAR(gd(produced, front), base, 1e-14);
  for (auto& v : produced) v *= 3.0;
  for (auto& v : front) v *= 3.0;
  EXPECT_NEAR(gd(produced, front), 3.0 * base, 1e-12);
}

TEST(Gd, EmptyThrows) {
  EXPECT_THROW(gd(std::vector<Vector>{}, std::vector<Vector>{vec({0, 0})}), DomainError);
}

TEST(Hv, HandCase) {
  const auto r = hypervolume(std::vector<Vector>{vec({1, 2}), vec({2, 1})}, vec({3, 3}));
  EXPECT_EQ(r.value, 3.0);
  EXPECT_TRUE(r.exact);
}

TEST(Hv, SingleBox) {
  EXPECT_NEAR(hypervolume(std::vector<Vector>{vec({0.5, 1, 1.5})}, vec({2, 2, 2})).value, 1.5 * 1 * 0.5, 1e-15);
  EXPECT_NEAR(hypervolume(std::vector<Vector>{vec({0, 0, 0, 0})}, vec({1, 2, 1, 1})).value, 2.0, 1e-15);
}

TEST(Hv, DominatedDuplicateChangesNothing) {
  const std::vector<Vector> base{vec({1, 2, 1}), vec({2, 1, 1.5})};
  auto more = base;
  more.push_back(vec({2, 2, 2}));
  more.push_back(base[0]);
  const Vector ref = vec({3, 3, 3});
  EXPECT_NEAR(hypervolume(more, ref).value, hypervolume(base, ref).value, 1e-15);
}

TEST(Hv, PointOutsideRefNamed) {
  try {
    hypervolume(std::vector<Vector>{vec({1, 1}), vec({4, 1})}, vec({3, 3}));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos);
  }
}

TEST(Hv, MatchesMonteCarlo) {
  std::mt19937 rng(47);
  for (int p = 2; p <= 3; ++p) {
    for (int t = 0; t < 5; ++t) {
      const auto pts = random_front(p, 5 + t * 3, rng);
      const Vector ref = Vector::Constant(p, 1.1);
      const double exact = hypervolume(pts, ref).value;
      const auto mc = oracle::hv_monte_carlo(pts, ref, 200000, 100 + t);
      EXPECT_LE(std::abs(exact - mc.value), 4 * mc.std_error + 1e-12);
    }
  }
}

TEST(Hv, MonotoneUnderAddingPoints) {
  std::mt19937 rng(53);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Vector> pts;
  const Vector ref = Vector::Constant(3, 1.0);
  double prev = 0.0;
  for (int i = 0; i < 40; ++i) {
    pts.push_back(vec({u(rng), u(rng), u(rng)}));
    const double hv = hypervolume(pts, ref).value;
    EXPECT_GE(hv, prev - 1e-15);
    prev = hv;
  }
}

TEST(Hv, FourObjectivesUseMonteCarlo) {
  const auto r = hypervolume(std::vector<Vector>{vec({0.5, 0.5, 0.5, 0.5}), vec({0, 0.8, 0.8, 0.8})},
                             Vector::Ones(4), 200000, 1);
  EXPECT_FALSE(r.exact);
  const double exact = 0.0625 + 0.2 * 0.2 * 0.2 - 0.2 * 0.2 * 0.2 * 0.5;
  EXPECT_LE(std::abs(r.value - exact), 4 * r.std_error);
}

TEST(HvReference, DefaultDominatedByAll) {
  const std::vector<Vector> pts{vec({0, 1}), vec({1, 0}), vec({0.5, 0.5})};
  const auto ref = default_hv_reference(pts);
  EXPECT_NEAR(ref[0], 1.1, 1e-15);
  EXPECT_NEAR(ref[1], 1.1, 1e-15);
  EXPECT_EQ(dominating_subset(pts, ref).size(), 3u);
  EXPECT_EQ(dominating_subset(pts, vec({0.9, 2})).size(), 2u);
}
