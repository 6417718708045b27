#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "radial/geometry.hpp"
#include "radial/line.hpp"
#include "radial/parallel.hpp"
#include "radial/summation.hpp"

using namespace radial;

TEST(Geometry, CanonicalDirectionIdentifiesAntipodes) {
  std::mt19937_64 g(1);
  for (int i = 0; i < 100; ++i) {
    const Vec v{oracle::u01(g) - 0.5, oracle::u01(g) - 0.5, 0.0};
    EXPECT_EQ(canonical_direction(v), canonical_direction(-v));
    EXPECT_GE(canonical_direction(v).y, 0.0);
  }
  EXPECT_EQ(canonical_direction(Vec{-1.0, 0.0, 0.0}), (Vec{1.0, 0.0, 0.0}));
}

TEST(Geometry, ProjectiveAngleRange) {
  EXPECT_DOUBLE_EQ(projective_angle({1.0, 0.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(projective_angle({-1.0, 0.0, 0.0}), 0.0);
  EXPECT_NEAR(projective_angle({0.0, -1.0, 0.0}), std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(projective_angle({1.0, -1.0, 0.0}), 3 * std::numbers::pi / 4, 1e-15);
  std::mt19937_64 g(2);
  for (int i = 0; i < 200; ++i) {
    const double a = projective_angle(unit_from_angle(2 * std::numbers::pi * oracle::u01(g)));
    EXPECT_GE(a, 0.0);
    EXPECT_LT(a, std::numbers::pi);
  }
}

TEST(Geometry, CrossProducts) {
  const Vec a{1, 2, 3}, b{-2, 0.5, 4};
  const Vec c = cross(a, b);
  EXPECT_NEAR(dot(c, a), 0.0, 1e-14);
  EXPECT_NEAR(dot(c, b), 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(cross2({1, 0, 0}, {0, 1, 0}), 1.0);
  EXPECT_EQ(perp(Vec{1, 0, 0}), (Vec{0, 1, 0}));
}

TEST(Line, ThroughTwoPoints) {
  const Line l = Line::through({0.2, 0.3, 0.0}, {0.8, 0.6, 0.0});
  EXPECT_NEAR(norm(l.direction), 1.0, 1e-15);
  EXPECT_NEAR(l.distance({0.2, 0.3, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(l.distance({0.8, 0.6, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(dot(l.foot, l.direction), 0.0, 1e-15);
  EXPECT_NEAR(distance(l.point_at(l.parameter_of({0.5, 0.45, 0.0})), {0.5, 0.45, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(l.angle(), std::atan2(0.3, 0.6), 1e-15);
}

TEST(Line, DistanceToHorizontal) {
  const Line l = Line::from_point_direction({0.0, 0.5, 0.0}, {-3.0, 0.0, 0.0});
  EXPECT_EQ(l.direction, (Vec{1, 0, 0}));
  EXPECT_NEAR(l.distance({7.0, 0.75, 0.0}), 0.25, 1e-15);
  EXPECT_NEAR(l.offset(), 0.5, 1e-15);
}

TEST(Tube, OpenContainment) {
  const Tube t(Line::through({0, 0.5, 0}, {1, 0.5, 0}), 0.25);
  EXPECT_TRUE(t.contains({0.3, 0.6, 0}));
  EXPECT_FALSE(t.contains({0.3, 0.75, 0}));  // boundary excluded
  EXPECT_TRUE(t.contains({-5.0, 0.26, 0}));
}

TEST(Summation, PairwiseMatchesExactSmallIntegers) {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_EQ(pairwise_sum(v), 999.0 * 1000.0 / 2.0);
}

TEST(Summation, CanonicalSumIsPermutationInvariant) {
  std::mt19937_64 g(5);
  std::vector<double> v(777);
  for (auto& x : v) x = std::exp(40.0 * (oracle::u01(g) - 0.5));
  const double ref = canonical_sum(v);
  for (int t = 0; t < 10; ++t) {
    std::shuffle(v.begin(), v.end(), g);
    EXPECT_EQ(canonical_sum(v), ref);
  }
}

TEST(Parallel, VisitsEveryIndexOnce) {
  for (unsigned threads : {1u, 3u, 8u}) {
    set_thread_count(threads);
    std::vector<std::atomic<int>> hits(1001);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
  set_thread_count(0);
}
