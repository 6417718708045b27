#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "radial/error.hpp"
#include "radial/tubes.hpp"

using namespace radial;

namespace {

TubeParams desk_params() {
  TubeParams p;
  p.delta = 1.0 / 64.0;
  p.tau = 0.3;
  p.eta = 0.03;
  p.kappa_mu = 1.6;
  p.kappa_nu = 1.0;
  return p;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

// Segment of atoms from a to b at the given level.
GridMeasure segment(const Point& a, const Point& b, int n, int level) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back(a + (b - a) * ((i + 0.5) / n));
  return atomic_measure(2, level, pts);
}

}  // namespace

TEST(TubeParams, DerivedCounts) {
  const auto p = desk_params();
  EXPECT_EQ(p.arcs(), 2u);       // 64^0.03 = 1.13
  EXPECT_EQ(p.max_tubes(), 3u);  // 64^0.3 = 3.48
  EXPECT_DOUBLE_EQ(p.rho(), (0.8 - 0.3) / 16.0);
  EXPECT_DOUBLE_EQ(p.arc_width(), std::numbers::pi / 2.0);
  EXPECT_EQ(p.arc_of(0.1), 0u);
  EXPECT_EQ(p.arc_of(3.0), 1u);
  EXPECT_NO_THROW(p.validate());

  TubeParams q = p;
  q.delta = 1e-6;
  q.eta = 0.1;
  q.tau = 0.1;
  q.kappa_mu = 2.0;
  // ceil(10^0.6) = 4 arcs: 0 and 2 are non-adjacent, 0 and 3 wrap around
  EXPECT_EQ(q.arcs(), 4u);
  EXPECT_TRUE(q.non_adjacent(0, 2));
  EXPECT_FALSE(q.non_adjacent(0, 3));
  EXPECT_FALSE(q.non_adjacent(1, 2));
}

TEST(TubeParams, ViolationsRaised) {
  auto bad = [](auto edit) {
    TubeParams p = desk_params();
    edit(p);
    return code_of([&] { p.validate(); });
  };
  EXPECT_EQ(bad([](TubeParams& p) { p.tau = 0.8; }), ErrorCode::kParamsViolation);
  EXPECT_EQ(bad([](TubeParams& p) { p.eta = 0.05; }), ErrorCode::kParamsViolation);
  EXPECT_EQ(bad([](TubeParams& p) { p.delta = 1.0; }), ErrorCode::kParamsViolation);
  EXPECT_EQ(bad([](TubeParams& p) { p.beta = 0.01; }), ErrorCode::kParamsViolation);
  // beta is satisfiable once eta is small: kappa_nu rho - 28 eta = 0.03125 - 0.0028
  TubeParams ok = desk_params();
  ok.eta = 1e-4;
  ok.beta = 0.02;
  EXPECT_NO_THROW(ok.validate());
  ok.epsilon = 0.5;
  EXPECT_NO_THROW(ok.validate());
  ok.epsilon = 0.01;
  EXPECT_EQ(code_of([&] { ok.validate(); }), ErrorCode::kParamsViolation);
}

TEST(TubeMass, MatchesBruteForce) {
  std::mt19937_64 g(61);
  const auto m = oracle::random_measure(g, 7, 600);
  for (int t = 0; t < 10; ++t) {
    const Tube tube(Line::from_point_direction({oracle::u01(g), oracle::u01(g), 0.0},
                                               unit_from_angle(std::numbers::pi * oracle::u01(g))),
                    0.02 + 0.1 * oracle::u01(g));
    double brute = 0.0;
    for (const auto& c : m.cells())
      if (tube.line.distance(m.center(c)) < tube.half_width) brute += c.mass;
    EXPECT_NEAR(tube_mass(m, tube), brute, 1e-12);
  }
  EXPECT_EQ(code_of([&] { tube_mass(m, Tube(Line{}, 0.001)); }), ErrorCode::kSubResolutionTube);
}

TEST(TubeCover, OneTubeCoversASegmentSeenEndOn) {
  const auto k = segment({0.2, 0.3, 0.0}, {0.8, 0.6, 0.0}, 200, 9);
  const Point x{-0.2, 0.1, 0.0};  // on the segment's line
  const auto cover = best_tube_cover(k, x, 0.01, 1);
  ASSERT_EQ(cover.tubes.size(), 1u);
  EXPECT_NEAR(cover.covered_mass, 1.0, 1e-12);
  double reach = 0.0;
  for (const auto& q : k.support_points()) reach = std::max(reach, distance(q, x));
  EXPECT_LE(cover.net_spacing, 0.01 / (2.0 * reach));
}

TEST(TubeCover, SingleTubeIsBestOverTheNet) {
  std::mt19937_64 g(62);
  const auto k = oracle::random_measure(g, 7, 400).restricted([](const Point& p) { return p.x > 0.3; });
  const Point x{0.05, 0.5, 0.0};
  const double delta = 0.03;
  const auto cover = best_tube_cover(k, x, delta, 1);
  double best = 0.0;
  for (std::size_t i = 0; i < cover.candidates; ++i) {
    const Vec e = unit_from_angle(static_cast<double>(i) * cover.net_spacing);
    double m = 0.0;
    for (const auto& c : k.cells())
      if (std::abs(cross2(e, k.center(c) - x)) < delta) m += c.mass;
    best = std::max(best, m);
  }
  EXPECT_NEAR(cover.covered_mass, best, 1e-12);
}

TEST(TubeCover, CoveredMassIsUnionOfTubes) {
  std::mt19937_64 g(63);
  const auto k = oracle::random_measure(g, 7, 500).restricted([](const Point& p) { return p.y > 0.25; });
  const Point x{0.5, 0.05, 0.0};
  const auto cover = best_tube_cover(k, x, 0.02, 5);
  EXPECT_LE(cover.tubes.size(), 5u);
  double brute = 0.0;
  for (const auto& c : k.cells()) {
    const Point p = k.center(c);
    if (std::any_of(cover.tubes.begin(), cover.tubes.end(), [&](const Tube& t) { return t.contains(p); }))
      brute += c.mass;
  }
  EXPECT_NEAR(cover.covered_mass, brute, 1e-12);
}

TEST(BadPoint, EndOnViewIsBadSpreadViewIsNot) {
  const auto p = desk_params();
  const auto k = segment({0.3, 0.5, 0.0}, {0.7, 0.5, 0.0}, 64, 9);
  EXPECT_TRUE(bad_point_test(k, {0.1, 0.5, 0.0}, p).is_bad);
  const auto u = uniform_measure(2, 6).restricted([](const Point& q) { return q.y > 0.5; });
  const auto r = bad_point_test(u.normalized(), {0.5, 0.2, 0.0}, p);
  EXPECT_FALSE(r.is_bad);
  EXPECT_DOUBLE_EQ(r.threshold, std::pow(p.delta, p.eta));
}

TEST(Flowers, OverlapFiltering) {
  const auto p = desk_params();
  const auto k = segment({0.3, 0.5, 0.0}, {0.7, 0.5, 0.0}, 64, 9);
  const auto w1 = arc_witness(k, {0.1, 0.5, 0.0}, 0, p);
  const auto w2 = arc_witness(k, {0.9, 0.5, 0.0}, 0, p);
  ASSERT_GT(w1.mass, std::pow(p.delta, 2 * p.eta));
  // both see the whole segment, so the second overlaps the first completely
  const std::vector<Witness> ws{w1, w2};
  const auto fam = extract_flowers(k, ws, p);
  EXPECT_EQ(fam.flowers.size(), 1u);
  EXPECT_EQ(fam.members[0], 0u);
  EXPECT_DOUBLE_EQ(fam.bound, 2.0 * std::pow(p.delta, -4 * p.eta));

  Witness tiny{{0.1, 0.1, 0.0}, {0}, 0.0};
  const std::vector<Witness> small{tiny};
  EXPECT_EQ(code_of([&] { extract_flowers(k, small, p); }), ErrorCode::kWitnessTooSmall);
}

TEST(Flowers, CoverContainsBadCandidates) {
  const auto p = desk_params();
  const auto k = segment({0.3, 0.5, 0.0}, {0.7, 0.5, 0.0}, 64, 9);
  const auto w = arc_witness(k, {0.1, 0.5, 0.0}, 0, p);
  const std::vector<Point> cands{{0.1, 0.5, 0.0}, {0.9, 0.5, 0.0}, {0.05, 0.5, 0.0}, {0.5, 0.1, 0.0}};
  const auto cover = flower_cover(k, w, 0, cands, p);
  EXPECT_LE(static_cast<double>(cover.petals), cover.bound);
  EXPECT_TRUE(cover.uncovered.empty());
  for (const auto& y : cover.bad_candidates)
    EXPECT_TRUE(std::any_of(cover.tubes.begin(), cover.tubes.end(), [&](const Tube& t) { return t.contains(y); }) ||
                distance(y, w.x) <= std::pow(p.delta, 2 * p.rho()));
}

TEST(IntersectionDiameter, PerpendicularAndParallel) {
  const Point c{0.5, 0.5, 0.0};
  const double w = 0.01;
  const Tube h(Line::from_point_direction(c, {1, 0, 0}), w);
  const Tube v(Line::from_point_direction(c, {0, 1, 0}), w);
  EXPECT_NEAR(intersection_diameter(h, v), 2.0 * std::sqrt(2.0) * w, 1e-12);
  // a tube with itself: the chord of the circumscribed polygon
  const double d = intersection_diameter(h, h);
  EXPECT_GE(d, std::sqrt(2.0));
  EXPECT_LE(d, std::sqrt(2.0) / std::cos(std::numbers::pi / 64) + 1e-12);
  const Tube far(Line::from_point_direction({0.5, 3.0, 0.0}, {1, 0, 0}), w);
  EXPECT_EQ(intersection_diameter(h, far), 0.0);
}

TEST(AnalyzeLevel, RandomCantorSuiteRespectsBounds) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto c = oracle::random_flower_case(seed);
    const auto rep = analyze_level(c.k, c.e, c.params);
    EXPECT_LE(static_cast<double>(rep.max_flowers), rep.flower_bound) << seed;
    EXPECT_LE(static_cast<double>(rep.max_petals), rep.petal_bound) << seed;
    EXPECT_LE(rep.max_transversality, 10.0) << seed;
    EXPECT_LE(rep.nu_good_bad, rep.nu_good + 1e-15);
    EXPECT_LE(rep.nu_good, rep.nu_total + 1e-15);
    EXPECT_LE(rep.next_e.total_mass(), c.e.total_mass() + 1e-15);
    EXPECT_LE(rep.next_k.total_mass(), c.k.total_mass() + 1e-15);
    for (const auto& cell : rep.next_e.cells())
      EXPECT_TRUE(std::any_of(c.e.cells().begin(), c.e.cells().end(),
                              [&](const Cell& o) { return o.index == cell.index; }));
  }
}

TEST(AnalyzeLevel, GammaRepresentsEta) {
  auto p = desk_params();
  p.epsilon = 0.25;
  const auto k = segment({0.3, 0.5, 0.0}, {0.7, 0.5, 0.0}, 64, 9);
  const auto e = atomic_measure(2, 9, std::vector<Point>{{0.1, 0.5, 0.0}, {0.5, 0.1, 0.0}, {0.9, 0.9, 0.0}});
  const auto rep = analyze_level(k, e, p);
  ASSERT_TRUE(rep.gamma && rep.gamma_eta);
  EXPECT_DOUBLE_EQ(*rep.gamma_eta, 2.0 * std::pow(1.25, -*rep.gamma - 1));
  EXPECT_LT(std::abs(std::log(*rep.gamma_eta / p.eta)), std::log(1.25));
  // (0.1, 0.5) sees the segment end-on
  EXPECT_EQ(rep.bad[0], 1u);
}
