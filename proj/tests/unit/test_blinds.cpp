#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "radial/blinds.hpp"
#include "radial/error.hpp"

using namespace radial;

namespace {

constexpr double kPi = std::numbers::pi;

// Angular interval of a rectangle seen from an outside point. Corners are
// taken as offsets from the centre: after a few thinning steps the half-width
// is far below the spacing of doubles near the centre.
std::pair<double, double> corner_span(const BlindTube& t, const Point& x) {
  const Vec c0 = t.centre - x;
  const double base = std::atan2(c0.y, c0.x);
  const Vec a = t.direction * t.half_length;
  const Vec b = perp(t.direction) * t.half_width;
  double lo = 1e9, hi = -1e9;
  for (const Vec& off : {a + b, a - b, -a + b, -a - b}) {
    const double ang = std::atan2(cross2(c0, off), dot(c0, c0) + dot(c0, off));
    lo = std::min(lo, ang);
    hi = std::max(hi, ang);
  }
  double s = std::fmod(base + lo, kPi);
  if (s < 0.0) s += kPi;
  return {s, hi - lo};
}

constexpr double kPad = 1e-14;  // arcs are reported padded on both sides
// Thinned tubes subtend arcs of about 2 kPad, while arc endpoints near pi are
// only known to an ulp (4e-16): a 2% length error, 0.2% after the 0.1 power.
constexpr double kContentTol = 5e-3;

// eps-content of a union of padded projective arcs: merge components, then try
// every way of grouping circularly consecutive components into hulls.
double content_oracle(const std::vector<BlindTube>& tubes, const Point& x, double eps) {
  std::vector<std::pair<double, double>> iv;
  for (const auto& t : tubes) {
    const auto [s, len] = corner_span(t, x);
    double start = s - kPad;
    if (start < 0.0) start += kPi;
    iv.push_back({start, start + len + 2.0 * kPad});
  }
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> comp;
  for (const auto& v : iv) {
    if (!comp.empty() && v.first <= comp.back().second)
      comp.back().second = std::max(comp.back().second, v.second);
    else
      comp.push_back(v);
  }
  while (comp.size() > 1 && comp.back().second - kPi >= comp.front().first) {
    comp.back().second = std::max(comp.back().second, comp.front().second + kPi);
    comp.erase(comp.begin());
  }
  const std::size_t n = comp.size();
  if (n == 1) return std::pow(std::min(kPi, comp[0].second - comp[0].first), eps);
  double best = 1e300;
  // bit i set: a hull ends after component i (gap i is left uncovered)
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!((mask >> i) & 1u)) continue;
      // walk back to the previous break
      std::size_t j = (i + n - 1) % n;
      std::size_t first = i;
      while (!((mask >> j) & 1u)) {
        first = j;
        j = (j + n - 1) % n;
      }
      const double end = comp[i].second + (first > i ? kPi : 0.0);
      cost += std::pow(end - comp[first].first, eps);
    }
    best = std::min(best, cost);
  }
  return best;
}

double total_arc_length(const BlindState& s, const Point& x) {
  double len = 0.0;
  for (const auto& a : arc_components(s.arcs_from(x))) len += a.length;
  return len;
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

}  // namespace

TEST(Arcs, ProjectionArcMatchesCorners) {
  const auto seed = default_seed();
  for (const Point x : {Point{0.5, 2.0, 0}, Point{-1.0, 0.3, 0}, Point{2.0, -1.5, 0}, Point{0.9, 0.49, 0}}) {
    const auto arc = projection_arc(seed, x);
    const auto [s, len] = corner_span(seed, x);
    EXPECT_NEAR(arc.length, len + 2e-14, 1e-13);
    const double ds = std::remainder(arc.start - s, kPi);
    EXPECT_NEAR(ds, -1e-14, 1e-13);
  }
  EXPECT_EQ(code_of([&] { projection_arc(seed, {0.5, 0.5, 0}); }), ErrorCode::kViewpointInsideTube);
}

TEST(Arcs, ComponentsMergeAcrossTheWrap) {
  const std::vector<Arc> arcs{{3.0, 0.3}, {0.05, 0.1}, {1.0, 0.2}, {1.1, 0.3}};
  const auto comps = arc_components(arcs);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_DOUBLE_EQ(comps[0].start, 1.0);
  EXPECT_NEAR(comps[0].length, 0.4, 1e-15);
  EXPECT_DOUBLE_EQ(comps[1].start, 3.0);
  // [3.0, 3.3] already reaches past 0.05 + pi
  EXPECT_NEAR(comps[1].length, 0.3, 1e-15);
}

TEST(Arcs, ContentPicksCheapestHulls) {
  EXPECT_NEAR(arc_content(std::vector<Arc>{{0.2, 0.5}}, 0.5), std::sqrt(0.5), 1e-15);
  // two tiny arcs far apart: separate covers win at eps = 1, the hull wins at small eps
  const std::vector<Arc> two{{0.1, 0.01}, {1.0, 0.01}};
  EXPECT_NEAR(arc_content(two, 1.0), 0.02, 1e-15);
  EXPECT_NEAR(arc_content(two, 0.01), std::min(2.0 * std::pow(0.01, 0.01), std::pow(0.91, 0.01)), 1e-12);
  EXPECT_EQ(arc_content(std::vector<Arc>{}, 0.3), 0.0);
}

TEST(Blinds, SingleStepHalvesTheShadow) {
  const auto s0 = seed_state(default_seed());
  EXPECT_DOUBLE_EQ(s0.options.thinning, 20.0);
  const Point x{0.5, 2.0, 0.0};
  const auto s1 = blind_step(s0, x);
  ASSERT_EQ(s1.tubes.size(), 2u);
  EXPECT_LE(total_arc_length(s1, x), 0.5 * total_arc_length(s0, x));
  for (const auto& t : s1.tubes) {
    EXPECT_TRUE(s0.tubes[0].encloses(t));
    EXPECT_DOUBLE_EQ(t.mass, 0.5);
  }
  ASSERT_EQ(s1.history.size(), 1u);
  EXPECT_NEAR(s1.history[0][0], content_oracle(s0.tubes, x, 0.1), 1e-9);
  EXPECT_LT(s1.history[0][1], s1.history[0][0]);
}

TEST(Blinds, ThreeViewpointRoundMatchesOracle) {
  const std::vector<Point> vps{{0.5, 3.0, 0}, {-2.0, -2.0, 0}, {3.0, 0.5, 0}};
  auto s = seed_state(default_seed());
  std::vector<double> before;
  for (const auto& x : vps) before.push_back(content_oracle(s.tubes, x, s.options.epsilon));
  for (const auto& x : vps) {
    const double pre = content_oracle(s.tubes, x, s.options.epsilon);
    s = blind_step(s, x);
    const double post = content_oracle(s.tubes, x, s.options.epsilon);
    EXPECT_LT(post, pre);
    EXPECT_NEAR(s.content_from(x), post, kContentTol * post);
  }
  EXPECT_EQ(s.tubes.size(), 8u);
  for (std::size_t v = 0; v < vps.size(); ++v) {
    const double expected = std::min(before[v], content_oracle(s.tubes, vps[v], 0.1));
    EXPECT_NEAR(s.history[v].back(), expected, kContentTol * expected);
    EXPECT_LT(s.history[v].back(), before[v]);
  }
}

TEST(Blinds, RepeatedViewpointDrivesContentDown) {
  const std::vector<Point> vps{{0.5, 2.0, 0}};
  const auto res = blind_construct(vps, 4, {}, default_seed(), 10);
  ASSERT_EQ(res.report.size(), 5u);
  EXPECT_LT(res.report.back().content_bound, res.report.front().content_bound / 2.0);
  // The fourth step stalls: a 2^-66 half-width is below the position
  // tolerance, so parents are kept.
  EXPECT_EQ(res.state.tubes.size(), 8u);
}

TEST(Blinds, ZeroGenerationsIsTheSeed) {
  const std::vector<Point> vps{{0.5, 2.0, 0}};
  const auto res = blind_construct(vps, 0, {}, default_seed(), 8);
  ASSERT_EQ(res.state.tubes.size(), 1u);
  const std::vector<BlindTube> seed{default_seed()};
  EXPECT_TRUE(res.measure == rasterize(seed, 8));
  EXPECT_EQ(res.report.size(), 1u);
}

TEST(Blinds, RefinementIsNestedAndMassPreserving) {
  const std::vector<Point> vps{{0.5, 3.0, 0}, {3.0, 0.5, 0}};
  BlindOptions opt;
  opt.split = 3;
  const auto res = blind_construct(vps, 2, opt, default_seed(), 10);
  ASSERT_EQ(res.generations.size(), 3u);
  for (std::size_t g = 1; g < res.generations.size(); ++g) {
    EXPECT_NEAR(res.generations[g].total_mass(), 1.0, 1e-12);
    for (const auto& t : res.generations[g].tubes)
      EXPECT_TRUE(std::any_of(res.generations[g - 1].tubes.begin(), res.generations[g - 1].tubes.end(),
                              [&](const BlindTube& p) { return p.encloses(t); }));
  }
  // the raster support stays inside the seed's cells
  const std::vector<BlindTube> seed{default_seed()};
  const auto outer = rasterize(seed, 10);
  for (const auto& c : res.measure.cells())
    EXPECT_TRUE(std::any_of(outer.cells().begin(), outer.cells().end(),
                            [&](const Cell& o) { return o.index == c.index; }));
}

TEST(Blinds, HistoryNeverIncreases) {
  const std::vector<Point> vps{{0.5, 3.0, 0}, {-2.0, -2.0, 0}, {3.0, 0.5, 0}};
  const auto res = blind_construct(vps, 2, {}, default_seed(), 10);
  for (const auto& h : res.state.history)
    for (std::size_t i = 1; i < h.size(); ++i) EXPECT_LE(h[i], h[i - 1]);
  for (std::size_t i = vps.size(); i < res.report.size(); ++i)
    EXPECT_LE(res.report[i].content_bound, res.report[i - vps.size()].content_bound);
}

TEST(Blinds, FreshViewpointIsNotTrained) {
  const std::vector<Point> vps{{0.5, 3.0, 0}};
  const Point fresh{3.0, 0.5, 0.0};
  const auto res = blind_construct(vps, 3, {}, default_seed(), 10);
  const double trained = res.state.content_from(vps[0]) / res.generations[0].content_from(vps[0]);
  const double untouched = res.state.content_from(fresh) / res.generations[0].content_from(fresh);
  EXPECT_LT(trained, 0.5);
  EXPECT_GT(untouched, trained);
}

TEST(Blinds, LaterViewpointsMayLieInDiscardedParts) {
  // A point of the seed tube left empty by the first step is a legal viewpoint
  // for the next one; a point inside a surviving tube is not.
  const Point x{0.5, 2.0, 0.0};
  const auto s1 = blind_step(seed_state(default_seed()), x);
  const Point gap{0.3, 0.5 + 0.5 / 64.0, 0.0};
  ASSERT_TRUE(default_seed().contains(gap));
  ASSERT_TRUE(std::none_of(s1.tubes.begin(), s1.tubes.end(), [&](const BlindTube& t) { return t.contains(gap); }));
  const auto s2 = blind_step(s1, gap);
  EXPECT_EQ(s2.tubes.size(), 4u);
  EXPECT_EQ(code_of([&] { blind_step(s1, s1.tubes[0].centre); }), ErrorCode::kViewpointInsideTube);
}

TEST(Blinds, BudgetAndInputChecks) {
  const std::vector<Point> one{{0.5, 2.0, 0}};
  EXPECT_EQ(code_of([&] { blind_construct(one, 14, {}, default_seed(), 8); }), ErrorCode::kResolutionExceeded);
  const std::vector<Point> twice{{0.5, 2.0, 0}, {0.5, 2.0, 0}};
  EXPECT_EQ(code_of([&] { blind_construct(twice, 1, {}, default_seed(), 8); }), ErrorCode::kInvalidArgument);
  BlindOptions bad;
  bad.split = 1;
  EXPECT_EQ(code_of([&] { seed_state(default_seed(), bad); }), ErrorCode::kInvalidArgument);
}

TEST(Blinds, TrainedProjectionDimensionIsSmall) {
  const std::vector<Point> vps{{0.5, 3.0, 0}};
  const auto res = blind_construct(vps, 3, {}, default_seed(), 10);
  EXPECT_LT(arc_projection_dimension(res.state, vps[0]).estimate, 0.5);
  EXPECT_NEAR(arc_projection_dimension(res.generations[0], vps[0]).estimate, 1.0, 0.2);
}
