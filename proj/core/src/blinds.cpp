#include "radial/blinds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "radial/error.hpp"
#include "radial/summation.hpp"

namespace radial {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSlack = 1e-9;
// Absolute padding on every projected arc; covers the rounding of the angle
// computations so the content bound stays certified.
constexpr double kArcPad = 1e-14;
constexpr double kPosUlps = 1e-15;

double wrap_pi(double a) {
  double r = std::fmod(a, kPi);
  if (r < 0.0) r += kPi;
  return r >= kPi ? 0.0 : r;
}

// Angles (unreduced) of the extreme rays from x through the tube. Corner
// offsets are taken relative to the centre so that very thin tubes keep
// their angular width instead of collapsing under absolute rounding.
std::pair<double, double> ray_span(const BlindTube& t, const Point& x) {
  const Vec r0 = t.centre - x;
  const double theta0 = std::atan2(r0.y, r0.x);
  const double r2 = dot(r0, r0);
  const Vec a = t.direction * t.half_length;
  const Vec b = perp(t.direction) * t.half_width;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Vec& off : {a + b, b - a, -a - b, a - b}) {
    const double ang = std::atan2(cross2(r0, off), r2 + dot(r0, off));
    lo = std::min(lo, ang);
    hi = std::max(hi, ang);
  }
  return {theta0 + lo, theta0 + hi};
}

bool separated_on(const Vec& axis, std::span<const Point> a, std::span<const Point> b) {
  double amin = std::numeric_limits<double>::infinity(), amax = -amin;
  double bmin = amin, bmax = amax;
  for (const auto& p : a) {
    amin = std::min(amin, dot(p, axis));
    amax = std::max(amax, dot(p, axis));
  }
  for (const auto& p : b) {
    bmin = std::min(bmin, dot(p, axis));
    bmax = std::max(bmax, dot(p, axis));
  }
  return amax < bmin || bmax < amin;
}

}  // namespace

bool BlindTube::contains(const Point& p) const {
  const Vec v = p - centre;
  return std::abs(dot(v, direction)) <= half_length && std::abs(dot(v, perp(direction))) <= half_width;
}

std::array<Point, 4> BlindTube::corners() const {
  const Vec a = direction * half_length;
  const Vec b = perp(direction) * half_width;
  return {centre + a + b, centre - a + b, centre - a - b, centre + a - b};
}

bool BlindTube::encloses(const BlindTube& inner) const {
  const double sl = half_length * (1.0 + kSlack) + 1e-15;
  const double sw = half_width * (1.0 + kSlack) + 1e-15;
  const auto corners = inner.corners();
  return std::all_of(corners.begin(), corners.end(), [&](const Point& q) {
    const Vec v = q - centre;
    return std::abs(dot(v, direction)) <= sl && std::abs(dot(v, perp(direction))) <= sw;
  });
}

Arc projection_arc(const BlindTube& tube, const Point& x) {
  require(!tube.contains(x), ErrorCode::kViewpointInsideTube, "viewpoint lies inside a tube");
  const auto [lo, hi] = ray_span(tube, x);
  return Arc{wrap_pi(lo - kArcPad), hi - lo + 2.0 * kArcPad};
}

std::vector<Arc> arc_components(std::span<const Arc> arcs) {
  struct Iv {
    double a, b;
  };
  std::vector<Iv> iv;
  for (const auto& arc : arcs) iv.push_back({arc.start, arc.start + arc.length});
  std::sort(iv.begin(), iv.end(), [](const Iv& x, const Iv& y) { return x.a < y.a || (x.a == y.a && x.b < y.b); });
  std::vector<Iv> comps;
  for (const auto& v : iv) {
    if (!comps.empty() && v.a <= comps.back().b)
      comps.back().b = std::max(comps.back().b, v.b);
    else
      comps.push_back(v);
  }
  while (comps.size() > 1 && comps.back().b - kPi >= comps.front().a) {
    comps.back().b = std::max(comps.back().b, comps.front().b + kPi);
    comps.erase(comps.begin());
  }
  std::vector<Arc> out;
  for (const auto& c : comps) out.push_back({c.a, std::min(c.b - c.a, kPi)});
  return out;
}

double arc_content(std::span<const Arc> arcs, double eps) {
  require(eps > 0.0, ErrorCode::kInvalidArgument, "content exponent must be positive");
  const auto comps = arc_components(arcs);
  const std::size_t n = comps.size();
  if (n == 0) return 0.0;
  if (n == 1) return std::pow(comps[0].length, eps);
  // Cut the circle of directions at its widest gap.
  std::size_t cut = 0;
  double widest = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double end = comps[i].start + comps[i].length;
    const double next = i + 1 < n ? comps[i + 1].start : comps[0].start + kPi;
    if (next - end > widest) {
      widest = next - end;
      cut = i;
    }
  }
  std::vector<double> s(n), e(n);
  double shift = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t i = (cut + 1 + j) % n;
    if (j > 0 && i == 0) shift = kPi;
    s[j] = comps[i].start + shift;
    e[j] = s[j] + comps[i].length;
  }
  std::vector<double> best(n + 1, std::numeric_limits<double>::infinity());
  best[0] = 0.0;
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t i = 0; i < j; ++i) best[j] = std::min(best[j], best[i] + std::pow(e[j - 1] - s[i], eps));
  return best[n];
}

double BlindState::total_mass() const {
  std::vector<double> m;
  for (const auto& t : tubes) m.push_back(t.mass);
  return pairwise_sum(m);
}

std::vector<Arc> BlindState::arcs_from(const Point& x) const {
  std::vector<Arc> arcs;
  arcs.reserve(tubes.size());
  for (const auto& t : tubes) arcs.push_back(projection_arc(t, x));
  return arcs;
}

double BlindState::content_from(const Point& x) const {
  const auto arcs = arcs_from(x);
  return arc_content(arcs, options.epsilon);
}

BlindState seed_state(const BlindTube& seed, BlindOptions options) {
  require(options.split >= 2, ErrorCode::kInvalidArgument, "split factor must be at least 2");
  require(options.epsilon > 0.0 && options.epsilon <= 1.0, ErrorCode::kInvalidArgument,
          "content exponent must lie in (0, 1]");
  require(options.thinning >= 0.0, ErrorCode::kInvalidArgument, "thinning exponent must be nonnegative");
  if (options.thinning == 0.0) options.thinning = 2.0 / options.epsilon;
  require(seed.half_length > 0.0 && seed.half_width > 0.0 && seed.mass > 0.0, ErrorCode::kInvalidArgument,
          "seed tube must have positive size and mass");
  BlindState s;
  s.options = options;
  BlindTube t = seed;
  t.direction = normalized(seed.direction);
  s.tubes.push_back(t);
  return s;
}

BlindState blind_step(const BlindState& state, const Point& viewpoint) {
  for (const auto& t : state.tubes)
    require(!t.contains(viewpoint), ErrorCode::kViewpointInsideTube, "viewpoint lies inside a tube");
  const std::size_t split = state.options.split;
  const double thin = std::pow(static_cast<double>(split), -state.options.thinning);

  BlindState next;
  next.generation = state.generation;
  next.options = state.options;
  next.viewpoints = state.viewpoints;
  next.history = state.history;
  const auto seen = std::find(next.viewpoints.begin(), next.viewpoints.end(), viewpoint);
  if (seen == next.viewpoints.end()) {
    next.viewpoints.push_back(viewpoint);
    next.history.push_back({state.content_from(viewpoint)});
  }

  for (const auto& parent : state.tubes) {
    const auto [lo, hi] = ray_span(parent, viewpoint);
    const Vec d = parent.direction;
    const Vec n = perp(d);
    const double w = parent.half_width * thin;
    std::vector<BlindTube> kids;
    for (std::size_t i = 0; i < split; ++i) {
      const double psi = lo + (static_cast<double>(i) + 0.5) * (hi - lo) / static_cast<double>(split);
      const Vec u = unit_from_angle(psi);
      // Chord of the ray x + t u through the parent (slab clipping).
      const Vec p = viewpoint - parent.centre;
      double t0 = -std::numeric_limits<double>::infinity(), t1 = -t0;
      bool hit = true;
      for (const auto& [axis, bound] : {std::pair{d, parent.half_length}, std::pair{n, parent.half_width}}) {
        const double o = dot(p, axis);
        const double r = dot(u, axis);
        if (r == 0.0) {
          hit = hit && std::abs(o) <= bound;
          continue;
        }
        double a = (-bound - o) / r, b = (bound - o) / r;
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
      }
      if (!hit || t1 <= t0) continue;
      const Point mid = viewpoint + u * ((t0 + t1) / 2.0);
      double h = std::numeric_limits<double>::infinity();
      for (const auto& [axis, bound] : {std::pair{d, parent.half_length}, std::pair{n, parent.half_width}}) {
        // Relative slack plus a few ulps of the coordinates absorb the rounding of mid.
        const double room = bound * (1.0 - 1e-12) - kPosUlps - std::abs(dot(mid - parent.centre, axis)) -
                            w * std::abs(dot(perp(u), axis));
        const double r = std::abs(dot(u, axis));
        if (r > 0.0) h = std::min(h, room / r);
        else if (room <= 0.0) h = 0.0;
      }
      if (!(h > 0.0)) continue;
      kids.push_back(BlindTube{mid, u, h, w, 0.0});
    }
    if (kids.empty()) {
      next.tubes.push_back(parent);
      continue;
    }
    for (auto& k : kids) {
      k.mass = parent.mass / static_cast<double>(kids.size());
      next.tubes.push_back(k);
    }
  }

  for (std::size_t v = 0; v < next.viewpoints.size(); ++v) {
    const double c = next.content_from(next.viewpoints[v]);
    next.history[v].push_back(std::min(next.history[v].back(), c));
  }
  return next;
}

BlindTube default_seed() { return BlindTube{{0.5, 0.5, 0.0}, {1.0, 0.0, 0.0}, 0.25, 1.0 / 64.0, 1.0}; }

GridMeasure rasterize(std::span<const BlindTube> tubes, int level) {
  GridMeasureBuilder builder(2, level);
  const double h = std::ldexp(1.0, -level);
  const auto side = static_cast<long long>(1) << level;
  const Vec ex{1.0, 0.0, 0.0}, ey{0.0, 1.0, 0.0};
  for (const auto& t : tubes) {
    const auto corners = t.corners();
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& q : corners) {
      xmin = std::min(xmin, q.x);
      xmax = std::max(xmax, q.x);
      ymin = std::min(ymin, q.y);
      ymax = std::max(ymax, q.y);
    }
    const auto i0 = std::max(0LL, static_cast<long long>(std::floor(xmin / h)));
    const auto i1 = std::min(side - 1, static_cast<long long>(std::floor(xmax / h)));
    const auto j0 = std::max(0LL, static_cast<long long>(std::floor(ymin / h)));
    const auto j1 = std::min(side - 1, static_cast<long long>(std::floor(ymax / h)));
    std::vector<CellIndex> hit;
    for (long long i = i0; i <= i1; ++i)
      for (long long j = j0; j <= j1; ++j) {
        const double x0 = static_cast<double>(i) * h, y0 = static_cast<double>(j) * h;
        const std::array<Point, 4> sq{Point{x0, y0, 0.0}, Point{x0 + h, y0, 0.0}, Point{x0 + h, y0 + h, 0.0},
                                      Point{x0, y0 + h, 0.0}};
        if (separated_on(ex, sq, corners) || separated_on(ey, sq, corners) ||
            separated_on(t.direction, sq, corners) || separated_on(perp(t.direction), sq, corners))
          continue;
        hit.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), 0});
      }
    require(!hit.empty(), ErrorCode::kInvalidArgument, "tube lies outside the unit square");
    for (const auto& idx : hit) builder.add(idx, t.mass / static_cast<double>(hit.size()));
  }
  return builder.build(true);
}

BlindResult blind_construct(std::span<const Point> viewpoints, std::size_t generations, BlindOptions options,
                            const BlindTube& seed, int level, int max_log2_tubes) {
  for (std::size_t i = 0; i < viewpoints.size(); ++i)
    for (std::size_t j = i + 1; j < viewpoints.size(); ++j)
      require(!(viewpoints[i] == viewpoints[j]), ErrorCode::kInvalidArgument, "viewpoints must be distinct");
  require(level >= 1 && level <= GridMeasure::kMaxLevel, ErrorCode::kInvalidArgument, "level out of range");
  const double bits = static_cast<double>(generations) * static_cast<double>(viewpoints.size()) *
                      std::log2(static_cast<double>(std::max<std::size_t>(options.split, 2)));
  require(bits <= static_cast<double>(max_log2_tubes), ErrorCode::kResolutionExceeded,
          "generations * viewpoints * log2(split) exceeds the tube budget");

  BlindResult res;
  res.state = seed_state(seed, options);
  std::vector<double> bound(viewpoints.size());
  for (std::size_t v = 0; v < viewpoints.size(); ++v) {
    bound[v] = res.state.content_from(viewpoints[v]);
    res.report.push_back({0, v, options.epsilon, bound[v]});
  }
  res.generations.push_back(res.state);
  for (std::size_t g = 1; g <= generations; ++g) {
    for (const auto& x : viewpoints) res.state = blind_step(res.state, x);
    res.state.generation = g;
    for (std::size_t v = 0; v < viewpoints.size(); ++v) {
      bound[v] = std::min(bound[v], res.state.content_from(viewpoints[v]));
      res.report.push_back({g, v, options.epsilon, bound[v]});
    }
    res.generations.push_back(res.state);
  }
  res.measure = rasterize(res.state.tubes, level);
  return res;
}

DimEstimate arc_projection_dimension(const BlindState& state, const Point& x, int jmax) {
  require(jmax >= 4 && jmax <= 40, ErrorCode::kInvalidArgument, "arc scale depth must be in [4, 40]");
  // Points every half finest box along each arc hit exactly the boxes the arc meets.
  const double step = std::ldexp(1.0, -jmax) / 2.0;
  std::vector<double> t;
  for (const auto& a : state.arcs_from(x)) {
    const double t0 = a.start / kPi;
    const double len = a.length / kPi;
    const auto n = static_cast<std::size_t>(std::ceil(len / step));
    for (std::size_t i = 0; i <= n; ++i) {
      const double v = t0 + (n ? len * static_cast<double>(i) / static_cast<double>(n) : 0.0);
      t.push_back(v - std::floor(v));
    }
  }
  const auto scales = dyadic_scales(2, jmax);
  return angular_box_dimension(t, scales);
}

}  // namespace radial
