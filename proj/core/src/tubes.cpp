#include "radial/tubes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "radial/error.hpp"
#include "radial/parallel.hpp"
#include "radial/projection.hpp"
#include "radial/summation.hpp"

namespace radial {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::size_t TubeParams::arcs() const {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(std::pow(delta, -eta) - 1e-9)));
}

std::size_t TubeParams::max_tubes() const {
  return static_cast<std::size_t>(std::max(1.0, std::floor(std::pow(delta, -tau) + 1e-9)));
}

double TubeParams::arc_width() const { return kPi / static_cast<double>(arcs()); }

std::size_t TubeParams::arc_of(double angle) const {
  const double k = std::floor(angle / arc_width());
  return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(arcs() - 1)));
}

bool TubeParams::non_adjacent(std::size_t d1, std::size_t d2) const {
  const std::size_t gap = d1 > d2 ? d1 - d2 : d2 - d1;
  return std::min(gap, arcs() - gap) > 1;
}

void TubeParams::validate() const {
  auto check = [](bool ok, const char* what) { require(ok, ErrorCode::kParamsViolation, what); };
  check(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  check(kappa_mu > 0.0 && kappa_mu <= 2.0 && kappa_nu > 0.0 && kappa_nu <= 2.0,
        "Frostman exponents must lie in (0, 2]");
  check(tau > 0.0 && tau < kappa_mu / 2.0, "need 0 < tau < kappa_mu/2");
  check(eta > 0.0 && 8.0 * eta < (kappa_mu / 2.0 - tau) / 2.0, "need 0 < 8 eta < (kappa_mu/2 - tau)/2");
  if (beta) {
    check(*beta > 0.0 && *beta < kappa_nu * rho() - 28.0 * eta, "need 0 < beta < kappa_nu rho - 28 eta");
    if (epsilon) check(13.0 * eta + *beta / (1.0 + *epsilon) < *beta, "need 13 eta + beta/(1+eps) < beta");
  }
}

double tube_mass(const GridMeasure& measure, const Tube& tube) {
  require(tube.half_width >= measure.cell_diameter() / 2.0, ErrorCode::kSubResolutionTube,
          "tube half-width below half a cell diameter");
  std::vector<double> inside;
  for (const auto& c : measure.cells())
    if (tube.contains(measure.center(c))) inside.push_back(c.mass);
  return pairwise_sum(inside);
}

double cells_mass(const GridMeasure& measure, std::span<const std::uint32_t> cells) {
  std::vector<double> m;
  m.reserve(cells.size());
  for (auto i : cells) m.push_back(measure.cells()[i].mass);
  return pairwise_sum(m);
}

double overlap_mass(const GridMeasure& measure, std::span<const std::uint32_t> a,
                    std::span<const std::uint32_t> b) {
  std::vector<std::uint32_t> both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  return cells_mass(measure, both);
}

TubeCover best_tube_cover(const GridMeasure& measure, const Point& x, double delta, std::size_t n,
                          const CoverOptions& options) {
  require(n >= 1, ErrorCode::kInvalidArgument, "need at least one tube");
  require(delta >= measure.cell_diameter() / 2.0, ErrorCode::kSubResolutionTube,
          "tube half-width below half a cell diameter");
  TubeCover out;
  if (measure.empty()) return out;
  require_outside_support(measure, x);

  const auto cells = measure.cells();
  const std::size_t m = cells.size();
  std::vector<Vec> rel(m);
  double reach = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    rel[i] = measure.center(cells[i]) - x;
    reach = std::max(reach, norm(rel[i]));
  }
  const double target = delta / (2.0 * reach);
  const auto K = static_cast<std::size_t>(
      std::min(static_cast<double>(options.max_candidates), std::max(4.0, std::ceil(kPi / target))));
  const double spacing = kPi / static_cast<double>(K);
  out.candidates = K;
  out.net_spacing = spacing;

  std::vector<Vec> dirs(K);
  std::vector<std::uint8_t> allowed(K, 1);
  for (std::size_t k = 0; k < K; ++k) {
    const double a = static_cast<double>(k) * spacing;
    dirs[k] = unit_from_angle(a);
    if (options.arc) allowed[k] = a >= options.arc->first && a < options.arc->second;
  }

  std::vector<std::vector<std::uint32_t>> members(K);
  std::vector<std::vector<std::uint32_t>> owners(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = norm(rel[i]);
    auto visit = [&](std::size_t k) {
      if (!allowed[k] || std::abs(cross2(dirs[k], rel[i])) >= delta) return;
      members[k].push_back(static_cast<std::uint32_t>(i));
      owners[i].push_back(static_cast<std::uint32_t>(k));
    };
    if (r <= delta) {
      for (std::size_t k = 0; k < K; ++k) visit(k);
      continue;
    }
    const double phi = projective_angle(rel[i]);
    const double alpha = std::asin(delta / r);
    const auto lo = static_cast<long long>(std::floor((phi - alpha) / spacing)) - 1;
    const auto hi = static_cast<long long>(std::ceil((phi + alpha) / spacing)) + 1;
    if (hi - lo + 1 >= static_cast<long long>(K)) {
      for (std::size_t k = 0; k < K; ++k) visit(k);
      continue;
    }
    const auto kk = static_cast<long long>(K);
    for (long long k = lo; k <= hi; ++k) visit(static_cast<std::size_t>(((k % kk) + kk) % kk));
  }

  std::vector<std::uint8_t> covered(m, 0);
  auto score = [&](std::size_t k) {
    std::vector<double> v;
    for (auto i : members[k])
      if (!covered[i]) v.push_back(cells[i].mass);
    return pairwise_sum(v);
  };
  std::vector<double> scores(K);
  for (std::size_t k = 0; k < K; ++k) scores[k] = score(k);

  std::vector<std::uint8_t> dirty(K, 0);
  for (std::size_t round = 0; round < n; ++round) {
    std::size_t best = K;
    for (std::size_t k = 0; k < K; ++k)
      if (scores[k] > 0.0 && (best == K || scores[k] > scores[best])) best = k;
    if (best == K) break;
    out.candidate_index.push_back(best);
    out.angles.push_back(static_cast<double>(best) * spacing);
    out.tubes.emplace_back(Line::from_point_direction(x, dirs[best]), delta);
    std::vector<std::size_t> touched;
    for (auto i : members[best]) {
      if (covered[i]) continue;
      covered[i] = 1;
      for (auto k : owners[i])
        if (!dirty[k]) {
          dirty[k] = 1;
          touched.push_back(k);
        }
    }
    for (auto k : touched) {
      scores[k] = score(k);
      dirty[k] = 0;
    }
  }

  for (std::size_t i = 0; i < m; ++i)
    if (covered[i]) out.covered_cells.push_back(static_cast<std::uint32_t>(i));
  out.covered_mass = cells_mass(measure, out.covered_cells);
  return out;
}

BadPointResult bad_point_test(const GridMeasure& measure, const Point& x, const TubeParams& params) {
  BadPointResult res;
  res.cover = best_tube_cover(measure, x, params.delta, params.max_tubes());
  res.covered_mass = res.cover.covered_mass;
  res.threshold = std::pow(params.delta, params.eta);
  res.is_bad = res.covered_mass > res.threshold;
  return res;
}

Witness arc_witness(const GridMeasure& measure, const Point& x, std::size_t arc, const TubeParams& params) {
  require(arc < params.arcs(), ErrorCode::kInvalidArgument, "arc index out of range");
  CoverOptions opt;
  const double w = params.arc_width();
  opt.arc = {static_cast<double>(arc) * w, static_cast<double>(arc + 1) * w};
  auto cover = best_tube_cover(measure, x, params.delta, params.max_tubes(), opt);
  return Witness{x, std::move(cover.covered_cells), cover.covered_mass};
}

FlowerFamily extract_flowers(const GridMeasure& measure, std::span<const Witness> witnesses,
                             const TubeParams& params) {
  const double floor_mass = std::pow(params.delta, 2.0 * params.eta);
  FlowerFamily fam;
  fam.overlap_threshold = std::pow(params.delta, 4.0 * params.eta) / 2.0;
  fam.bound = 2.0 * std::pow(params.delta, -4.0 * params.eta);
  for (const auto& w : witnesses)
    require(cells_mass(measure, w.cells) > floor_mass, ErrorCode::kWitnessTooSmall,
            "witness mass does not exceed delta^{2 eta}");
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    double worst = 0.0;
    bool keep = true;
    for (const auto& f : fam.flowers) {
      const double o = overlap_mass(measure, witnesses[i].cells, f.cells);
      worst = std::max(worst, o);
      if (o > fam.overlap_threshold) {
        keep = false;
        break;
      }
    }
    if (!keep) continue;
    fam.max_overlap = std::max(fam.max_overlap, worst);
    fam.members.push_back(i);
    fam.flowers.push_back(witnesses[i]);
  }
  if (static_cast<double>(fam.flowers.size()) > fam.bound)
    fail(ErrorCode::kInvariantViolation, "flower count " + std::to_string(fam.flowers.size()) +
                                             " exceeds 2 delta^{-4 eta} = " + std::to_string(fam.bound));
  return fam;
}

FlowerCover flower_cover(const GridMeasure& measure, const Witness& flower, std::size_t arc,
                         std::span<const Point> candidates, const TubeParams& params) {
  params.validate();
  require(arc < params.arcs(), ErrorCode::kInvalidArgument, "arc index out of range");
  const double delta = params.delta;
  require(cells_mass(measure, flower.cells) > std::pow(delta, 2.0 * params.eta), ErrorCode::kWitnessTooSmall,
          "flower mass does not exceed delta^{2 eta}");

  const double rho = params.rho();
  const double wide = std::pow(delta, rho);
  const double ball = std::pow(delta, 2.0 * rho);
  const double petal_floor = std::pow(delta, 4.0 * params.eta) / 2.0;
  const double petal_overlap = std::pow(delta, 8.0 * params.eta) / 4.0;
  const double w = params.arc_width();
  const double lo = static_cast<double>(arc) * w;
  const double hi = static_cast<double>(arc + 1) * w;

  FlowerCover out;
  out.bound = 4.0 * std::pow(delta, -8.0 * params.eta);
  out.tubes.emplace_back(Line::from_point_direction(flower.x, unit_from_angle(lo + w / 2.0)), wide);

  std::vector<Cell> sub;
  for (auto i : flower.cells) sub.push_back(measure.cells()[i]);
  const GridMeasure xj(measure.dim(), measure.level(), std::move(sub));
  CoverOptions opt;
  opt.arc = {lo, hi};

  std::vector<std::vector<std::uint32_t>> petal_sets;
  auto in_tubes = [&](const Point& y) {
    return std::any_of(out.tubes.begin(), out.tubes.end(), [&](const Tube& t) { return t.contains(y); });
  };
  for (const auto& y : candidates) {
    if (distance(y, flower.x) <= ball) continue;
    if (xj.distance_to_support(y) <= 2.0 * xj.cell_diameter()) continue;
    auto cover = best_tube_cover(xj, y, delta, params.max_tubes(), opt);
    if (!(cover.covered_mass > petal_floor)) continue;
    out.bad_candidates.push_back(y);
    if (in_tubes(y)) continue;
    std::vector<std::uint32_t> cells;
    cells.reserve(cover.covered_cells.size());
    for (auto i : cover.covered_cells) cells.push_back(flower.cells[i]);
    const bool separated = std::all_of(petal_sets.begin(), petal_sets.end(), [&](const auto& s) {
      return overlap_mass(measure, cells, s) <= petal_overlap;
    });
    if (!separated) continue;
    const double a = std::clamp(projective_angle(y - flower.x), lo, std::nextafter(hi, lo));
    out.tubes.emplace_back(Line::from_point_direction(flower.x, unit_from_angle(a)), wide);
    out.petal_points.push_back(y);
    petal_sets.push_back(std::move(cells));
  }
  out.petals = out.petal_points.size();
  for (const auto& y : out.bad_candidates)
    if (!in_tubes(y) && distance(y, flower.x) > ball) out.uncovered.push_back(y);
  if (static_cast<double>(out.petals) > out.bound)
    fail(ErrorCode::kInvariantViolation, "petal count " + std::to_string(out.petals) +
                                             " exceeds 4 delta^{-8 eta} = " + std::to_string(out.bound));
  return out;
}

namespace {

std::vector<Vec> clip(const std::vector<Vec>& poly, const Vec& n, double c) {
  // Keeps {p : <p, n> <= c}.
  std::vector<Vec> out;
  const std::size_t k = poly.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Vec& a = poly[i];
    const Vec& b = poly[(i + 1) % k];
    const double fa = dot(a, n) - c;
    const double fb = dot(b, n) - c;
    if (fa <= 0.0) out.push_back(a);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) out.push_back(a + (b - a) * (fa / (fa - fb)));
  }
  return out;
}

}  // namespace

double intersection_diameter(const Tube& a, const Tube& b) {
  constexpr int kSides = 64;
  const Vec centre{0.5, 0.5, 0.0};
  const double r = std::sqrt(0.5) / std::cos(kPi / kSides);
  std::vector<Vec> poly;
  for (int i = 0; i < kSides; ++i) poly.push_back(centre + unit_from_angle(2.0 * kPi * i / kSides) * r);
  for (const Tube* t : {&a, &b}) {
    const Vec n = perp(t->dir());
    const double o = dot(t->line.foot, n);
    poly = clip(poly, n, o + t->half_width);
    poly = clip(poly, -n, -(o - t->half_width));
    if (poly.empty()) return 0.0;
  }
  double d = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j) d = std::max(d, distance(poly[i], poly[j]));
  return d;
}

LevelReport analyze_level(const GridMeasure& k, const GridMeasure& e, const TubeParams& params) {
  params.validate();
  require(k.dim() == 2 && e.dim() == 2, ErrorCode::kInvalidArgument, "tube machinery is planar");
  LevelReport rep;
  rep.params = params;
  const std::size_t nv = e.size();
  const std::size_t arcs = params.arcs();
  rep.viewpoints = nv;
  const double delta = params.delta;
  const double directed_floor = std::pow(delta, 2.0 * params.eta);

  std::vector<Point> pts(nv);
  std::vector<double> nu(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    pts[v] = e.center(e.cells()[v]);
    nu[v] = e.cells()[v].mass;
  }

  rep.bad.assign(nv, 0);
  rep.bad_arc.assign(arcs, std::vector<std::uint8_t>(nv, 0));
  std::vector<std::vector<Witness>> witness(arcs, std::vector<Witness>(nv));
  parallel_for(nv, [&](std::size_t v) {
    rep.bad[v] = bad_point_test(k, pts[v], params).is_bad;
    for (std::size_t d = 0; d < arcs; ++d) {
      witness[d][v] = arc_witness(k, pts[v], d, params);
      rep.bad_arc[d][v] = witness[d][v].mass > directed_floor;
    }
  });

  rep.flower_bound = 2.0 * std::pow(delta, -4.0 * params.eta);
  rep.petal_bound = 4.0 * std::pow(delta, -8.0 * params.eta);
  std::vector<std::vector<Tube>> arc_tubes(arcs);
  rep.flowers_per_arc.assign(arcs, 0);
  rep.petals.assign(arcs, {});
  for (std::size_t d = 0; d < arcs; ++d) {
    std::vector<Witness> ws;
    std::vector<Point> cands;
    for (std::size_t v = 0; v < nv; ++v)
      if (rep.bad_arc[d][v]) {
        ws.push_back(witness[d][v]);
        cands.push_back(pts[v]);
      }
    if (ws.empty()) continue;
    const auto fam = extract_flowers(k, ws, params);
    rep.flowers_per_arc[d] = fam.flowers.size();
    rep.max_flowers = std::max(rep.max_flowers, fam.flowers.size());
    for (const auto& f : fam.flowers) {
      const auto cover = flower_cover(k, f, d, cands, params);
      rep.petals[d].push_back(cover.petals);
      rep.max_petals = std::max(rep.max_petals, cover.petals);
      rep.uncovered_bad += cover.uncovered.size();
      arc_tubes[d].insert(arc_tubes[d].end(), cover.tubes.begin(), cover.tubes.end());
    }
  }

  const double unit = std::pow(delta, params.rho() - params.eta);
  for (std::size_t d1 = 0; d1 < arcs; ++d1)
    for (std::size_t d2 = d1 + 1; d2 < arcs; ++d2) {
      // Every distinct-arc pair is audited, not only non-adjacent ones: with
      // admissible eta there are rarely more than three arcs at desk scale.
      for (const auto& t1 : arc_tubes[d1])
        for (const auto& t2 : arc_tubes[d2]) {
          rep.max_transversality = std::max(rep.max_transversality, intersection_diameter(t1, t2) / unit);
          ++rep.transversal_pairs;
        }
    }

  rep.badbad.assign(nv, 0);
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t d1 = 0; d1 < arcs && !rep.badbad[v]; ++d1)
      for (std::size_t d2 = d1 + 1; d2 < arcs; ++d2)
        if (params.non_adjacent(d1, d2) && rep.bad_arc[d1][v] && rep.bad_arc[d2][v]) {
          rep.badbad[v] = 1;
          break;
        }

  auto nu_where = [&](auto pred) {
    std::vector<double> m(nv, 0.0);
    for (std::size_t v = 0; v < nv; ++v)
      if (pred(v)) m[v] = nu[v];
    return pairwise_sum(m);
  };
  rep.nu_total = e.total_mass();
  rep.nu_bad = nu_where([&](std::size_t v) { return rep.bad[v] != 0; });
  rep.nu_good = nu_where([&](std::size_t v) { return !rep.badbad[v]; });
  rep.nu_good_bad = nu_where([&](std::size_t v) { return !rep.badbad[v] && rep.bad[v]; });

  std::vector<Cell> next_e;
  if (rep.nu_good_bad > 0.0 && rep.nu_good_bad >= rep.nu_good / 2.0) {
    rep.branch = 1;
    std::size_t best_d = 0;
    double best_mass = -1.0;
    for (std::size_t d = 0; d < arcs; ++d) {
      const double m = nu_where([&](std::size_t v) { return !rep.badbad[v] && rep.bad_arc[d][v]; });
      if (m > best_mass) {
        best_mass = m;
        best_d = d;
      }
    }
    rep.chosen_arc = best_d;
    double best_t = -1.0;
    for (const auto& t : arc_tubes[best_d]) {
      const double m = nu_where(
          [&](std::size_t v) { return !rep.badbad[v] && rep.bad_arc[best_d][v] && t.contains(pts[v]); });
      if (m > best_t) {
        best_t = m;
        rep.chosen_tube = t;
      }
    }
    for (std::size_t v = 0; v < nv; ++v)
      if (!rep.badbad[v] && rep.bad_arc[best_d][v] && rep.chosen_tube && rep.chosen_tube->contains(pts[v]))
        next_e.push_back(e.cells()[v]);
    if (rep.chosen_tube) {
      const Tube wide(rep.chosen_tube->line, std::pow(delta, params.eta / 2.0));
      rep.next_k = k.restricted([&](const Point& p) { return !wide.contains(p); });
    } else {
      rep.next_k = k;
    }
  } else {
    rep.branch = 2;
    for (std::size_t v = 0; v < nv; ++v)
      if (!rep.badbad[v] && !rep.bad[v]) next_e.push_back(e.cells()[v]);
    rep.next_k = k;
  }
  rep.next_e = GridMeasure(e.dim(), e.level(), std::move(next_e));

  if (params.epsilon) {
    const double g = -std::log(params.eta / 2.0) / std::log(1.0 + *params.epsilon) - 1.0;
    rep.gamma = std::max(0, static_cast<int>(std::lround(g)));
    rep.gamma_eta = 2.0 * std::pow(1.0 + *params.epsilon, -*rep.gamma - 1);
  }
  return rep;
}

}  // namespace radial
