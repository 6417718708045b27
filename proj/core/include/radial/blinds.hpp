#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "radial/geometry.hpp"
#include "radial/measure.hpp"
#include "radial/scale.hpp"

namespace radial {

/// Closed rectangle centre + s d + t n, |s| <= half_length, |t| <= half_width,
/// n = perp(d), carrying `mass` uniformly.
struct BlindTube {
  Point centre{};
  Vec direction{1.0, 0.0, 0.0};
  double half_length = 0.25;
  double half_width = 0.01;
  double mass = 1.0;

  bool contains(const Point& p) const;
  std::array<Point, 4> corners() const;
  /// True when `inner` lies inside this rectangle (up to a relative 1e-9 slack).
  bool encloses(const BlindTube& inner) const;
};

/// Projective arc [start, start + length], start in [0, pi).
struct Arc {
  double start = 0.0;
  double length = 0.0;
};

/// Arc of directions under which `tube` is seen from x (x outside the tube),
/// padded by 1e-14 on both sides.
Arc projection_arc(const BlindTube& tube, const Point& x);

/// Certified upper bound for the eps-dimensional content of a finite union of
/// arcs: the cheapest cover by hulls of circularly consecutive components.
double arc_content(std::span<const Arc> arcs, double eps);
/// Connected components of a union of arcs (merged, wrap-aware).
std::vector<Arc> arc_components(std::span<const Arc> arcs);

struct BlindOptions {
  std::size_t split = 2;
  double epsilon = 0.1;   // content exponent
  /// Sub-tube half-width is w * split^-thinning; 0 selects 2/epsilon, which
  /// makes split end-on arcs cheaper than their parent's by a factor split.
  double thinning = 0.0;
};

struct BlindState {
  std::size_t generation = 0;
  std::vector<BlindTube> tubes;
  std::vector<Point> viewpoints;             // handled so far, first-seen order
  std::vector<std::vector<double>> history;  // per viewpoint: recorded content bounds
  BlindOptions options;

  double total_mass() const;
  std::vector<Arc> arcs_from(const Point& x) const;
  /// Content of the current tubes' projection from x (not clamped to history).
  double content_from(const Point& x) const;
};

BlindState seed_state(const BlindTube& seed, BlindOptions options = {});

/// Replaces every tube by `split` thinner sub-tubes inside it, aimed at the
/// viewpoint along equally spaced rays through the parent, and updates the
/// recorded content bound of every handled viewpoint as min(previous, current).
BlindState blind_step(const BlindState& state, const Point& viewpoint);

struct BlindRecord {
  std::size_t generation = 0;
  std::size_t viewpoint = 0;
  double epsilon = 0.0;
  double content_bound = 0.0;
};

struct BlindResult {
  BlindState state;
  GridMeasure measure;
  std::vector<BlindRecord> report;
  /// Per generation (including 0) the state, for refinement audits.
  std::vector<BlindState> generations;
};

/// Default seed: horizontal tube centred at (0.5, 0.5), half-length 0.25, half-width 1/64.
BlindTube default_seed();

/// Runs `generations` rounds, each applying blind_step once per viewpoint,
/// then rasterises the tubes at `level` (mass spread over the cells meeting
/// each rectangle). ResolutionExceeded when the final tube count
/// split^(generations * viewpoints) exceeds 2^max_log2_tubes.
BlindResult blind_construct(std::span<const Point> viewpoints, std::size_t generations,
                            BlindOptions options = {}, const BlindTube& seed = default_seed(),
                            int level = 10, int max_log2_tubes = 13);

GridMeasure rasterize(std::span<const BlindTube> tubes, int level);

/// Box dimension of the exact projection of the tubes from x: the union of
/// their arcs counted at angular scales 2^-2 .. 2^-jmax (in units of pi).
DimEstimate arc_projection_dimension(const BlindState& state, const Point& x, int jmax = 18);

}  // namespace radial
