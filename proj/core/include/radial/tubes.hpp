#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radial/geometry.hpp"
#include "radial/line.hpp"
#include "radial/measure.hpp"

namespace radial {

/// Single-scale parameters of the planar tube machinery.
struct TubeParams {
  double delta = 0.01;
  double tau = 0.25;
  double eta = 0.01;
  double kappa_mu = 1.0;
  double kappa_nu = 1.0;
  std::optional<double> beta;
  std::optional<double> epsilon;  // schedule epsilon, enables the beta/epsilon check

  /// rho = (kappa_mu/2 - tau)/16.
  double rho() const { return (kappa_mu / 2.0 - tau) / 16.0; }
  /// D = ceil(delta^-eta) direction arcs J_0..J_{D-1} of the half circle.
  std::size_t arcs() const;
  /// floor(delta^-tau), at least 1.
  std::size_t max_tubes() const;
  double arc_width() const;
  /// Arc containing a projective angle in [0, pi).
  std::size_t arc_of(double angle) const;
  /// Arcs d1, d2 are non-adjacent when their cyclic index distance exceeds one.
  bool non_adjacent(std::size_t d1, std::size_t d2) const;

  /// Throws ParamsViolation unless 0 < tau < kappa_mu/2 and 0 < 8 eta < (kappa_mu/2 - tau)/2,
  /// and, when beta is set, 0 < beta < kappa_nu rho - 28 eta and (with epsilon)
  /// 13 eta + beta/(1+eps) < beta.
  void validate() const;
};

/// Sum of masses of cells whose centre lies in the open tube. Throws
/// SubResolutionTube when the half-width is below half a cell diameter.
double tube_mass(const GridMeasure& measure, const Tube& tube);

struct CoverOptions {
  /// Restrict candidate directions to the angle interval [lo, hi) within [0, pi).
  std::optional<std::pair<double, double>> arc;
  /// Hard cap on the candidate net size.
  std::size_t max_candidates = std::size_t{1} << 20;
};

struct TubeCover {
  std::vector<Tube> tubes;
  std::vector<double> angles;
  std::vector<std::size_t> candidate_index;
  std::vector<std::uint32_t> covered_cells;  // sorted indices into measure.cells()
  double covered_mass = 0.0;
  std::size_t candidates = 0;                // size of the direction net
  double net_spacing = 0.0;
};

/// Candidate net of tubes T(x + R e_k, delta), e_k at angles k pi/K, with
/// spacing pi/K <= delta/(2 D) where D is the largest distance from x to a
/// support centre. Greedy max coverage for up to N rounds (stops when no
/// candidate adds mass); ties go to the lowest candidate index.
TubeCover best_tube_cover(const GridMeasure& measure, const Point& x, double delta, std::size_t n,
                          const CoverOptions& options = {});

/// Mass of the cells of `cells` (sorted indices into measure.cells()).
double cells_mass(const GridMeasure& measure, std::span<const std::uint32_t> cells);
/// Mass of the intersection of two sorted cell index lists.
double overlap_mass(const GridMeasure& measure, std::span<const std::uint32_t> a,
                    std::span<const std::uint32_t> b);

struct BadPointResult {
  bool is_bad = false;
  double covered_mass = 0.0;
  double threshold = 0.0;
  TubeCover cover;
};

/// Greedy search for <= floor(delta^-tau) delta-tubes through x covering more
/// than delta^eta. A negative answer only means greedy found no witness.
BadPointResult bad_point_test(const GridMeasure& measure, const Point& x, const TubeParams& params);

/// A viewpoint with the cells covered by its witness tubes.
struct Witness {
  Point x{};
  std::vector<std::uint32_t> cells;
  double mass = 0.0;
};

/// Witness of x for arc J_d: the greedy cover restricted to directions in J_d.
Witness arc_witness(const GridMeasure& measure, const Point& x, std::size_t arc, const TubeParams& params);

struct FlowerFamily {
  std::vector<std::size_t> members;  // indices into the input witness list
  std::vector<Witness> flowers;
  double max_overlap = 0.0;
  double overlap_threshold = 0.0;    // delta^{4 eta}/2
  double bound = 0.0;                // 2 delta^{-4 eta}
};

/// Greedy in input order: keep a witness when its overlap with every kept one
/// is at most delta^{4 eta}/2. Throws WitnessTooSmall when a witness has mass
/// <= delta^{2 eta}, and InvariantViolation when more than 2 delta^{-4 eta}
/// witnesses are kept.
FlowerFamily extract_flowers(const GridMeasure& measure, std::span<const Witness> witnesses,
                             const TubeParams& params);

struct FlowerCover {
  std::vector<Tube> tubes;            // tubes[0] covers B(x_j, delta^{2 rho})
  std::vector<Point> petal_points;    // y_1..y_H
  std::size_t petals = 0;             // H
  double bound = 0.0;                 // 4 delta^{-8 eta}
  std::vector<Point> bad_candidates;  // candidates found in B'_d(X_j)
  std::vector<Point> uncovered;       // bad candidates outside every returned tube
};

/// Constructive cover of the flower B'_d(X_j) by tubes of half-width delta^rho
/// through x_j with directions in J_d, scanning `candidates` in order.
FlowerCover flower_cover(const GridMeasure& measure, const Witness& flower, std::size_t arc,
                         std::span<const Point> candidates, const TubeParams& params);

/// Upper bound on diam(T1 ∩ T2 ∩ B) for the disc B circumscribing the unit
/// square (a circumscribed 64-gon stands in for the disc).
double intersection_diameter(const Tube& a, const Tube& b);

struct LevelReport {
  TubeParams params;
  std::size_t viewpoints = 0;
  std::vector<std::uint8_t> bad;                  // per viewpoint
  std::vector<std::vector<std::uint8_t>> bad_arc; // [arc][viewpoint]
  std::vector<std::uint8_t> badbad;
  double nu_total = 0.0;
  double nu_bad = 0.0;
  double nu_good = 0.0;
  double nu_good_bad = 0.0;
  std::vector<std::size_t> flowers_per_arc;       // M_d
  std::vector<std::vector<std::size_t>> petals;   // H per flower per arc
  std::size_t max_flowers = 0;
  std::size_t max_petals = 0;
  double flower_bound = 0.0;
  double petal_bound = 0.0;
  std::size_t uncovered_bad = 0;
  double max_transversality = 0.0;                // max C over tube pairs from distinct arcs
  std::size_t transversal_pairs = 0;
  int branch = 2;                                 // which side of the dichotomy held
  std::optional<std::size_t> chosen_arc;
  std::optional<Tube> chosen_tube;
  std::optional<int> gamma;                       // nearest integer with eta/2 ~ (1+eps)^{-Gamma-1}
  std::optional<double> gamma_eta;                // the eta that Gamma represents exactly
  GridMeasure next_k;
  GridMeasure next_e;
};

/// One level of the non-concentration induction at scale delta = params.delta:
/// bad viewpoints of E (all support centres), directed bad sets per arc,
/// flowers and their covers, the cross-arc transversality audit, the BadBad
/// set, the two-way branch, and the restricted K, E for the next level.
LevelReport analyze_level(const GridMeasure& k, const GridMeasure& e, const TubeParams& params);

}  // namespace radial
