#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "radial/geometry.hpp"
#include "radial/measure.hpp"
#include "radial/projection.hpp"

namespace radial {

/// delta_k = 2^-(1+eps)^k for k0 <= k <= kmax. Only the exponents are stored,
/// so delta_{k+1} = delta_k^(1+eps) holds exactly in exponent arithmetic.
class ScaleSchedule {
 public:
  /// Largest admissible exponent; delta_kmax must stay >= 2^-1000.
  static constexpr double kMaxExponent = 1000.0;

  ScaleSchedule(double epsilon, int k0, int kmax);

  double epsilon() const { return epsilon_; }
  int k0() const { return k0_; }
  int kmax() const { return kmax_; }
  std::size_t size() const { return exponents_.size(); }

  /// (1+eps)^k.
  double exponent(int k) const;
  double delta(int k) const;
  std::span<const double> exponents() const { return exponents_; }
  std::vector<double> deltas() const;

 private:
  double epsilon_;
  int k0_;
  int kmax_;
  std::vector<double> exponents_;
};

ScaleSchedule make_schedule(double epsilon, int k0, int kmax);

/// Scales 2^-j for j = jmin..jmax, coarse to fine.
std::vector<double> dyadic_scales(int jmin, int jmax);

struct DimEstimate {
  double estimate = 0.0;
  std::vector<double> scales;       // coarse to fine
  std::vector<std::size_t> counts;  // N(delta) per scale
  double residual = 0.0;            // RMS residual of the fit
  std::size_t window_begin = 0;     // fitted scale indices [begin, end)
  std::size_t window_end = 0;
};

/// Box counting with the grid of half-open boxes [k delta, (k+1) delta)^d.
/// The slope of log N against log(1/delta) is fitted on the scales left after
/// dropping the two coarsest and the finest (all scales when fewer than five),
/// then clamped to [0, d].
DimEstimate box_dimension(std::span<const Point> points, int dim, std::span<const double> scales);
DimEstimate box_dimension(std::span<const Point> points, int dim, const ScaleSchedule& schedule);
DimEstimate box_dimension(const GridMeasure& measure, std::span<const double> scales);

/// Box dimension of a set of projective angles, given as t = theta/pi in [0,1).
DimEstimate angular_box_dimension(std::span<const double> t, std::span<const double> scales);
/// Occupied bins of a planar AngularDensity, counted at scales coarser than a bin.
DimEstimate angular_box_dimension(const AngularDensity& density, int jmin = 2);

enum class EnergyMethod { kAuto, kDirect, kFft };

struct EnergyOptions {
  bool include_self = true;
  EnergyMethod method = EnergyMethod::kAuto;
};

/// I_s = sum over ordered cell pairs of m_i m_j |c_i - c_j|^-s. A cell paired
/// with itself uses the RMS distance between two uniform points of the cell,
/// h sqrt(d/6). The direct path sums rows in a fixed tree; the FFT path
/// autocorrelates the dense mass grid and is used for large dense measures.
double riesz_energy(const GridMeasure& measure, double s, EnergyOptions options = {});

enum class LpMeasure {
  kNormalized,  // directions (or the projected range) carry total measure 1
  kHausdorff,   // raw bin measures
};

/// (sum density^p * bin measure)^(1/p); density-mode input only.
double lp_norm(const AngularDensity& density, double p, LpMeasure measure = LpMeasure::kNormalized);
double lp_norm(const LineDensity& density, double p, LpMeasure measure = LpMeasure::kNormalized);

struct DirectionSetOptions {
  /// 0 picks the smallest power of two with bin width below (min pair distance)/4.
  std::size_t bins = 0;
  std::size_t max_bins = std::size_t{1} << 22;
  /// Exact distinct-direction count is computed for n up to this size (planar).
  std::size_t exact_limit = 4096;
};

struct DirectionSet {
  std::size_t points = 0;
  std::optional<std::size_t> distinct;  // exact count, when computed
  bool collinear = false;
  AngularDensity histogram{2, 1};  // pair counts per bin
  DimEstimate dimension;
};

/// Pairwise directions of a finite point set, antipodally identified.
DirectionSet direction_set(std::span<const Point> points, int dim = 2, DirectionSetOptions options = {});

/// Exact number of distinct planar directions spanned by `points`.
std::size_t count_distinct_directions(std::span<const Point> points);

}  // namespace radial
