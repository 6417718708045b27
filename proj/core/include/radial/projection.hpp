#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "radial/geometry.hpp"
#include "radial/measure.hpp"

namespace radial {

enum class DensityMode {
  kMeasure,  // per-bin mass
  kDensity,  // per-bin mass divided by bin measure
};

/// Histogram over projective directions (antipodes identified).
///
/// d = 2: B equal arcs of the upper half circle, bin b = [b pi/B, (b+1) pi/B).
/// d = 3: equal-area partition of the upper hemisphere into bands of equal
/// height in z, each split into equal azimuth sectors.
class AngularDensity {
 public:
  AngularDensity(int dim, std::size_t bins, DensityMode mode = DensityMode::kMeasure);

  int dim() const { return dim_; }
  std::size_t bins() const { return values_.size(); }
  DensityMode mode() const { return mode_; }
  std::size_t bands() const { return bands_; }
  std::size_t sectors() const { return sectors_; }

  /// H^{d-1} measure of one bin (pi/B or 2 pi/B).
  double bin_measure() const;
  double total_measure() const { return bin_measure() * static_cast<double>(bins()); }
  std::size_t bin_of(const Vec& direction) const;
  Vec bin_center(std::size_t b) const;

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t b) const { return values_[b]; }

  /// Total pushed mass (integrates densities against the bin measure).
  double total_mass() const;
  std::vector<std::size_t> occupied() const;
  AngularDensity to_density() const;
  AngularDensity to_measure() const;

 private:
  int dim_;
  DensityMode mode_;
  std::size_t bands_ = 1;
  std::size_t sectors_ = 1;
  std::vector<double> values_;
};

/// Histogram of the orthogonal projection onto the line e-perp, planar only.
/// The coordinate is w = <y, e_perp> with e_perp = (e_y, -e_x).
class LineDensity {
 public:
  LineDensity(const Vec& e, double lo, double hi, std::size_t bins,
              DensityMode mode = DensityMode::kMeasure);

  const Vec& direction() const { return e_; }
  Vec normal() const { return Vec{e_.y, -e_.x, 0.0}; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t bins() const { return values_.size(); }
  double bin_width() const { return (hi_ - lo_) / static_cast<double>(bins()); }
  DensityMode mode() const { return mode_; }
  /// Bin containing w, or bins() when w is outside [lo, hi].
  std::size_t bin_of(double w) const;
  double coordinate(const Point& y) const { return dot(y, normal()); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t b) const { return values_[b]; }

  double total_mass() const;
  /// Density at coordinate w (zero outside the binned range).
  double density_at(double w) const;
  LineDensity to_density() const;

 private:
  Vec e_;
  double lo_;
  double hi_;
  DensityMode mode_;
  std::vector<double> values_;
};

/// Normalising constant of the weighted measure c_d |x - y|^{1-d} d mu. With
/// antipodal directions pooled, the pushed density at e equals the full-line
/// integral of mu along x + R e when c_d = 1, in every dimension.
inline constexpr double kWeightConstant = 1.0;

/// Throws CentreInsideSupport unless dist(x, support cells) > 2 cell diameters.
void require_outside_support(const GridMeasure& measure, const Point& x);

/// Pushforward of mu under y -> (y - x)/|y - x| (cell centres), measure mode.
AngularDensity radial_pushforward(const GridMeasure& measure, const Point& x, std::size_t bins);

/// Pushforward of c_d |x - y|^{1-d} d mu, density mode.
AngularDensity weighted_radial_density(const GridMeasure& measure, const Point& x, std::size_t bins,
                                       double c_d = kWeightConstant);

/// Default range is the projection of the unit square.
LineDensity orthogonal_pushforward(const GridMeasure& measure, const Vec& e, std::size_t bins);
LineDensity orthogonal_pushforward(const GridMeasure& measure, const Vec& e, std::size_t bins,
                                   double lo, double hi);

}  // namespace radial
