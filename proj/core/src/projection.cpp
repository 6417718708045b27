#include "radial/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "radial/error.hpp"
#include "radial/summation.hpp"

namespace radial {

namespace {

constexpr double kPi = std::numbers::pi;

// Quadrant-split angle so that a rotation by pi/2 maps the bin computation of
// one quadrant onto the other bit for bit.
std::size_t planar_bin(const Vec& v, std::size_t bins) {
  const Vec c = canonical_direction(Vec{v.x, v.y, 0.0});
  std::size_t quadrant = 0;
  double a = 0.0;
  if (c.x > 0.0) {
    a = std::atan2(c.y, c.x);
  } else {
    quadrant = 1;
    a = std::atan2(-c.x, c.y);
  }
  if (bins % 2 == 0) {
    const std::size_t half = bins / 2;
    const double k = std::floor(a / (kPi / 2.0) * static_cast<double>(half));
    const auto kk = static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(half - 1)));
    return quadrant * half + kk;
  }
  const double theta = quadrant * (kPi / 2.0) + a;
  const double k = std::floor(theta / kPi * static_cast<double>(bins));
  return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(bins - 1)));
}

std::vector<double> bin_sums(std::vector<std::vector<double>>& per_bin) {
  std::vector<double> out(per_bin.size());
  for (std::size_t b = 0; b < per_bin.size(); ++b) out[b] = canonical_sum(std::move(per_bin[b]));
  return out;
}

}  // namespace

AngularDensity::AngularDensity(int dim, std::size_t bins, DensityMode mode) : dim_(dim), mode_(mode) {
  require(dim == 2 || dim == 3, ErrorCode::kInvalidArgument, "dimension must be 2 or 3");
  require(bins >= 1, ErrorCode::kInvalidArgument, "need at least one direction bin");
  if (dim == 3) {
    bands_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(bins / 2.0))));
    sectors_ = std::max<std::size_t>(1, bins / bands_);
    bins = bands_ * sectors_;
  } else {
    sectors_ = bins;
  }
  values_.assign(bins, 0.0);
}

double AngularDensity::bin_measure() const {
  return (dim_ == 2 ? kPi : 2.0 * kPi) / static_cast<double>(bins());
}

std::size_t AngularDensity::bin_of(const Vec& direction) const {
  if (dim_ == 2) return planar_bin(direction, bins());
  const Vec c = normalized(canonical_direction(direction));
  const double zb = std::floor(c.z * static_cast<double>(bands_));
  const auto band = static_cast<std::size_t>(std::clamp(zb, 0.0, static_cast<double>(bands_ - 1)));
  double phi = std::atan2(c.y, c.x);
  if (phi < 0.0) phi += 2.0 * kPi;
  const double sb = std::floor(phi / (2.0 * kPi) * static_cast<double>(sectors_));
  const auto sector = static_cast<std::size_t>(std::clamp(sb, 0.0, static_cast<double>(sectors_ - 1)));
  return band * sectors_ + sector;
}

Vec AngularDensity::bin_center(std::size_t b) const {
  if (dim_ == 2) return unit_from_angle((static_cast<double>(b) + 0.5) * kPi / static_cast<double>(bins()));
  const std::size_t band = b / sectors_;
  const std::size_t sector = b % sectors_;
  const double z = (static_cast<double>(band) + 0.5) / static_cast<double>(bands_);
  const double phi = (static_cast<double>(sector) + 0.5) * 2.0 * kPi / static_cast<double>(sectors_);
  const double rho = std::sqrt(1.0 - z * z);
  return {rho * std::cos(phi), rho * std::sin(phi), z};
}

double AngularDensity::total_mass() const {
  const double s = pairwise_sum(values_);
  return mode_ == DensityMode::kMeasure ? s : s * bin_measure();
}

std::vector<std::size_t> AngularDensity::occupied() const {
  std::vector<std::size_t> out;
  for (std::size_t b = 0; b < values_.size(); ++b)
    if (values_[b] > 0.0) out.push_back(b);
  return out;
}

AngularDensity AngularDensity::to_density() const {
  AngularDensity out = *this;
  if (mode_ == DensityMode::kDensity) return out;
  out.mode_ = DensityMode::kDensity;
  const double w = bin_measure();
  for (auto& v : out.values_) v /= w;
  return out;
}

AngularDensity AngularDensity::to_measure() const {
  AngularDensity out = *this;
  if (mode_ == DensityMode::kMeasure) return out;
  out.mode_ = DensityMode::kMeasure;
  const double w = bin_measure();
  for (auto& v : out.values_) v *= w;
  return out;
}

LineDensity::LineDensity(const Vec& e, double lo, double hi, std::size_t bins, DensityMode mode)
    : lo_(lo), hi_(hi), mode_(mode), values_(bins, 0.0) {
  require(bins >= 1, ErrorCode::kInvalidArgument, "need at least one bin");
  require(hi > lo, ErrorCode::kInvalidArgument, "empty projection range");
  const double n = norm(e);
  require(n > 0.0, ErrorCode::kInvalidArgument, "projection direction must be nonzero");
  e_ = e * (1.0 / n);
}

std::size_t LineDensity::bin_of(double w) const {
  if (w < lo_ || w > hi_) return bins();
  const double k = std::floor((w - lo_) / bin_width());
  return static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(bins() - 1)));
}

double LineDensity::total_mass() const {
  const double s = pairwise_sum(values_);
  return mode_ == DensityMode::kMeasure ? s : s * bin_width();
}

double LineDensity::density_at(double w) const {
  const std::size_t b = bin_of(w);
  if (b >= bins()) return 0.0;
  return mode_ == DensityMode::kDensity ? values_[b] : values_[b] / bin_width();
}

LineDensity LineDensity::to_density() const {
  LineDensity out = *this;
  if (mode_ == DensityMode::kDensity) return out;
  out.mode_ = DensityMode::kDensity;
  for (auto& v : out.values_) v /= bin_width();
  return out;
}

void require_outside_support(const GridMeasure& measure, const Point& x) {
  require(measure.distance_to_support(x) > 2.0 * measure.cell_diameter(), ErrorCode::kCentreInsideSupport,
          "centre lies within two cell diameters of the support");
}

AngularDensity radial_pushforward(const GridMeasure& measure, const Point& x, std::size_t bins) {
  require_outside_support(measure, x);
  AngularDensity out(measure.dim(), bins, DensityMode::kMeasure);
  std::vector<std::vector<double>> per_bin(out.bins());
  for (const auto& c : measure.cells()) per_bin[out.bin_of(measure.center(c) - x)].push_back(c.mass);
  auto sums = bin_sums(per_bin);
  std::copy(sums.begin(), sums.end(), out.values().begin());
  return out;
}

AngularDensity weighted_radial_density(const GridMeasure& measure, const Point& x, std::size_t bins,
                                       double c_d) {
  require_outside_support(measure, x);
  AngularDensity out(measure.dim(), bins, DensityMode::kDensity);
  std::vector<std::vector<double>> per_bin(out.bins());
  const double power = 1.0 - measure.dim();
  for (const auto& c : measure.cells()) {
    const Vec v = measure.center(c) - x;
    const double r = norm(v);
    const double k = measure.dim() == 2 ? 1.0 / r : std::pow(r, power);
    per_bin[out.bin_of(v)].push_back(c_d * c.mass * k);
  }
  auto sums = bin_sums(per_bin);
  const double w = out.bin_measure();
  for (std::size_t b = 0; b < sums.size(); ++b) out.values()[b] = sums[b] / w;
  return out;
}

LineDensity orthogonal_pushforward(const GridMeasure& measure, const Vec& e, std::size_t bins) {
  require(measure.dim() == 2, ErrorCode::kInvalidArgument, "orthogonal projections are planar only");
  const Vec n = normalized(e);
  const Vec nperp{n.y, -n.x, 0.0};
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (double cx : {0.0, 1.0})
    for (double cy : {0.0, 1.0}) {
      const double w = dot(Vec{cx, cy, 0.0}, nperp);
      lo = first ? w : std::min(lo, w);
      hi = first ? w : std::max(hi, w);
      first = false;
    }
  return orthogonal_pushforward(measure, e, bins, lo, hi);
}

LineDensity orthogonal_pushforward(const GridMeasure& measure, const Vec& e, std::size_t bins, double lo,
                                   double hi) {
  require(measure.dim() == 2, ErrorCode::kInvalidArgument, "orthogonal projections are planar only");
  LineDensity out(e, lo, hi, bins, DensityMode::kMeasure);
  std::vector<std::vector<double>> per_bin(bins + 1);
  for (const auto& c : measure.cells()) {
    per_bin[out.bin_of(out.coordinate(measure.center(c)))].push_back(c.mass);
  }
  require(per_bin[bins].empty(), ErrorCode::kInvalidArgument, "projection range does not cover the support");
  per_bin.pop_back();
  auto sums = bin_sums(per_bin);
  std::copy(sums.begin(), sums.end(), out.values().begin());
  return out;
}

}  // namespace radial
