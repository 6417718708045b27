#include "radial/identity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "radial/error.hpp"
#include "radial/parallel.hpp"
#include "radial/summation.hpp"

namespace radial {

namespace {
constexpr double kPi = std::numbers::pi;

double int_pow(double b, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= b;
  return r;
}
}  // namespace

SmoothDensity SmoothDensity::bump(const Point& centre, double radius, int power) {
  require(radius > 0.0, ErrorCode::kInvalidArgument, "bump radius must be positive");
  require(power >= 1 && power <= 16, ErrorCode::kInvalidArgument, "bump power must be in [1, 16]");
  SmoothDensity f;
  f.kind = Kind::kPolynomialBump;
  f.centre = centre;
  f.radius = radius;
  f.power = power;
  return f;
}

SmoothDensity SmoothDensity::gaussian(const Point& centre, double sigma, double radius) {
  require(sigma > 0.0 && radius > 0.0, ErrorCode::kInvalidArgument, "gaussian needs sigma, radius > 0");
  SmoothDensity f;
  f.kind = Kind::kTruncatedGaussian;
  f.centre = centre;
  f.sigma = sigma;
  f.radius = radius;
  return f;
}

double SmoothDensity::operator()(const Point& y) const {
  const Vec v{y.x - centre.x, y.y - centre.y, 0.0};
  const double r2 = dot(v, v);
  const double R2 = radius * radius;
  if (r2 >= R2) return 0.0;
  if (kind == Kind::kPolynomialBump) {
    const double norm = kPi * R2 / (power + 1);
    return int_pow(1.0 - r2 / R2, power) / norm;
  }
  const double s2 = 2.0 * sigma * sigma;
  const double norm = kPi * s2 * (1.0 - std::exp(-R2 / s2));
  return std::exp(-r2 / s2) / norm;
}

SmoothDensity SmoothDensity::translated(const Vec& v) const {
  SmoothDensity f = *this;
  f.centre = centre + v;
  return f;
}

SmoothDensity SmoothDensity::reflected(const Line& axis) const {
  SmoothDensity f = *this;
  const Point foot = axis.point_at(axis.parameter_of(centre));
  f.centre = foot * 2.0 - centre;
  return f;
}

double line_integral(const SmoothDensity& f, const Point& p, const Vec& e, std::size_t nodes) {
  const Vec to_c = f.centre - p;
  const double t0 = dot(to_c, e);
  const double h = cross2(e, to_c);
  const double a2 = f.radius * f.radius - h * h;
  if (a2 <= 0.0 || nodes == 0) return 0.0;
  const double a = std::sqrt(a2);
  const double dt = 2.0 * a / static_cast<double>(nodes);
  std::vector<double> v(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double t = t0 - a + (static_cast<double>(i) + 0.5) * dt;
    v[i] = f(p + e * t);
  }
  return pairwise_sum(v) * dt;
}

std::vector<double> weighted_radial_density(const SmoothDensity& f, const Point& x, std::size_t bins,
                                            std::size_t nodes, std::size_t sub_rays) {
  require(bins >= 1 && sub_rays >= 1, ErrorCode::kInvalidArgument, "need bins and sub-rays");
  std::vector<double> out(bins);
  const double width = kPi / static_cast<double>(bins);
  std::vector<double> sub(sub_rays);
  for (std::size_t b = 0; b < bins; ++b) {
    // Polar coordinates about x: the weight |x-y|^{-1} cancels the Jacobian r,
    // so each angular node contributes a full-line integral of f.
    for (std::size_t q = 0; q < sub_rays; ++q) {
      const double theta = (static_cast<double>(b) + (static_cast<double>(q) + 0.5) / sub_rays) * width;
      sub[q] = line_integral(f, x, unit_from_angle(theta), nodes);
    }
    out[b] = pairwise_sum(sub) / static_cast<double>(sub_rays);
  }
  return out;
}

IdentityResult verify_projection_identity(const SmoothDensity& mu, const SmoothDensity& nu, double p,
                                          int level) {
  require(p > 0.0, ErrorCode::kInvalidArgument, "identity exponent must be positive");
  require(level >= 3 && level <= 14, ErrorCode::kInvalidArgument, "quadrature level must be in [3, 14]");
  require(distance(mu.centre, nu.centre) > mu.radius + nu.radius, ErrorCode::kSupportOverlap,
          "supports of mu and nu intersect");

  const std::size_t n = std::size_t{1} << level;
  const std::size_t bins = n / 2;
  const double width = kPi / static_cast<double>(bins);
  const std::size_t g = std::size_t{1} << std::max(level - 4, 2);

  IdentityResult res;
  res.p = p;
  res.level = level;
  res.directions = bins;

  // Left side: nu-weighted average over a midpoint grid of centres.
  const double h = 2.0 * nu.radius / static_cast<double>(g);
  std::vector<Point> centres;
  std::vector<double> weights;
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < g; ++j) {
      const Point x{nu.centre.x - nu.radius + (static_cast<double>(i) + 0.5) * h,
                    nu.centre.y - nu.radius + (static_cast<double>(j) + 0.5) * h, 0.0};
      const double w = nu(x);
      if (w <= 0.0) continue;
      centres.push_back(x);
      weights.push_back(w * h * h);
    }
  res.centres = centres.size();
  std::vector<double> lhs_terms(centres.size());
  parallel_for(centres.size(), [&](std::size_t c) {
    auto dens = weighted_radial_density(mu, centres[c], bins, n);
    for (auto& v : dens) v = std::pow(v, p) * width;
    lhs_terms[c] = weights[c] * pairwise_sum(dens);
  });
  res.lhs = pairwise_sum(lhs_terms);

  // Right side: fibre the nu-integral along lines parallel to e.
  std::vector<double> rhs_terms(bins);
  parallel_for(bins, [&](std::size_t b) {
    const Vec e = unit_from_angle((static_cast<double>(b) + 0.5) * width);
    const Vec nrm{e.y, -e.x, 0.0};
    const double wc = dot(nu.centre, nrm);
    const double dw = 2.0 * nu.radius / static_cast<double>(n);
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = wc - nu.radius + (static_cast<double>(i) + 0.5) * dw;
      const Point foot = nrm * w;
      const double pn = line_integral(nu, foot, e, n);
      const double pm = pn > 0.0 ? line_integral(mu, foot, e, n) : 0.0;
      terms[i] = std::pow(pm, p) * pn * dw;
    }
    rhs_terms[b] = pairwise_sum(terms) * width;
  });
  res.rhs = pairwise_sum(rhs_terms);
  res.relative_error = std::abs(res.lhs - res.rhs) / res.rhs;
  return res;
}

std::pair<SmoothDensity, SmoothDensity> bundled_bump_pair() {
  const auto mu = SmoothDensity::bump({0.3, 0.4, 0.0}, 0.18, 3);
  const Line axis = Line::from_point_direction({0.55, 0.5, 0.0}, {1.0, 4.0, 0.0});
  return {mu, mu.reflected(axis)};
}

}  // namespace radial
