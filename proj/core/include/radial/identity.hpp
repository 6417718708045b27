#pragma once

#include <cstddef>
#include <vector>

#include "radial/geometry.hpp"
#include "radial/line.hpp"

namespace radial {

/// Closed-form planar probability density supported on the disc B(centre, radius).
struct SmoothDensity {
  enum class Kind { kPolynomialBump, kTruncatedGaussian };

  Kind kind = Kind::kPolynomialBump;
  Point centre{};
  double radius = 0.2;
  int power = 3;       // bump: (1 - |y-c|^2/R^2)^power
  double sigma = 0.1;  // gaussian: exp(-|y-c|^2 / (2 sigma^2)), cut at radius

  static SmoothDensity bump(const Point& centre, double radius, int power = 3);
  static SmoothDensity gaussian(const Point& centre, double sigma, double radius);

  /// Density value, normalised to unit total mass.
  double operator()(const Point& y) const;
  SmoothDensity translated(const Vec& v) const;
  SmoothDensity reflected(const Line& axis) const;
};

/// Integral of f along the line p + t e over the chord of f's support disc,
/// midpoint rule with `nodes` nodes. e must be a unit vector.
double line_integral(const SmoothDensity& f, const Point& p, const Vec& e, std::size_t nodes);

/// Per-direction density of the weighted pushforward of f about x, for B
/// equal bins of the half circle. Each bin mass is integrated in polar
/// coordinates (sub_rays angular nodes per bin, `nodes` radial nodes per ray)
/// and divided by the bin measure pi/B; antipodal rays are pooled.
std::vector<double> weighted_radial_density(const SmoothDensity& f, const Point& x, std::size_t bins,
                                            std::size_t nodes, std::size_t sub_rays = 2);

struct IdentityResult {
  double p = 1.0;
  int level = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_error = 0.0;
  std::size_t directions = 0;
  std::size_t centres = 0;
};

/// Both sides of the weighted-projection identity for planar mu, nu at
/// quadrature level L (n = 2^L):
///   lhs = int ||pi_x# mu_x||_p^p dnu(x), centres on a midpoint grid of
///         2^max(L-4,2) nodes per axis over spt nu, n/2 direction bins;
///   rhs = int ||pi_e# mu||^p_{L^p(pi_e# nu)} de over the same directions,
///         n midpoint nodes in w over the projection of spt nu.
/// Directions range over the half circle on both sides.
IdentityResult verify_projection_identity(const SmoothDensity& mu, const SmoothDensity& nu, double p,
                                          int level);

/// The bundled pair: a bump and its mirror image across a slanted line.
std::pair<SmoothDensity, SmoothDensity> bundled_bump_pair();

}  // namespace radial
