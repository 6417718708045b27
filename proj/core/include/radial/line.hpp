#pragma once

#include "radial/geometry.hpp"

namespace radial {

/// Unoriented line. `direction` is the canonical antipodal representative and
/// `foot` is the point of the line closest to the origin.
struct Line {
  Vec direction{1.0, 0.0, 0.0};
  Vec foot{};

  static Line through(const Point& a, const Point& b);
  static Line from_point_direction(const Point& p, const Vec& dir);

  Point point_at(double t) const { return foot + direction * t; }
  double parameter_of(const Point& p) const { return dot(p - foot, direction); }
  double distance(const Point& p) const;
  /// Signed planar offset, <foot, perp(direction)>.
  double offset() const { return dot(foot, perp(direction)); }
  /// Direction angle in [0, pi), planar only.
  double angle() const { return projective_angle(direction); }
};

/// Open tube T(line, half_width): points at distance < half_width from the line.
struct Tube {
  Line line;
  double half_width = 0.0;

  Tube() = default;
  Tube(Line l, double w);

  bool contains(const Point& p) const { return line.distance(p) < half_width; }
  const Vec& dir() const { return line.direction; }
};

}  // namespace radial
