#pragma once

#include <cmath>
#include <numbers>

namespace radial {

/// Point or vector in R^d, d <= 3. Planar code leaves z at zero.
struct Vec {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec& operator+=(const Vec& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec& operator-=(const Vec& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend constexpr Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend constexpr Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend constexpr Vec operator*(Vec a, double s) { return a *= s; }
  friend constexpr Vec operator*(double s, Vec a) { return a *= s; }
  friend constexpr Vec operator-(Vec a) { return a *= -1.0; }
  friend constexpr bool operator==(const Vec&, const Vec&) = default;
};

using Point = Vec;

constexpr double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec& a, const Vec& b) { return norm(a - b); }
/// z-component of the planar cross product.
constexpr double cross2(const Vec& a, const Vec& b) { return a.x * b.y - a.y * b.x; }
constexpr Vec cross(const Vec& a, const Vec& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Vec normalized(const Vec& a) { return a * (1.0 / norm(a)); }
/// Planar unit normal, the direction rotated by +90 degrees.
constexpr Vec perp(const Vec& a) { return {-a.y, a.x, 0.0}; }
inline Vec unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta), 0.0}; }

/// Antipodal representative with nonnegative last nonzero coordinate.
constexpr Vec canonical_direction(const Vec& v) {
  bool flip = false;
  if (v.z != 0.0) {
    flip = v.z < 0.0;
  } else if (v.y != 0.0) {
    flip = v.y < 0.0;
  } else {
    flip = v.x < 0.0;
  }
  return flip ? -v : v;
}

/// Angle in [0, pi) of the projective direction of a nonzero planar vector.
inline double projective_angle(const Vec& v) {
  Vec c = canonical_direction(Vec{v.x, v.y, 0.0});
  double a = std::atan2(c.y, c.x);
  if (a >= std::numbers::pi) a = 0.0;
  return a < 0.0 ? 0.0 : a;
}

}  // namespace radial
