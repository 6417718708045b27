#include "radial/line.hpp"

#include "radial/error.hpp"

namespace radial {

Line Line::from_point_direction(const Point& p, const Vec& dir) {
  const double n = norm(dir);
  require(n > 0.0 && std::isfinite(n), ErrorCode::kInvalidArgument, "line direction must be nonzero");
  Line l;
  l.direction = canonical_direction(dir * (1.0 / n));
  l.foot = p - l.direction * dot(p, l.direction);
  return l;
}

Line Line::through(const Point& a, const Point& b) {
  require(!(a == b), ErrorCode::kInvalidArgument, "line through two equal points");
  return from_point_direction(a, b - a);
}

double Line::distance(const Point& p) const {
  const Vec d = p - foot;
  const Vec along = direction * dot(d, direction);
  return norm(d - along);
}

Tube::Tube(Line l, double w) : line(l), half_width(w) {
  require(w > 0.0, ErrorCode::kInvalidArgument, "tube half-width must be positive");
}

}  // namespace radial
