#pragma once

#include <cmath>
#include <optional>

namespace lgp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;
};

using Point = Vec2;

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Vec2 normalized(Vec2 v) { return v / norm(v); }

/// Rotation by -pi/2: (x, y) -> (y, -x).
constexpr Vec2 rotate_minus_90(Vec2 v) { return {v.y, -v.x}; }
/// Rotation by +pi/2: (x, y) -> (-y, x).
constexpr Vec2 rotate_plus_90(Vec2 v) { return {-v.y, v.x}; }

inline bool is_finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

struct Segment {
  Point p;
  Point q;

  double length() const { return dist(p, q); }
  Point midpoint() const { return (p + q) * 0.5; }
  Point at(double lambda) const { return p + (q - p) * lambda; }
};

/// Euclidean distance from a point to a closed segment.
inline double distance_to_segment(Point x, const Segment& s) {
  const Vec2 d = s.q - s.p;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return dist(x, s.p);
  double lambda = dot(x - s.p, d) / len2;
  lambda = lambda < 0.0 ? 0.0 : (lambda > 1.0 ? 1.0 : lambda);
  return dist(x, s.p + d * lambda);
}

/// Parameters (lambda_a, lambda_b) of a proper crossing of two segments, both
/// strictly inside (margin, 1 - margin). Touching at endpoints is not a crossing.
inline std::optional<std::pair<double, double>> proper_crossing(const Segment& a, const Segment& b,
                                                                 double margin = 1e-9) {
  const Vec2 da = a.q - a.p;
  const Vec2 db = b.q - b.p;
  const double den = cross(da, db);
  if (den == 0.0) return std::nullopt;
  const Vec2 w = b.p - a.p;
  const double la = cross(w, db) / den;
  const double lb = cross(w, da) / den;
  if (la > margin && la < 1.0 - margin && lb > margin && lb < 1.0 - margin) return std::make_pair(la, lb);
  return std::nullopt;
}

/// Closed half plane bounded by the line through `anchor` with unit direction
/// `direction`; the member side is to the left of the direction.
struct HalfPlane {
  Point anchor;
  Vec2 direction;

  /// Signed distance, positive on the member side, zero on the line.
  double signed_distance(Point p) const { return cross(direction, p - anchor); }
  bool contains(Point p, double tol = 0.0) const { return signed_distance(p) >= -tol; }

  /// Half plane bounded by the line through a and b that contains `inside`.
  static HalfPlane through(Point a, Point b, Point inside) {
    Vec2 d = normalized(b - a);
    if (cross(d, inside - a) < 0.0) d = -d;
    return {a, d};
  }
  /// Half plane bounded by the line through a and b that excludes `outside`.
  static HalfPlane excluding(Point a, Point b, Point outside) {
    Vec2 d = normalized(b - a);
    if (cross(d, outside - a) > 0.0) d = -d;
    return {a, d};
  }
};

}  // namespace lgp
