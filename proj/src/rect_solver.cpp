#include "lgp/rect_solver.hpp"

#include <algorithm>
#include <cmath>

#include "lgp/error.hpp"
#include "lgp/numeric.hpp"

namespace lgp {

RectSolution::RectSolution(BoundaryFunction f) : f_(std::move(f)) {
  const MonotonePairCheck check = validate_monotone_pair(f_);
  if (!check.ok) throw ValidationError("rectangle data monotone on G1 and G2", check.message);
  const BoundingBox box = f_.arc().boundary.bbox();
  L_ = box.hi.x;
  h_ = box.hi.y;
}

double RectSolution::at(double s) const {
  const BoundaryArc& arc = f_.arc();
  return f_(std::min(arc.local(s), arc.length));
}

RectChord RectSolution::chord_for_point(Point z) const {
  const ConvexBoundary& b = f_.arc().boundary;
  if (!(std::abs(z.x) < L_ && std::abs(z.y) < h_)) throw Error("point is not inside the open rectangle");
  const double half = 0.5 * b.total_length();
  // Parametrize the arc on the far side of the diagonal from (-L, h) to
  // (L, -h); the line through the moving point and z then exits through the
  // other arc.
  const bool below = cross(Point{L_, -h_} - Point{-L_, h_}, z - Point{-L_, h_}) < 0.0;
  const double sgn = below ? 1.0 : -1.0;
  auto x_of = [&](double r) { return b.point(half - sgn * r); };
  auto other = [&](Point x) {
    const auto hits = b.line_intersections(x, z - x);
    return hits.back().s;
  };
  auto g = [&](double r) {
    const Point x = x_of(r);
    return at(half - sgn * r) - at(other(x));
  };
  const double r = numeric::bisect(g, 0.0, half, 1e-12 * b.total_length());
  const Point x = x_of(r);
  const double sy = other(x);
  const Point y = b.point(sy);
  RectChord out;
  out.t = 0.5 * (at(half - sgn * r) + at(sy));
  out.chord = below ? Segment{x, y} : Segment{y, x};
  return out;
}

double RectSolution::omega(double r) const {
  // Arclength between two points of one monotone arc is at most sqrt(2) times
  // their distance, the worst case being two points around a corner.
  return std::sqrt(2.0) * f_.max_slope() * r;
}

double RectSolution::modulus_bound(Point x1, Point x2) const {
  const double d = dist(x1, x2);
  const double diam = 2.0 * std::hypot(L_, h_);
  return omega(d / std::sin(alpha())) + omega(std::sqrt(diam) * std::sqrt(d));
}

FmdLoadSolution::FmdLoadSolution(double L, double h, double t_half, double b_half, double l_B)
    : rect_(ConvexBoundary::rectangle(L, h)), L_(L), h_(h), t_(t_half), b_(b_half), l_B_(l_B) {
  if (!(t_half > 0.0 && t_half <= L && b_half > 0.0 && b_half <= L))
    throw ValidationError("load windows inside the sides", "need 0 < t <= L and 0 < b <= L");
  if (!(l_B > 0.0)) throw ValidationError("positive bottom load", "l_B must be positive");
  l_T_ = b_ * l_B_ / t_;
}

std::array<Point, 4> FmdLoadSolution::quadrilateral() const {
  return {Point{-b_, -h_}, Point{b_, -h_}, Point{t_, h_}, Point{-t_, h_}};
}

bool FmdLoadSolution::in_quadrilateral(Point z, double tol) const {
  const auto q = quadrilateral();
  for (int k = 0; k < 4; ++k) {
    const Vec2 e = normalized(q[(k + 1) % 4] - q[k]);
    if (cross(e, z - q[k]) < -tol) return false;
  }
  return true;
}

double FmdLoadSolution::value(Point z) const {
  if (!rect_.contains(z)) throw Error("point lies outside the rectangle");
  const double mu = (z.y + h_) / (2.0 * h_);
  const double w = b_ * (1.0 - mu) + t_ * mu;
  const double lambda = 0.5 * (z.x / w + 1.0);
  return std::clamp(2.0 * b_ * l_B_ * lambda, 0.0, max_value());
}

Segment FmdLoadSolution::level_chord(double c) const {
  const double k = c / max_value() * 2.0 - 1.0;
  return {{b_ * k, -h_}, {t_ * k, h_}};
}

BoundaryFunction FmdLoadSolution::datum(double eps) const { return datum::fmd_load(rect_, t_, b_, l_B_, eps); }

}  // namespace lgp
