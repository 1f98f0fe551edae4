#pragma once

#include <array>

#include "lgp/boundary_data.hpp"
#include "lgp/geometry.hpp"

namespace lgp {

/// The level chord through an interior point: x on G1 = top + right,
/// y on G2 = left + bottom, f(x) = f(y) = t.
struct RectChord {
  double t = 0.0;
  Segment chord;
};

/// Least gradient solution on a rectangle for data strictly monotone on G1 and
/// G2 between the corners (-L, h) and (L, -h).
class RectSolution {
 public:
  explicit RectSolution(BoundaryFunction f);

  const BoundaryFunction& datum() const { return f_; }
  double half_width() const { return L_; }
  double half_height() const { return h_; }
  /// Smallest angle between the diagonals and the horizontal sides.
  double alpha() const { return std::atan(h_ / L_); }

  RectChord chord_for_point(Point z) const;
  double value(Point z) const { return chord_for_point(z).t; }
  /// Modulus of continuity of the datum with respect to the Euclidean
  /// distance of boundary points.
  double omega(double r) const;
  /// omega(|d| / sin alpha) + omega(sqrt(diam) sqrt(|d|)) with d = x1 - x2.
  double modulus_bound(Point x1, Point x2) const;

 private:
  double at(double s) const;

  BoundaryFunction f_;
  double L_ = 0.0;
  double h_ = 0.0;
};

/// Closed form solution for the self-equilibrated rectangle load: zero left
/// of the chord [(-b, -h), (-t, h)], 2 b l_B right of [(b, -h), (t, h)] and
/// interpolated along the chords of the quadrilateral Q in between.
class FmdLoadSolution {
 public:
  FmdLoadSolution(double L, double h, double t_half, double b_half, double l_B);

  const ConvexBoundary& domain() const { return rect_; }
  double top_load() const { return l_T_; }
  double max_value() const { return 2.0 * b_ * l_B_; }
  /// Total load l_T * 2t - l_B * 2b carried by the top and bottom windows.
  double equilibrium_residual() const { return l_T_ * 2.0 * t_ - l_B_ * 2.0 * b_; }
  std::array<Point, 4> quadrilateral() const;
  bool in_quadrilateral(Point z, double tol = 0.0) const;

  double value(Point z) const;
  /// Level chord of value c in (0, 2 b l_B).
  Segment level_chord(double c) const;
  /// Boundary datum, optionally with the monotone perturbation of size eps.
  BoundaryFunction datum(double eps = 0.0) const;

 private:
  ConvexBoundary rect_;
  double L_, h_, t_, b_, l_B_, l_T_;
};

}  // namespace lgp
