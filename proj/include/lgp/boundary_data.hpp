#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lgp/geometry.hpp"

namespace lgp {

enum class PieceKind { Increasing, Decreasing, Constant };

std::string to_string(PieceKind kind);

/// Maximal monotone or constant run of the datum in local arc parameters.
/// `v0` is the limit from the right at s0 and `v1` the limit from the left at s1.
struct Piece {
  double s0 = 0.0;
  double s1 = 0.0;
  PieceKind kind = PieceKind::Constant;
  double v0 = 0.0;
  double v1 = 0.0;
};

struct LevelPreimage {
  double t = 0.0;
  std::vector<double> params;  // local parameters on the arc, increasing
  std::vector<Point> points;
  std::vector<bool> plateau;   // endpoint of a constant run at level t
};

/// Dirichlet datum on an arc. The value function takes the local arc
/// parameter and is right continuous at jumps (pieces are half open [s0, s1),
/// the last one closed).
class BoundaryFunction {
 public:
  using Fn = std::function<double(double)>;

  BoundaryFunction(BoundaryArc arc, std::vector<Piece> pieces, Fn value, Fn derivative = {});

  /// Splits a function that is continuous on each interval between `breaks`
  /// into monotone and constant pieces by sampling.
  static BoundaryFunction segmented(BoundaryArc arc, Fn value, std::vector<double> breaks = {}, Fn derivative = {},
                                    int samples = 8192);
  /// Linear interpolation of values at uniformly spaced local parameters.
  static BoundaryFunction from_samples(BoundaryArc arc, std::vector<double> values);

  const BoundaryArc& arc() const { return arc_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  double operator()(double sigma) const { return value_(sigma); }
  /// Value at the boundary point nearest to p.
  double at_point(Point p) const;
  double derivative(double sigma) const;

  double inf() const { return inf_; }
  double sup() const { return sup_; }
  double value_a() const { return pieces_.front().v0; }
  double value_b() const { return pieces_.back().v1; }
  bool continuous() const;
  bool has_plateaus() const;
  /// Largest |df/ds| over the monotone pieces.
  double max_slope() const { return max_slope_; }
  /// Absolute level tolerance, 1e-10 of the range.
  double level_tolerance() const;

  LevelPreimage preimage(double t) const;
  /// Index of the piece containing the local parameter.
  std::size_t piece_index(double sigma) const;

  /// Local parameters inside pieces where the derivative jumps; boundary
  /// quadrature splits there.
  const std::vector<double>& kinks() const { return kinks_; }
  BoundaryFunction& set_kinks(std::vector<double> kinks);

 private:
  BoundaryArc arc_;
  std::vector<Piece> pieces_;
  Fn value_;
  Fn derivative_;
  double inf_ = 0.0;
  double sup_ = 0.0;
  double max_slope_ = 0.0;
  std::vector<double> kinks_;
};

struct TraceAtom {
  double s = 0.0;  // global boundary parameter
  double weight = 0.0;
};

struct TraceDensity {
  double s0 = 0.0;      // global start parameter
  double length = 0.0;
  double increment = 0.0;  // f(end) - f(start), the exact integral of the density
  std::vector<double> breaks;  // offsets where the density jumps
  std::function<double(double)> density;  // df/ds at offset in [0, length]
};

/// g = df/dtau as a measure on the boundary: atoms at jumps plus a density.
struct TraceMeasure {
  ConvexBoundary boundary;
  std::vector<TraceAtom> atoms;
  std::vector<TraceDensity> pieces;

  double total_mass() const;
};

/// Positive orientation: a jump from v- to v+ when passing s in the
/// direction of increasing arclength is an atom of weight v+ - v-.
/// On a full loop the jump across the seam is included.
TraceMeasure tangential_derivative(const BoundaryFunction& f);

using BoundaryTest = std::function<double(Point)>;

/// <g, phi>: atoms plus Gauss-Kronrod quadrature of phi * density on panels of
/// at most 1/256 of the perimeter, split at corners and density jumps.
double pair(const TraceMeasure& g, const BoundaryTest& phi);

/// Strict monotonicity of a rectangle datum along G1 = right + top and
/// G2 = left + bottom, both read from the corner (-L, h) to (L, -h).
struct MonotonePairCheck {
  bool ok = false;
  std::string message;
  std::optional<ParamInterval> offending;  // global parameters
  double value_top_left = 0.0;
  double value_bottom_right = 0.0;
};

MonotonePairCheck validate_monotone_pair(const BoundaryFunction& f, int samples = 8192);

namespace datum {

/// Angle attached to a point of the arc: theta0 + 2*pi*sigma / P, where theta0
/// defaults to the polar angle of the arc start in (-pi, pi].
struct AngleMap {
  double theta0 = 0.0;
  double scale = 1.0;
  double operator()(double sigma) const { return theta0 + scale * sigma; }
};

AngleMap angle_map(const BoundaryArc& arc, std::optional<double> theta0 = std::nullopt);

/// (cx * x + cy * y + c0)^power along the arc.
BoundaryFunction affine(const BoundaryArc& arc, double cx, double cy, double c0, double power = 1.0);
/// c0 + c1 * theta.
BoundaryFunction angular_affine(const BoundaryArc& arc, double c0, double c1,
                                std::optional<double> theta0 = std::nullopt);
/// height * (1 - |theta - peak| / width).
BoundaryFunction angular_tent(const BoundaryArc& arc, double peak, double width, double height = 1.0,
                              std::optional<double> theta0 = std::nullopt);
/// amplitude * sin(frequency * (theta - shift)).
BoundaryFunction angular_sine(const BoundaryArc& arc, double frequency, double shift, double amplitude = 1.0,
                              std::optional<double> theta0 = std::nullopt);

/// Boundary values of the self-equilibrated rectangle load: 0 on the left
/// side, l_B min((x+b)^+, 2b) on the bottom, l_T min((x+t)^+, 2t) on the top
/// with l_T = b l_B / t, and 2 b l_B on the right side. With eps > 0 the
/// strictly monotone perturbation f + eps * d / (2(L + h)) is returned, d the
/// arclength distance from the corner (-L, h) along either half.
BoundaryFunction fmd_load(const ConvexBoundary& rect, double t_half, double b_half, double l_B, double eps = 0.0);

/// Three-valued datum on the whole boundary: 0 on [s0, s1), a1 + a2 on
/// [s1, s2), a1 on [s2, s0 + P), global parameters in increasing order.
/// With eps > 0 each jump is replaced by a linear ramp of width eps centred at
/// the jump and the arc starts in the middle of the zero run.
BoundaryFunction piecewise_constant(const ConvexBoundary& b, double s0, double s1, double s2, double a1,
                                    double a2, double eps = 0.0);

}  // namespace datum

}  // namespace lgp
