#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lgp/vec2.hpp"

namespace lgp {

enum class BoundaryKind { Circle, Rectangle, Superellipse, Polyline };

std::string to_string(BoundaryKind kind);

struct BoundingBox {
  Point lo;
  Point hi;
};

/// A boundary point met by a line, with its position along the line and its
/// arclength parameter.
struct LineHit {
  double lambda;
  double s;
};

/// Closed, positively oriented convex curve parametrized by arclength.
///
/// The parameter s lives in [0, total_length()) and is wrapped on input.
/// The outward normal is the tangent rotated by -pi/2, so (normal, tangent)
/// is positively oriented. At polygon corners the frame is the one of the
/// side that starts at the corner.
class ConvexBoundary {
 public:
  static ConvexBoundary circle(double radius);
  /// Rectangle (-L, L) x (-h, h); s = 0 at the corner (L, -h), then the
  /// right side, the top, the left side and the bottom.
  static ConvexBoundary rectangle(double half_width, double half_height);
  /// |x/a|^p + |y/b|^p = 1 with p >= 2; s = 0 at (a, 0).
  static ConvexBoundary superellipse(double exponent, double a = 1.0, double b = 1.0);
  /// Convex polygon; a clockwise vertex list is reversed.
  static ConvexBoundary polyline(std::vector<Point> vertices);

  BoundaryKind kind() const;
  double total_length() const;
  bool strictly_convex() const;
  double diameter() const;
  BoundingBox bbox() const;
  double area() const;

  double wrap(double s) const;
  Point point(double s) const;
  Vec2 tangent(double s) const;
  Vec2 normal(double s) const;

  /// Arclength parameter of a point lying on the curve.
  double param_of(Point p) const;
  /// Parameter of a nearest boundary point; ties resolve to the smallest s.
  double project(Point p) const;
  bool contains(Point p, double tol = 0.0) const;
  /// Signed distance to the curve, negative inside (exact for circle and
  /// polygons, first-order for the superellipse).
  double signed_distance(Point p) const;
  /// Crossings of the line p + lambda * dir with the curve, sorted by lambda.
  std::vector<LineHit> line_intersections(Point p, Vec2 dir) const;
  /// Parameters of corners (empty for smooth curves).
  std::vector<double> corners() const;
  /// Integral of (x dy - y dx) / 2 along the curve from s0 to s1 (positive
  /// direction, s1 may exceed s0 by at most one period).
  double arc_area_integral(double s0, double s1) const;

  struct Impl;

 private:
  explicit ConvexBoundary(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Arc of a boundary traversed positively from `start` over `length`.
struct BoundaryArc {
  ConvexBoundary boundary;
  double start = 0.0;
  double length = 0.0;

  static BoundaryArc full(const ConvexBoundary& b, double start = 0.0);
  /// Arc from the point nearest `from` to the point nearest `to`.
  static BoundaryArc between(const ConvexBoundary& b, Point from, Point to);

  double end() const { return boundary.wrap(start + length); }
  bool is_full() const;
  Point first() const { return boundary.point(start); }
  Point last() const { return boundary.point(start + length); }
  /// Global parameter of the local parameter sigma in [0, length].
  double global(double sigma) const { return boundary.wrap(start + sigma); }
  /// Local parameter of a global parameter, in [0, total_length).
  double local(double s) const { return boundary.wrap(s - start); }
  Point point(double sigma) const { return boundary.point(start + sigma); }
  bool contains(double s, double tol = 0.0) const;
  BoundaryArc complement() const;
};

/// Convex region: the domain cut by closed half planes.
class ConvexRegion {
 public:
  struct Edge {
    bool is_arc = false;
    Segment segment;          // straight edge, traversed with the region on the left
    double s0 = 0.0, s1 = 0.0;  // boundary arc from s0 to s1 (s1 >= s0)
  };

  ConvexRegion() = default;
  ConvexRegion(ConvexBoundary domain, std::vector<HalfPlane> cuts);

  const ConvexBoundary& domain() const { return domain_; }
  const std::vector<HalfPlane>& cuts() const { return cuts_; }
  bool contains(Point p, double tol = 0.0) const;
  double area() const { return area_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Closed polygonal approximation of the region boundary in traversal order.
  std::vector<Point> outline(int samples_per_arc = 48) const;

 private:
  ConvexBoundary domain_ = ConvexBoundary::circle(1.0);
  std::vector<HalfPlane> cuts_;
  std::vector<Edge> edges_;
  double area_ = 0.0;
};

/// Nearest-point data of a point with respect to a closed arc.
struct ArcDistance {
  double distance = 0.0;
  std::vector<double> sigmas;  // local parameters on the arc, increasing
  std::vector<Point> points;
};

/// Distance queries against a fixed closed arc, caching a dense sampling.
class ArcDistanceOracle {
 public:
  explicit ArcDistanceOracle(BoundaryArc arc, int samples = 2048);
  ArcDistance query(Point x) const;
  const BoundaryArc& arc() const { return arc_; }
  double tolerance() const { return tol_; }

 private:
  BoundaryArc arc_;
  std::vector<double> sigma_;
  std::vector<Point> pts_;
  double tol_;
};

/// Distance from x to the closed arc and all minimizers within
/// 1e-9 * diameter of the minimum.
ArcDistance distance_to_arc(Point x, const BoundaryArc& upsilon);

struct ParamInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct DistancePoint {
  double sigma = 0.0;                // local parameter on Gamma
  std::vector<double> upsilon_sigmas;  // minimizers on the closed free arc
  std::vector<Point> minimizers;
  bool meets_open_arc = false;       // a minimizer lies in the open free arc
};

/// Classification of the datum arc by nearest points on the free arc.
/// Parameters are local to Gamma, which runs from a (sigma = 0) to b.
struct DistanceClassification {
  std::vector<double> samples;
  std::vector<std::vector<double>> phi;  // minimizer parameters per sample
  std::vector<ParamInterval> S;          // runs of samples meeting the open free arc
  std::vector<ParamInterval> U;          // runs of samples with a unique minimizer
  std::vector<DistancePoint> D;          // two or more minimizers on the closed arc
  std::vector<DistancePoint> D_open;     // the part of D lying in S
  std::optional<ParamInterval> B_a;
  std::optional<ParamInterval> B_b;
  double s_a = 0.0;
  double s_b = 0.0;
  std::optional<double> inf_S;
  std::optional<double> sup_S;
  /// |max B_a - inf S| and |min B_b - sup S| when S is non-empty.
  std::optional<double> corollary_gap_a;
  std::optional<double> corollary_gap_b;
};

DistanceClassification classify_distance_structure(const BoundaryArc& gamma, const BoundaryArc& upsilon,
                                                   int n_samples);

/// Hausdorff distance between two finite unions of segments.
double hausdorff(const std::vector<Segment>& a, const std::vector<Segment>& b, int samples_per_segment = 32);

}  // namespace lgp
