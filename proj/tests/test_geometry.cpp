#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lgp/error.hpp"
#include "lgp/geometry.hpp"

using namespace lgp;
using std::numbers::pi;

namespace {

Point on_unit_circle(double theta) { return {std::cos(theta), std::sin(theta)}; }

BoundaryArc circle_arc(const ConvexBoundary& c, double th0, double th1) {
  return {c, c.wrap(th0), th1 - th0};
}

// Dense scan over the arc, independent of the refinement logic.
double brute_distance(Point x, const BoundaryArc& arc, int n) {
  double best = 1e300;
  for (int k = 0; k <= n; ++k) best = std::min(best, dist(x, arc.point(arc.length * k / n)));
  return best;
}

}  // namespace

TEST_CASE("frames are positively oriented and unit length") {
  for (const ConvexBoundary& b : {ConvexBoundary::circle(1.0), ConvexBoundary::superellipse(4.0),
                                  ConvexBoundary::rectangle(2.0, 1.0)}) {
    for (int k = 0; k < 50; ++k) {
      const double s = b.total_length() * (k + 0.37) / 50;
      const Vec2 t = b.tangent(s), n = b.normal(s);
      CHECK(norm(t) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(cross(n, t) == doctest::Approx(1.0).epsilon(1e-12));
      // The curve advances along the tangent.
      const Point ahead = b.point(s + 1e-6);
      CHECK(dot(ahead - b.point(s), t) > 0.0);
    }
  }
}

TEST_CASE("superellipse perimeter and area match independent quadratures") {
  const ConvexBoundary se = ConvexBoundary::superellipse(4.0);
  // Area of |x|^4 + |y|^4 <= 1 is 4 Gamma(5/4)^2 / Gamma(3/2).
  const double area = 4.0 * std::pow(std::tgamma(1.25), 2) / std::tgamma(1.5);
  CHECK(se.area() == doctest::Approx(area).epsilon(1e-12));
  // Perimeter from a fine inscribed polygon in the polar angle.
  double perim = 0.0;
  const int n = 400000;
  auto pt = [](double phi) {
    const double r = std::pow(std::pow(std::abs(std::cos(phi)), 4) + std::pow(std::abs(std::sin(phi)), 4), -0.25);
    return Point{r * std::cos(phi), r * std::sin(phi)};
  };
  for (int k = 0; k < n; ++k) perim += dist(pt(2 * pi * k / n), pt(2 * pi * (k + 1) / n));
  CHECK(se.total_length() == doctest::Approx(perim).epsilon(1e-9));
  // Points lie on the curve and parameters round-trip.
  for (int k = 0; k < 100; ++k) {
    const double s = se.total_length() * (k + 0.5) / 100;
    const Point p = se.point(s);
    CHECK(std::pow(p.x, 4) + std::pow(p.y, 4) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(se.param_of(p) == doctest::Approx(s).epsilon(1e-11));
  }
}

TEST_CASE("project_to_boundary examples") {
  const ConvexBoundary c = ConvexBoundary::circle(1.0);
  CHECK(dist(c.point(c.project({2.0, 0.0})), Point{1.0, 0.0}) < 1e-14);
  CHECK(c.project({0.0, 0.0}) == 0.0);
  const ConvexBoundary sq = ConvexBoundary::rectangle(1.0, 1.0);
  CHECK(dist(sq.point(sq.project({0.5, 2.0})), Point{0.5, 1.0}) < 1e-14);
  // Centre of the square: four equidistant feet, the smallest parameter wins.
  CHECK(sq.project({0.0, 0.0}) == doctest::Approx(1.0));
  // Projection is a nearest point, checked against a dense scan.
  const ConvexBoundary se = ConvexBoundary::superellipse(4.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 20; ++k) {
    const Point p{u(rng), u(rng)};
    const double d = dist(p, se.point(se.project(p)));
    CHECK(d <= brute_distance(p, BoundaryArc::full(se), 200000) + 1e-9);
  }
}

TEST_CASE("distance_to_arc examples on the unit circle") {
  const ConvexBoundary c = ConvexBoundary::circle(1.0);
  const BoundaryArc ups = circle_arc(c, -pi / 4, pi / 4);
  const ArcDistance r1 = distance_to_arc({-1.0, 0.0}, ups);
  CHECK(r1.distance == doctest::Approx(2.0 * std::sin(3 * pi / 8)).epsilon(1e-12));
  REQUIRE(r1.points.size() == 2);
  CHECK(r1.distance == doctest::Approx(brute_distance({-1, 0}, ups, 1000000)).epsilon(1e-9));

  const ArcDistance r2 = distance_to_arc(on_unit_circle(pi / 2), ups);
  CHECK(r2.distance == doctest::Approx(2.0 * std::sin(pi / 8)).epsilon(1e-12));
  REQUIRE(r2.points.size() == 1);
  CHECK(dist(r2.points[0], on_unit_circle(pi / 4)) < 1e-12);

  const ArcDistance r3 = distance_to_arc(ups.last(), ups);
  CHECK(r3.distance == doctest::Approx(0.0));
  REQUIRE(r3.points.size() == 1);
}

TEST_CASE("distance_to_arc agrees with a dense scan on random instances") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<ConvexBoundary> shapes = {ConvexBoundary::circle(1.0), ConvexBoundary::superellipse(4.0),
                                              ConvexBoundary::rectangle(1.5, 1.0)};
  for (int k = 0; k < 100; ++k) {
    const ConvexBoundary& b = shapes[k % shapes.size()];
    const double P = b.total_length();
    const BoundaryArc ups{b, P * u(rng), P * (0.1 + 0.6 * u(rng))};
    const BoundaryArc gam = ups.complement();
    const Point x = gam.point(gam.length * u(rng));
    const ArcDistance r = distance_to_arc(x, ups);
    CHECK(std::abs(r.distance - brute_distance(x, ups, 100000)) < 1e-6);
    for (const Point& m : r.points) CHECK(dist(x, m) == doctest::Approx(r.distance).epsilon(1e-9));
  }
}

TEST_CASE("on the circle every minimizer is an endpoint of the free arc") {
  const ConvexBoundary c = ConvexBoundary::circle(1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const BoundaryArc ups{c, 2 * pi * u(rng), 2 * pi * (0.05 + 0.8 * u(rng))};
    const BoundaryArc gam = ups.complement();
    const ArcDistance r = distance_to_arc(gam.point(gam.length * u(rng)), ups);
    for (double s : r.sigmas) CHECK((s == 0.0 || s == ups.length));
  }
}

TEST_CASE("classification on the disk with a quarter free arc") {
  const ConvexBoundary c = ConvexBoundary::circle(1.0);
  const BoundaryArc ups = circle_arc(c, -pi / 4, pi / 4);
  const BoundaryArc gam = ups.complement();  // from a = e^{i pi/4} to b = e^{-i pi/4}
  const DistanceClassification dc = classify_distance_structure(gam, ups, 400);
  CHECK(dc.S.empty());
  REQUIRE(dc.D.size() == 1);
  CHECK(gam.global(dc.D[0].sigma) == doctest::Approx(pi).epsilon(1e-12));
  CHECK(dc.D[0].minimizers.size() == 2);
  CHECK(dc.D_open.empty());
  REQUIRE(dc.B_a.has_value());
  REQUIRE(dc.B_b.has_value());
  CHECK(gam.global(dc.s_a) == doctest::Approx(pi).epsilon(1e-8));
  CHECK(gam.global(dc.s_b) == doctest::Approx(pi).epsilon(1e-8));
}

TEST_CASE("classification on a half circle finds the midpoint of the datum arc") {
  const ConvexBoundary c = ConvexBoundary::circle(1.0);
  const BoundaryArc ups = circle_arc(c, pi, 2 * pi);
  const DistanceClassification dc = classify_distance_structure(ups.complement(), ups, 101);
  REQUIRE(dc.D.size() == 1);
  CHECK(ups.complement().global(dc.D[0].sigma) == doctest::Approx(pi / 2).epsilon(1e-12));
}

TEST_CASE("classification on the superellipse with a flat free arc") {
  const ConvexBoundary se = ConvexBoundary::superellipse(4.0);
  const double y0 = -std::pow(1.0 - std::pow(0.5, 4), 0.25);
  const BoundaryArc ups = BoundaryArc::between(se, {-0.5, y0}, {0.5, y0});
  const BoundaryArc gam = ups.complement();
  const DistanceClassification dc = classify_distance_structure(gam, ups, 256);
  REQUIRE_FALSE(dc.S.empty());
  // The top point has its perpendicular foot inside the free arc.
  const ArcDistance top = distance_to_arc({0.0, 1.0}, ups);
  REQUIRE(top.points.size() == 1);
  CHECK(dist(top.points[0], Point{0.0, -1.0}) < 1e-9);
  // Corollary: max B_a = inf S and min B_b = sup S.
  REQUIRE(dc.corollary_gap_a.has_value());
  CHECK(*dc.corollary_gap_a < 1e-6);
  CHECK(*dc.corollary_gap_b < 1e-6);
  // The switch points are located through a 1e-9 distance tolerance, which
  // moves them by O(sqrt(tol)) where the distance gap opens quadratically.
  CHECK(dc.s_a <= *dc.inf_S + 1e-6);
  CHECK(*dc.sup_S <= dc.s_b + 1e-6);
}

TEST_CASE("refining the sampling never merges distinct multiple-minimizer points") {
  const ConvexBoundary se = ConvexBoundary::superellipse(4.0, 1.4, 1.0);
  const BoundaryArc ups{se, se.total_length() * 0.55, se.total_length() * 0.35};
  const BoundaryArc gam = ups.complement();
  const DistanceClassification coarse = classify_distance_structure(gam, ups, 64);
  const DistanceClassification fine = classify_distance_structure(gam, ups, 256);
  CHECK(fine.D.size() >= coarse.D.size());
  for (const DistancePoint& d : coarse.D) {
    int matches = 0;
    for (const DistancePoint& e : fine.D)
      if (std::abs(e.sigma - d.sigma) < 1e-6) ++matches;
    CHECK(matches == 1);
  }
}

TEST_CASE("non complementary arcs are rejected") {
  const ConvexBoundary c = ConvexBoundary::circle(1.0);
  CHECK_THROWS_AS(classify_distance_structure(circle_arc(c, 0, 1), circle_arc(c, 2, 3), 32), ValidationError);
}

TEST_CASE("half plane regions") {
  const ConvexBoundary c = ConvexBoundary::circle(1.0);
  const ConvexRegion half(c, {HalfPlane{{0, 0}, {1, 0}}});
  CHECK(half.area() == doctest::Approx(pi / 2).epsilon(1e-12));
  const ConvexRegion tangent(c, {HalfPlane{{0, 1}, {1, 0}}});
  CHECK(tangent.area() == 0.0);
  const ConvexRegion empty(c, {HalfPlane{{0, 0.5}, {1, 0}}, HalfPlane{{0, -0.5}, {-1, 0}}});
  CHECK(empty.area() == 0.0);

  // Cap cut by the chord x = 0.5 on the right side.
  const ConvexRegion cap(c, {HalfPlane{{0.5, 0}, {0, -1}}});
  const double th = 2 * std::acos(0.5);
  CHECK(cap.area() == doctest::Approx(0.5 * (th - std::sin(th))).epsilon(1e-12));

  // Fat region of the quarter free arc: bounded by the chords from (-1, 0) to
  // e^{+-i pi/4} and the free arc. Monte Carlo membership as an oracle.
  const Point x0{-1, 0}, a = on_unit_circle(pi / 4), b = on_unit_circle(-pi / 4);
  const ConvexRegion fat(c, {HalfPlane::through(x0, a, {1, 0}), HalfPlane::through(x0, b, {1, 0})});
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 1000000;
  int hits = 0;
  for (int k = 0; k < n; ++k) {
    const Point p{u(rng), u(rng)};
    if (norm(p) <= 1.0 && fat.contains(p)) ++hits;
  }
  const double mc = 4.0 * hits / n;
  CHECK(fat.area() > 0.0);
  CHECK(std::abs(fat.area() - mc) < 5.0 * std::sqrt(mc * (4 - mc) / n));

  // Polygon area on a rectangle.
  const ConvexBoundary r = ConvexBoundary::rectangle(2.0, 1.0);
  const ConvexRegion tri(r, {HalfPlane::through({2, -1}, {-2, 1}, {2, 1})});
  CHECK(tri.area() == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("superellipse regions integrate the curved edges") {
  const ConvexBoundary se = ConvexBoundary::superellipse(4.0);
  const ConvexRegion half(se, {HalfPlane{{0, 0}, {0, -1}}});
  CHECK(half.area() == doctest::Approx(se.area() / 2).epsilon(1e-11));
  const ConvexRegion quarter(se, {HalfPlane{{0, 0}, {0, -1}}, HalfPlane{{0, 0}, {1, 0}}});
  CHECK(quarter.area() == doctest::Approx(se.area() / 4).epsilon(1e-11));
}

TEST_CASE("line intersections land on the boundary") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (const ConvexBoundary& b : {ConvexBoundary::circle(1.0), ConvexBoundary::superellipse(4.0),
                                  ConvexBoundary::rectangle(1.0, 0.8)}) {
    for (int k = 0; k < 100; ++k) {
      const Point p{u(rng), u(rng)};
      const Vec2 d{u(rng), u(rng)};
      const auto hits = b.line_intersections(p, d);
      if (!b.contains(p)) continue;
      REQUIRE(hits.size() == 2);
      for (const LineHit& h : hits) {
        CHECK(dist(b.point(h.s), p + d * h.lambda) < 1e-9 * b.diameter());
      }
      CHECK(b.contains(p + d * (0.5 * (hits[0].lambda + hits[1].lambda))));
    }
  }
}

TEST_CASE("hausdorff distance between segments") {
  const Segment s{{0, 0}, {1, 0}}, t{{0, 0.1}, {1, 0.1}};
  CHECK(hausdorff({s}, {t}) == doctest::Approx(0.1));
  CHECK(hausdorff({s}, {s}) == 0.0);
}
