#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lgp/error.hpp"
#include "lgp/swz_solver.hpp"
#include "lgp/tv_oracle.hpp"

using namespace lgp;
using std::numbers::pi;

namespace {

double linear(Point p) { return (p.x - p.y + 2.0) / 4.0; }

BoundaryFunction square_linear() {
  return datum::affine(BoundaryArc::full(ConvexBoundary::rectangle(1.0, 1.0)), 0.25, -0.25, 0.5);
}

}  // namespace

TEST_CASE("grid marks inside and Dirichlet nodes") {
  const auto g = make_grid(square_linear(), 16);
  CHECK(g->spacing == doctest::Approx(0.125));
  int inside = 0, dir = 0;
  for (size_t k = 0; k < g->size(); ++k) {
    inside += g->kind[k] == RasterGrid::Node::Inside;
    dir += g->kind[k] == RasterGrid::Node::Dirichlet;
  }
  CHECK(inside == 15 * 15);
  // Boundary nodes plus the padding ring, all within 1.5 spacings.
  CHECK(dir == 4 * 16 + 4 * 18);

  // Nodes next to the free arc stay inactive.
  const ConvexBoundary disk = ConvexBoundary::circle(1.0);
  const BoundaryArc ups{disk, disk.wrap(-pi / 4), pi / 2};
  const auto f = datum::angular_affine(ups.complement(), 0.0, 1.0);
  const auto gp = make_grid(f, 32);
  for (int j = 0; j < gp->ny; ++j)
    for (int i = 0; i < gp->nx; ++i) {
      const Point p = gp->node(i, j);
      if (gp->kind[gp->index(i, j)] == RasterGrid::Node::Dirichlet) CHECK(!(p.x > 0.8 && std::abs(p.y) < 0.5));
    }
}

TEST_CASE("affine fields are rasterized exactly and have exact TV") {
  const auto g = make_grid(square_linear(), 64);
  const ScalarField u = rasterize(linear, g);
  double worst = 0.0;
  for (int j = 0; j < g->ny; ++j)
    for (int i = 0; i < g->nx; ++i)
      if (g->kind[g->index(i, j)] == RasterGrid::Node::Inside) worst = std::max(worst, std::abs(u.values[g->index(i, j)] - linear(g->node(i, j))));
  CHECK(worst < 1e-14);
  CHECK(discrete_tv(u) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  const ScalarField c = rasterize([](Point) { return 3.0; },
                                  make_grid(datum::affine(BoundaryArc::full(ConvexBoundary::rectangle(1, 1)), 0, 0, 3), 32));
  CHECK(discrete_tv(c) == 0.0);
}

TEST_CASE("diagonal edge on grid nodes has its exact length") {
  // Forward differences across a 45 degree staircase of nodes give sqrt(2) h per
  // cell, so the isotropic sum reproduces the length up to the two end cells.
  const auto g = make_grid(square_linear(), 64);
  auto step = [](Point p) { return p.x + p.y > 1e-9 ? 1.0 : 0.0; };
  ScalarField v = rasterize(step, g);
  for (int j = 0; j < g->ny; ++j)
    for (int i = 0; i < g->nx; ++i)
      if (g->kind[g->index(i, j)] == RasterGrid::Node::Dirichlet) v.values[g->index(i, j)] = step(g->node(i, j));
  CHECK(std::abs(discrete_tv(v) - 2.0 * std::sqrt(2.0)) <= 2.0 * std::sqrt(2.0) * g->spacing + 1e-12);
}

TEST_CASE("oracle recovers the affine solution on the square") {
  for (int n : {64, 128}) {
    const TvResult r = minimize_tv_dirichlet(square_linear(), n);
    CHECK(r.converged);
    CHECK(r.energy == doctest::Approx(std::sqrt(2.0)).epsilon(0.01));
    const ScalarField exact = rasterize(linear, r.field.grid);
    const CompareMetrics m = compare(r.field, exact);
    CHECK(m.linf <= 2.0 * r.field.grid->spacing * 1.0);
  }
}

TEST_CASE("constant data give a constant field") {
  const auto f = datum::affine(BoundaryArc::full(ConvexBoundary::circle(1.0)), 0, 0, 0.7);
  const TvResult r = minimize_tv_dirichlet(f, 32);
  CHECK(r.energy < 1e-12);
  for (size_t k = 0; k < r.field.grid->size(); ++k)
    if (r.field.grid->active(k)) CHECK(r.field.values[k] == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("three valued datum: maximum principle, energy and level boundaries") {
  const ConvexBoundary disk = ConvexBoundary::circle(1.0);
  const auto f = datum::piecewise_constant(disk, 0.0, pi / 2, pi, 1.0, 1.0);
  const TvResult r = minimize_tv_dirichlet(f, 64);
  const RasterGrid& g = *r.field.grid;
  for (size_t k = 0; k < g.size(); ++k)
    if (g.kind[k] == RasterGrid::Node::Inside) {
      CHECK(r.field.values[k] >= -1e-9);
      CHECK(r.field.values[k] <= 2.0 + 1e-9);
    }
  CHECK(r.energy == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(0.02));

  const LevelFamily fam = solve_piecewise_constant(disk, 0.0, pi / 2, pi, 1.0, 1.0);
  const ScalarField geo = rasterize([&](Point p) { return evaluate(fam, p); }, r.field.grid);
  // The geometric solution is feasible for the discrete problem.
  CHECK(r.energy <= discrete_tv(geo) + 1e-6);
  const Segment c01{{1, 0}, {0, 1}}, c12{{0, 1}, {-1, 0}};
  for (auto [t, chord] : {std::pair{0.5, c01}, std::pair{1.5, c12}}) {
    const auto pts = level_boundary(r.field, t);
    REQUIRE(!pts.empty());
    double worst = 0.0;
    for (const Point& p : pts) worst = std::max(worst, distance_to_segment(p, chord));
    CHECK(worst <= 2.0 * g.spacing);
  }
}

TEST_CASE("compare reports zeros and shifts") {
  const auto g = make_grid(square_linear(), 32);
  const ScalarField a = rasterize(linear, g);
  const CompareMetrics same = compare(a, a, {0.5});
  CHECK(same.l1 == 0.0);
  CHECK(same.linf == 0.0);
  CHECK(same.energy_gap == 0.0);
  CHECK(same.levels.at(0).distance == 0.0);
  const ScalarField b = rasterize([](Point p) { return linear(p) + 0.1; }, g);
  const CompareMetrics m = compare(a, b);
  CHECK(m.linf == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(m.l1 == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS_AS(compare(a, rasterize(linear, make_grid(square_linear(), 16))), Error);
}
