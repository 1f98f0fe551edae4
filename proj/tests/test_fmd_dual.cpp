#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "lgp/error.hpp"
#include "lgp/fmd_dual.hpp"
#include "test_functions.hpp"

using namespace lgp;
using lgp::testing::as_test_function;
using lgp::testing::random_poly;
using std::numbers::pi;

namespace {

BoundaryArc circle_arc(const ConvexBoundary& c, double th0, double th1) { return {c, c.wrap(th0), th1 - th0}; }

double identity_gap(const ChordFlux& q, const TraceMeasure& g, const TestFunction& phi) {
  return std::abs(pair_flux_gradient(q, phi) - pair(g, phi.value)) / (1.0 + phi.lipschitz);
}

}  // namespace

TEST_CASE("three valued datum: two weighted chords balance the atoms") {
  const ConvexBoundary disk = ConvexBoundary::circle(1.0);
  const LevelFamily fam = solve_piecewise_constant(disk, 0.0, pi / 2, pi, 1.0, 1.0);
  const ChordFlux q = du_to_flux(fam);
  CHECK(q.mass == coarea_tv(fam).value);
  CHECK(q.mass == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
  const TestFunction one{[](Point) { return 1.0; }, [](Point) { return Vec2{}; }, 0.0};
  CHECK(pair_flux_gradient(q, one) == 0.0);

  const TraceMeasure g = tangential_derivative(*fam.datum);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) CHECK(identity_gap(q, g, as_test_function(random_poly(rng), disk)) <= 1e-8);
}

TEST_CASE("linear rectangle datum: flux pairing equals the boundary integral") {
  const ConvexBoundary r = ConvexBoundary::rectangle(1.0, 1.0);
  const auto f = datum::affine(BoundaryArc::full(r), 0.25, -0.25, 0.5);
  const LevelFamily fam = solve_chord_family(f);
  const ChordFlux q = du_to_flux(fam);
  CHECK(q.mass == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

  // phi = xy against -int f dphi/dtau over the four sides.
  const TestFunction xy{[](Point p) { return p.x * p.y; }, [](Point p) { return Vec2{p.y, p.x}; }, std::sqrt(2.0)};
  double by_parts = 0.0;
  for (int side = 0; side < 4; ++side) {
    const double s0 = 2.0 * side;
    by_parts -= boost::math::quadrature::gauss<double, 10>::integrate(
        [&](double s) {
          const Point p = r.point(s0 + s);
          return f(f.arc().local(s0 + s)) * dot(xy.gradient(p), r.tangent(s0 + s));
        },
        0.0, 2.0);
  }
  CHECK(pair_flux_gradient(q, xy) == doctest::Approx(by_parts).epsilon(1e-9));

  const TraceMeasure g = tangential_derivative(f);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) CHECK(identity_gap(q, g, as_test_function(random_poly(rng), r)) <= 1e-6);
}

TEST_CASE("partial boundary data: identity with the extended trace") {
  const ConvexBoundary disk = ConvexBoundary::circle(1.0);
  const BoundaryArc ups1 = circle_arc(disk, -pi / 4, pi / 4);
  const auto f1 = datum::angular_affine(ups1.complement(), -1.0 / 6.0, 2.0 / (3.0 * pi));
  const LevelFamily d1 = solve_case2(f1);
  const BoundaryArc gam2 = circle_arc(disk, -pi / 4, 5 * pi / 4);
  const LevelFamily d2 = solve_case1(datum::angular_tent(gam2, pi / 2, 3 * pi / 4));

  for (const LevelFamily* fam : {&d1, &d2}) {
    const BoundaryFunction ext = extended_trace(*fam);
    REQUIRE(ext.arc().is_full());
    // The free arc sits in a fat region, so the trace there is its value.
    const BoundaryArc ups = fam->gamma->complement();
    const double fat_value = fam->fat.front().value;
    for (double s : {0.2, 0.5, 0.8}) CHECK(ext(fam->gamma->length + s * ups.length) == doctest::Approx(fat_value));

    const ChordFlux q = du_to_flux(*fam);
    const TraceMeasure g = tangential_derivative(ext);
    const TraceMeasure g_gamma = tangential_derivative(*fam->datum);
    std::mt19937_64 rng(11);
    for (int k = 0; k < 20; ++k) CHECK(identity_gap(q, g, as_test_function(random_poly(rng), disk)) <= 1e-6);
    for (int k = 0; k < 10; ++k) {
      const TestFunction phi = vanish_off_arc(as_test_function(random_poly(rng), disk), *fam->gamma);
      CHECK(std::abs(phi.value(ups.point(0.3 * ups.length))) < 1e-15);
      CHECK(identity_gap(q, g_gamma, phi) <= 1e-6);
    }
  }
}

TEST_CASE("grid flux of u = x on the disk") {
  const ConvexBoundary disk = ConvexBoundary::circle(1.0);
  const auto f = datum::affine(BoundaryArc::full(disk, pi), 1.0, 0.0, 0.0);
  const auto grid = make_grid(f, 128);
  const GridFlux q = sample_flux([](Point) { return rotate_minus_90(Vec2{1.0, 0.0}); }, grid);
  CHECK(q.values[grid->index(64, 64)].y == -1.0);
  CHECK(q.mass() == doctest::Approx(pi).epsilon(0.01));
  CHECK(divergence_residual(q, 0.3).residual < 1e-3);

  const double radius = 0.3;
  const GridFlux src = sample_flux([](Point p) { return p; }, grid);
  const double expected = 2.0 * radius * radius * (pi / 2 - 2 / pi);
  CHECK(divergence_residual(src, radius).residual == doctest::Approx(expected).epsilon(0.02));

  // Chord flux of the synthetic family, rasterized.
  const GridFlux rq = rasterize_flux(du_to_flux(solve_chord_family(f)), grid);
  CHECK(rq.mass() == doctest::Approx(pi).epsilon(1e-3));
}

TEST_CASE("rasterized flux of the case 1 family is weakly divergence free") {
  const ConvexBoundary disk = ConvexBoundary::circle(1.0);
  const BoundaryArc gam = circle_arc(disk, -pi / 4, 5 * pi / 4);
  const LevelFamily fam = solve_case1(datum::angular_tent(gam, pi / 2, 3 * pi / 4), {.t_samples = 1001});
  const ChordFlux q = du_to_flux(fam);
  std::vector<double> res;
  for (int n : {64, 128, 256}) {
    const GridFlux g = rasterize_flux(q, make_grid(*fam.datum, n));
    // Averaging over cells can only cancel, and clipped boundary cells lose a little.
    CHECK(g.mass() <= q.mass + 1e-12);
    CHECK(g.mass() == doctest::Approx(q.mass).epsilon(2.0 / n));
    res.push_back(divergence_residual(g, 0.25, 32).residual);
  }
  CHECK(res[1] < res[0]);
  CHECK(res[2] < res[1]);
  CHECK(res[2] < 4.0 * (2.0 / 256) * q.mass);
}

TEST_CASE("potential reconstruction") {
  const ConvexBoundary disk = ConvexBoundary::circle(1.0);
  const auto f = datum::affine(BoundaryArc::full(disk), 1.0, 0.0, 0.0);
  const auto grid = make_grid(f, 64);
  const Point x0{0.1, -0.2};
  const GridFlux p = sample_flux([](Point) { return Vec2{0.0, -1.0}; }, grid);
  const ScalarField u = reconstruct_potential(p, x0);
  double worst = 0.0;
  for (int j = 0; j < grid->ny; ++j)
    for (int i = 0; i < grid->nx; ++i)
      if (grid->kind[grid->index(i, j)] == RasterGrid::Node::Inside)
        worst = std::max(worst, std::abs(u.values[grid->index(i, j)] - (grid->node(i, j).x - x0.x)));
  CHECK(worst < 1e-12);
  CHECK(path_independence(p).worst < 1e-12);

  // Round trip on a smooth divergence free field p = R_{-pi/2} grad(x^2 - y^2).
  auto field = [](Point x) { return rotate_minus_90(Vec2{2 * x.x, -2 * x.y}); };
  std::vector<double> err;
  for (int n : {32, 64, 128}) {
    const auto g = make_grid(f, n);
    const GridFlux pf = sample_flux(field, g);
    const GridFlux back = flux_from_potential(reconstruct_potential(pf, {0, 0}));
    double l1 = 0.0;
    for (size_t c = 0; c < back.values.size(); ++c)
      if (back.mask[c]) l1 += norm(back.values[c] - pf.values[c]) * g->spacing * g->spacing;
    err.push_back(l1);
    CHECK(l1 <= 3.0 * g->spacing * pf.mass());
    CHECK(path_independence(pf).worst <= 10.0 * g->spacing);
  }
  CHECK(err[2] < err[1]);
  CHECK(err[1] < err[0]);

  // A source field is not closed: loop integrals see twice the enclosed area.
  const GridFlux src = sample_flux([](Point x) { return x; }, make_grid(f, 128));
  const Point a{-0.4, -0.3}, b{0.5, -0.2}, c{0.0, 0.5};
  const double area = 0.5 * std::abs(cross(b - a, c - a));
  CHECK(std::abs(loop_integral(src, {a, b, c})) == doctest::Approx(2.0 * area).epsilon(0.02));
  CHECK(path_independence(src).worst > 0.1);
}
