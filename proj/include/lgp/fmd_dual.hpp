#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "lgp/boundary_data.hpp"
#include "lgp/swz_solver.hpp"
#include "lgp/tv_oracle.hpp"

namespace lgp {

/// Smooth test function with its gradient.
struct TestFunction {
  std::function<double(Point)> value;
  std::function<Vec2(Point)> gradient;
  double lipschitz = 0.0;  // bound on |gradient| over the domain
};

/// Polynomial of total degree at most `degree`, coefficients uniform in
/// [-1, 1]; the Lipschitz bound is sampled on a 65 x 65 grid over the domain.
TestFunction random_polynomial(std::mt19937_64& rng, const ConvexBoundary& domain, int degree = 4);

/// Flux supported on level segments: q = R_{-pi/2} Du is the unit segment
/// direction times the level spacing, with the superlevel side on the left.
struct ChordFlux {
  struct Piece {
    Segment segment;
    double weight = 0.0;
  };
  std::vector<Piece> pieces;
  /// Sum of weight * length, summed line by line as in coarea_tv.
  double mass = 0.0;
};

ChordFlux du_to_flux(const LevelFamily& family);

/// Integral of grad(phi) . dq, exact per segment.
double pair_flux_gradient(const ChordFlux& q, const TestFunction& phi);

/// Vector field on the cells of a raster; cell (i, j) spans the nodes
/// (i, j) to (i + 1, j + 1).
struct GridFlux {
  std::shared_ptr<const RasterGrid> grid;
  std::vector<Vec2> values;       // per cell, index j * nx + i
  std::vector<std::uint8_t> mask;  // cell centre inside the domain

  double mass() const;
  Point cell_centre(int i, int j) const;
  /// Value of the cell containing p (zero outside the mask).
  Vec2 at(Point p) const;
};

/// Cell averages of a chord flux (exact segment clipping).
GridFlux rasterize_flux(const ChordFlux& q, std::shared_ptr<const RasterGrid> grid);
/// Samples a field at cell centres.
GridFlux sample_flux(const std::function<Vec2(Point)>& field, std::shared_ptr<const RasterGrid> grid);
/// R_{-pi/2} of the forward difference gradient of a node field.
GridFlux flux_from_potential(const ScalarField& u);

/// Midpoint quadrature of grad(phi) . q over the masked cells.
double pair_flux_gradient(const GridFlux& q, const TestFunction& phi);

struct DivergenceReport {
  double residual = 0.0;  // max over bumps of |int q . grad(psi)|, sup psi = 1
  int bumps = 0;
};

/// Weak divergence against cosine bumps of the given radius whose supports lie
/// inside the domain.
DivergenceReport divergence_residual(const GridFlux& q, double radius, int bumps = 64, unsigned seed = 1);

/// u(x) = integral of p1 dx2 - p2 dx1 along [x0, x], at the inside nodes.
ScalarField reconstruct_potential(const GridFlux& p, Point x0);

/// Integral of p1 dx2 - p2 dx1 around the closed polygon.
double loop_integral(const GridFlux& p, const std::vector<Point>& polygon);

struct PathIndependence {
  double worst = 0.0;
  int loops = 0;
};

/// Loop integrals over random triangles inside the domain.
PathIndependence path_independence(const GridFlux& p, int loops = 100, unsigned seed = 1);

/// Datum on the datum arc extended by the boundary values of the solution on
/// the free arc, on the whole boundary starting at the datum arc.
BoundaryFunction extended_trace(const LevelFamily& family);

/// phi vanishing on the free arc: phi = p * (l^+)^2 with l the affine function
/// positive on the datum side of the line through the arc ends.
TestFunction vanish_off_arc(const TestFunction& p, const BoundaryArc& gamma);

}  // namespace lgp
