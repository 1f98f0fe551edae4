#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "lgp/boundary_data.hpp"
#include "lgp/geometry.hpp"

namespace lgp {

/// Node raster over the bounding box of a domain, padded by one node.
/// Inside nodes are unknowns; Dirichlet nodes lie within 1.5 spacings outside
/// the datum arc and carry the datum at their nearest boundary point; the rest
/// (including nodes next to the free arc) are inactive.
struct RasterGrid {
  enum class Node : std::uint8_t { Outside, Inside, Dirichlet };

  ConvexBoundary domain = ConvexBoundary::circle(1.0);
  Point origin;
  double spacing = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<Node> kind;
  std::vector<double> boundary_value;  // datum at Dirichlet nodes, 0 elsewhere

  int index(int i, int j) const { return j * nx + i; }
  Point node(int i, int j) const { return {origin.x + i * spacing, origin.y + j * spacing}; }
  bool active(int k) const { return kind[k] != Node::Outside; }
  /// Cell with lower left node (i, j) enters the energy when that node and its
  /// right and upper neighbours are active and the cell touches the domain
  /// (an inside node or its centre in the domain).
  bool cell_active(int i, int j) const;
  std::size_t size() const { return kind.size(); }
};

/// `n` cells along the longer side of the bounding box. Without an arc the
/// whole boundary carries the datum.
std::shared_ptr<const RasterGrid> make_grid(const BoundaryFunction& f, int n);

struct ScalarField {
  std::shared_ptr<const RasterGrid> grid;
  std::vector<double> values;  // per node; meaningful on active nodes
};

/// Samples an evaluator at inside nodes; Dirichlet nodes keep the datum.
ScalarField rasterize(const std::function<double(Point)>& u, std::shared_ptr<const RasterGrid> grid);

/// Sum over active cells of spacing * |forward difference|.
double discrete_tv(const ScalarField& u);

struct TvParams {
  int max_iterations = 50000;
  double tolerance = 1e-8;  // relative energy change per check window
  int window = 200;
  int min_iterations = 2000;
  bool multilevel = true;   // warm start from a grid of half resolution
  int coarsest = 32;
};

struct TvResult {
  ScalarField field;
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // energy at the end of every window
};

/// Minimizes the discrete TV with the Dirichlet nodes held fixed
/// (diagonally preconditioned primal dual iteration), stopping when the
/// energy changes by less than the tolerance over one window.
TvResult minimize_tv_dirichlet(const BoundaryFunction& f, int n, const TvParams& params = {});

struct LevelHausdorff {
  double t = 0.0;
  double distance = 0.0;
};

struct CompareMetrics {
  double l1 = 0.0;    // mean absolute difference over inside nodes
  double linf = 0.0;
  double energy_gap = 0.0;
  std::vector<LevelHausdorff> levels;
};

/// Points where {u >= t} changes between neighbouring inside nodes,
/// linearly interpolated along the grid edge.
std::vector<Point> level_boundary(const ScalarField& u, double t);

CompareMetrics compare(const ScalarField& a, const ScalarField& b, const std::vector<double>& levels = {});

/// Hausdorff distance between finite point sets (infinite if one is empty).
double point_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b);

}  // namespace lgp
