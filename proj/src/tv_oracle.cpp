#include "lgp/tv_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lgp/error.hpp"

namespace lgp {

namespace {

using Node = RasterGrid::Node;

struct CellStencil {
  int k, kr, ku;
};

std::vector<CellStencil> active_cells(const RasterGrid& g) {
  std::vector<CellStencil> out;
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i)
      if (g.cell_active(i, j)) out.push_back({g.index(i, j), g.index(i + 1, j), g.index(i, j + 1)});
  return out;
}

double energy_of(const std::vector<CellStencil>& cells, const std::vector<double>& u, double h) {
  double e = 0.0;
  for (const CellStencil& c : cells) e += std::hypot(u[c.kr] - u[c.k], u[c.ku] - u[c.k]);
  return e * h;
}

// Bilinear sample of a field at p using only active nodes of its grid.
double sample(const ScalarField& f, Point p, double fallback) {
  const RasterGrid& g = *f.grid;
  const double fx = (p.x - g.origin.x) / g.spacing, fy = (p.y - g.origin.y) / g.spacing;
  const int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.nx - 2);
  const int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g.ny - 2);
  const double ax = std::clamp(fx - i, 0.0, 1.0), ay = std::clamp(fy - j, 0.0, 1.0);
  const double w[4] = {(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay, ax * ay};
  const int k[4] = {g.index(i, j), g.index(i + 1, j), g.index(i, j + 1), g.index(i + 1, j + 1)};
  double s = 0.0, ws = 0.0;
  for (int m = 0; m < 4; ++m)
    if (g.active(k[m])) {
      s += w[m] * f.values[k[m]];
      ws += w[m];
    }
  if (ws > 0.0) return s / ws;
  for (int m = 0; m < 4; ++m)
    if (g.active(k[m])) return f.values[k[m]];
  return fallback;
}

}  // namespace

bool RasterGrid::cell_active(int i, int j) const {
  if (i + 1 >= nx || j + 1 >= ny) return false;
  const int a = index(i, j), b = index(i + 1, j), c = index(i, j + 1);
  if (!active(a) || !active(b) || !active(c)) return false;
  if (kind[a] == Node::Inside || kind[b] == Node::Inside || kind[c] == Node::Inside) return true;
  const Point centre = node(i, j) + Vec2{0.5 * spacing, 0.5 * spacing};
  return domain.contains(centre);
}

std::shared_ptr<const RasterGrid> make_grid(const BoundaryFunction& f, int n) {
  if (n < 2) throw Error("raster needs at least two cells per side");
  auto g = std::make_shared<RasterGrid>();
  const BoundaryArc& arc = f.arc();
  const ConvexBoundary& dom = arc.boundary;
  g->domain = dom;
  const BoundingBox box = dom.bbox();
  const double w = box.hi.x - box.lo.x, hh = box.hi.y - box.lo.y;
  g->spacing = std::max(w, hh) / n;
  g->origin = {box.lo.x - g->spacing, box.lo.y - g->spacing};
  g->nx = static_cast<int>(std::ceil(w / g->spacing - 1e-9)) + 3;
  g->ny = static_cast<int>(std::ceil(hh / g->spacing - 1e-9)) + 3;
  g->kind.assign(static_cast<size_t>(g->nx) * g->ny, Node::Outside);
  g->boundary_value.assign(g->kind.size(), 0.0);
  const double tol = 1e-12 * dom.diameter();
  std::vector<double> sd(g->kind.size());
  for (int j = 0; j < g->ny; ++j)
    for (int i = 0; i < g->nx; ++i) {
      const int k = g->index(i, j);
      sd[k] = dom.signed_distance(g->node(i, j));
      if (sd[k] < -tol) g->kind[k] = Node::Inside;
    }
  const double arc_tol = 1e-9 * dom.total_length();
  for (int j = 0; j < g->ny; ++j)
    for (int i = 0; i < g->nx; ++i) {
      const int k = g->index(i, j);
      if (g->kind[k] == Node::Inside) continue;
      // Every node of a cell touching an inside node lies within sqrt(2) h.
      if (sd[k] > 1.5 * g->spacing) continue;
      const double s = dom.project(g->node(i, j));
      if (!arc.is_full() && !arc.contains(s, arc_tol)) continue;
      g->kind[k] = Node::Dirichlet;
      g->boundary_value[k] = f(std::min(arc.local(s), arc.length));
    }
  return g;
}

ScalarField rasterize(const std::function<double(Point)>& u, std::shared_ptr<const RasterGrid> grid) {
  ScalarField out{grid, std::vector<double>(grid->size(), 0.0)};
  for (int j = 0; j < grid->ny; ++j)
    for (int i = 0; i < grid->nx; ++i) {
      const int k = grid->index(i, j);
      if (grid->kind[k] == Node::Inside) out.values[k] = u(grid->node(i, j));
      if (grid->kind[k] == Node::Dirichlet) out.values[k] = grid->boundary_value[k];
    }
  return out;
}

double discrete_tv(const ScalarField& u) {
  return energy_of(active_cells(*u.grid), u.values, u.grid->spacing);
}

TvResult minimize_tv_dirichlet(const BoundaryFunction& f, int n, const TvParams& params) {
  const auto grid = make_grid(f, n);
  const RasterGrid& g = *grid;
  const auto cells = active_cells(g);

  // Initial guess: a coarse solve when available, else the mean datum.
  double mean = 0.0;
  int nd = 0;
  for (size_t k = 0; k < g.size(); ++k)
    if (g.kind[k] == Node::Dirichlet) {
      mean += g.boundary_value[k];
      ++nd;
    }
  mean = nd ? mean / nd : 0.0;
  std::vector<double> u(g.size(), 0.0);
  std::optional<ScalarField> coarse;
  if (params.multilevel && n / 2 >= params.coarsest) coarse = minimize_tv_dirichlet(f, n / 2, params).field;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.index(i, j);
      if (g.kind[k] == Node::Dirichlet) u[k] = g.boundary_value[k];
      if (g.kind[k] == Node::Inside) u[k] = coarse ? sample(*coarse, g.node(i, j), mean) : mean;
    }

  std::vector<double> tau(g.size(), 0.0);
  for (const CellStencil& c : cells) {
    tau[c.k] += 2.0;
    tau[c.kr] += 1.0;
    tau[c.ku] += 1.0;
  }
  for (double& t : tau) t = t > 0.0 ? 1.0 / t : 0.0;
  const double sigma = 0.5;

  std::vector<Vec2> p(cells.size());
  std::vector<double> ubar = u, div(g.size(), 0.0);
  TvResult res;
  double last = energy_of(cells, u, g.spacing);
  int it = 0;
  for (; it < params.max_iterations; ++it) {
    for (size_t c = 0; c < cells.size(); ++c) {
      const CellStencil& s = cells[c];
      Vec2 q = p[c] + Vec2{ubar[s.kr] - ubar[s.k], ubar[s.ku] - ubar[s.k]} * sigma;
      const double nq = norm(q);
      if (nq > 1.0) q = q / nq;
      p[c] = q;
    }
    std::fill(div.begin(), div.end(), 0.0);
    for (size_t c = 0; c < cells.size(); ++c) {
      const CellStencil& s = cells[c];
      div[s.k] -= p[c].x + p[c].y;
      div[s.kr] += p[c].x;
      div[s.ku] += p[c].y;
    }
    for (size_t k = 0; k < g.size(); ++k) {
      if (g.kind[k] != Node::Inside) continue;
      const double un = u[k] - tau[k] * div[k];
      ubar[k] = 2.0 * un - u[k];
      u[k] = un;
    }
    if ((it + 1) % params.window == 0) {
      const double e = energy_of(cells, u, g.spacing);
      res.history.push_back(e);
      if (it + 1 >= params.min_iterations && std::abs(last - e) <= params.tolerance * std::max(e, 1e-300)) {
        res.converged = true;
        ++it;
        break;
      }
      last = e;
    }
  }
  res.field = {grid, u};
  res.energy = energy_of(cells, u, g.spacing);
  res.iterations = it;
  return res;
}

std::vector<Point> level_boundary(const ScalarField& u, double t) {
  const RasterGrid& g = *u.grid;
  std::vector<Point> out;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.index(i, j);
      if (g.kind[k] != Node::Inside) continue;
      for (auto [a, b] : {std::pair{i + 1, j}, std::pair{i, j + 1}}) {
        if (a >= g.nx || b >= g.ny) continue;
        const int m = g.index(a, b);
        if (g.kind[m] != Node::Inside) continue;
        const double v0 = u.values[k], v1 = u.values[m];
        if ((v0 >= t) == (v1 >= t)) continue;
        const double lam = std::clamp((v0 - t) / (v0 - v1), 0.0, 1.0);
        out.push_back(g.node(i, j) + (g.node(a, b) - g.node(i, j)) * lam);
      }
    }
  return out;
}

double point_hausdorff(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  auto directed = [](const std::vector<Point>& x, const std::vector<Point>& y) {
    double worst = 0.0;
    for (const Point& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point& q : y) best = std::min(best, dist(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

CompareMetrics compare(const ScalarField& a, const ScalarField& b, const std::vector<double>& levels) {
  const RasterGrid& ga = *a.grid;
  const RasterGrid& gb = *b.grid;
  if (ga.nx != gb.nx || ga.ny != gb.ny || ga.spacing != gb.spacing || ga.kind != gb.kind)
    throw Error("fields live on different grids");
  CompareMetrics m;
  int n = 0;
  for (size_t k = 0; k < ga.size(); ++k) {
    if (ga.kind[k] != Node::Inside) continue;
    const double d = std::abs(a.values[k] - b.values[k]);
    m.l1 += d;
    m.linf = std::max(m.linf, d);
    ++n;
  }
  if (n) m.l1 /= n;
  m.energy_gap = std::abs(discrete_tv(a) - discrete_tv(b));
  for (double t : levels) m.levels.push_back({t, point_hausdorff(level_boundary(a, t), level_boundary(b, t))});
  return m;
}

}  // namespace lgp
