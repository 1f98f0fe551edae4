#include "lgp/fmd_dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "lgp/error.hpp"

namespace lgp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int cell_count(const RasterGrid& g) { return g.nx * g.ny; }

// Midpoint rule for the form p1 dx2 - p2 dx1 along [a, b] with steps below h / 4.
double form_integral(const GridFlux& p, Point a, Point b) {
  const double len = dist(a, b);
  if (len == 0.0) return 0.0;
  const int n = std::max(1, static_cast<int>(std::ceil(len / (0.25 * p.grid->spacing))));
  const Vec2 d = (b - a) / n;
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const Vec2 v = p.at(a + d * (k + 0.5));
    s += v.x * d.y - v.y * d.x;
  }
  return s;
}

}  // namespace

TestFunction random_polynomial(std::mt19937_64& rng, const ConvexBoundary& domain, int degree) {
  struct Term {
    int i, j;
    double c;
  };
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<Term> terms;
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; i + j <= degree; ++j) terms.push_back({i, j, coef(rng)});
  auto value = [terms](Point p) {
    double v = 0.0;
    for (const Term& t : terms) v += t.c * std::pow(p.x, t.i) * std::pow(p.y, t.j);
    return v;
  };
  auto gradient = [terms](Point p) {
    Vec2 g;
    for (const Term& t : terms) {
      if (t.i > 0) g.x += t.c * t.i * std::pow(p.x, t.i - 1) * std::pow(p.y, t.j);
      if (t.j > 0) g.y += t.c * t.j * std::pow(p.x, t.i) * std::pow(p.y, t.j - 1);
    }
    return g;
  };
  TestFunction out{value, gradient, 0.0};
  const BoundingBox box = domain.bbox();
  for (int j = 0; j <= 64; ++j)
    for (int i = 0; i <= 64; ++i) {
      const Point x{box.lo.x + (box.hi.x - box.lo.x) * i / 64.0, box.lo.y + (box.hi.y - box.lo.y) * j / 64.0};
      if (domain.contains(x)) out.lipschitz = std::max(out.lipschitz, norm(gradient(x)));
    }
  return out;
}

ChordFlux du_to_flux(const LevelFamily& family) {
  if (family.t_grid.size() < 2 || !family.builder) throw Error("level family is not built");
  ChordFlux out;
  for (WeightedLine& wl : slab_lines(family)) {
    out.mass += wl.weight * wl.line.total_length();
    for (const Segment& s : wl.line.segments) out.pieces.push_back({s, wl.weight});
  }
  return out;
}

double pair_flux_gradient(const ChordFlux& q, const TestFunction& phi) {
  double s = 0.0;
  for (const ChordFlux::Piece& p : q.pieces) s += p.weight * (phi.value(p.segment.q) - phi.value(p.segment.p));
  return s;
}

double GridFlux::mass() const {
  const double a = grid->spacing * grid->spacing;
  double m = 0.0;
  for (size_t c = 0; c < values.size(); ++c)
    if (mask[c]) m += norm(values[c]) * a;
  return m;
}

Point GridFlux::cell_centre(int i, int j) const {
  return grid->node(i, j) + Vec2{0.5 * grid->spacing, 0.5 * grid->spacing};
}

Vec2 GridFlux::at(Point p) const {
  const RasterGrid& g = *grid;
  const int i = static_cast<int>(std::floor((p.x - g.origin.x) / g.spacing));
  const int j = static_cast<int>(std::floor((p.y - g.origin.y) / g.spacing));
  if (i < 0 || j < 0 || i >= g.nx || j >= g.ny) return {};
  const int c = g.index(i, j);
  return mask[c] ? values[c] : Vec2{};
}

GridFlux rasterize_flux(const ChordFlux& q, std::shared_ptr<const RasterGrid> grid) {
  const RasterGrid& g = *grid;
  GridFlux out{grid, std::vector<Vec2>(cell_count(g)), std::vector<std::uint8_t>(cell_count(g), 0)};
  const double h = g.spacing, area = h * h;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out.mask[g.index(i, j)] = g.domain.contains(out.cell_centre(i, j));
  for (const ChordFlux::Piece& piece : q.pieces) {
    const Segment& s = piece.segment;
    const double len = s.length();
    if (len == 0.0) continue;
    const Vec2 d = (s.q - s.p) / len;
    // Parameters where the segment crosses grid lines.
    std::vector<double> lam = {0.0, 1.0};
    for (int axis = 0; axis < 2; ++axis) {
      const double a0 = axis == 0 ? s.p.x : s.p.y, a1 = axis == 0 ? s.q.x : s.q.y;
      const double o = axis == 0 ? g.origin.x : g.origin.y;
      if (a0 == a1) continue;
      const double lo = std::min(a0, a1), hi = std::max(a0, a1);
      for (int k = static_cast<int>(std::ceil((lo - o) / h)); o + k * h <= hi; ++k) lam.push_back((o + k * h - a0) / (a1 - a0));
    }
    std::sort(lam.begin(), lam.end());
    for (size_t k = 0; k + 1 < lam.size(); ++k) {
      const double l0 = std::clamp(lam[k], 0.0, 1.0), l1 = std::clamp(lam[k + 1], 0.0, 1.0);
      if (l1 <= l0) continue;
      const Point m = s.at(0.5 * (l0 + l1));
      const int i = static_cast<int>(std::floor((m.x - g.origin.x) / h));
      const int jj = static_cast<int>(std::floor((m.y - g.origin.y) / h));
      if (i < 0 || jj < 0 || i >= g.nx || jj >= g.ny) continue;
      const int c = g.index(i, jj);
      out.values[c] += d * (piece.weight * (l1 - l0) * len / area);
      out.mask[c] = 1;
    }
  }
  return out;
}

GridFlux sample_flux(const std::function<Vec2(Point)>& field, std::shared_ptr<const RasterGrid> grid) {
  const RasterGrid& g = *grid;
  GridFlux out{grid, std::vector<Vec2>(cell_count(g)), std::vector<std::uint8_t>(cell_count(g), 0)};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const Point c = out.cell_centre(i, j);
      if (!g.domain.contains(c)) continue;
      out.values[g.index(i, j)] = field(c);
      out.mask[g.index(i, j)] = 1;
    }
  return out;
}

GridFlux flux_from_potential(const ScalarField& u) {
  const RasterGrid& g = *u.grid;
  GridFlux out{u.grid, std::vector<Vec2>(cell_count(g)), std::vector<std::uint8_t>(cell_count(g), 0)};
  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      if (!g.cell_active(i, j)) continue;
      const double u0 = u.values[g.index(i, j)], ux = u.values[g.index(i + 1, j)], uy = u.values[g.index(i, j + 1)];
      if (!std::isfinite(u0) || !std::isfinite(ux) || !std::isfinite(uy)) continue;
      const Vec2 grad{(ux - u0) / g.spacing, (uy - u0) / g.spacing};
      out.values[g.index(i, j)] = rotate_minus_90(grad);
      out.mask[g.index(i, j)] = 1;
    }
  return out;
}

double pair_flux_gradient(const GridFlux& q, const TestFunction& phi) {
  const RasterGrid& g = *q.grid;
  const double area = g.spacing * g.spacing;
  double s = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.index(i, j);
      if (q.mask[c]) s += dot(phi.gradient(q.cell_centre(i, j)), q.values[c]) * area;
    }
  return s;
}

DivergenceReport divergence_residual(const GridFlux& q, double radius, int bumps, unsigned seed) {
  const RasterGrid& g = *q.grid;
  const BoundingBox box = g.domain.bbox();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.lo.x, box.hi.x), uy(box.lo.y, box.hi.y);
  DivergenceReport rep;
  const double area = g.spacing * g.spacing;
  for (int tries = 0; rep.bumps < bumps && tries < 1000 * bumps; ++tries) {
    const Point c{ux(rng), uy(rng)};
    if (g.domain.signed_distance(c) > -radius) continue;
    ++rep.bumps;
    const int i0 = std::max(0, static_cast<int>(std::floor((c.x - radius - g.origin.x) / g.spacing)));
    const int i1 = std::min(g.nx - 1, static_cast<int>(std::ceil((c.x + radius - g.origin.x) / g.spacing)));
    const int j0 = std::max(0, static_cast<int>(std::floor((c.y - radius - g.origin.y) / g.spacing)));
    const int j1 = std::min(g.ny - 1, static_cast<int>(std::ceil((c.y + radius - g.origin.y) / g.spacing)));
    double s = 0.0;
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        const int k = g.index(i, j);
        if (!q.mask[k]) continue;
        const Vec2 r = q.cell_centre(i, j) - c;
        const double rn = norm(r);
        if (rn >= radius || rn == 0.0) continue;
        const double dpsi = -std::numbers::pi / (2.0 * radius) * std::sin(std::numbers::pi * rn / radius);
        s += dot(q.values[k], r * (dpsi / rn)) * area;
      }
    rep.residual = std::max(rep.residual, std::abs(s));
  }
  return rep;
}

ScalarField reconstruct_potential(const GridFlux& p, Point x0) {
  const RasterGrid& g = *p.grid;
  if (!g.domain.contains(x0)) throw Error("base point lies outside the domain");
  ScalarField u{p.grid, std::vector<double>(g.size(), kNaN)};
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.index(i, j);
      if (g.kind[k] == RasterGrid::Node::Inside) u.values[k] = form_integral(p, x0, g.node(i, j));
    }
  return u;
}

double loop_integral(const GridFlux& p, const std::vector<Point>& polygon) {
  double s = 0.0;
  for (size_t k = 0; k < polygon.size(); ++k) s += form_integral(p, polygon[k], polygon[(k + 1) % polygon.size()]);
  return s;
}

PathIndependence path_independence(const GridFlux& p, int loops, unsigned seed) {
  const RasterGrid& g = *p.grid;
  const BoundingBox box = g.domain.bbox();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.lo.x, box.hi.x), uy(box.lo.y, box.hi.y);
  auto draw = [&] {
    for (;;) {
      const Point c{ux(rng), uy(rng)};
      if (g.domain.signed_distance(c) < -g.spacing) return c;
    }
  };
  PathIndependence out;
  for (; out.loops < loops; ++out.loops) out.worst = std::max(out.worst, std::abs(loop_integral(p, {draw(), draw(), draw()})));
  return out;
}

BoundaryFunction extended_trace(const LevelFamily& family) {
  if (!family.datum) throw Error("level family carries no datum");
  const BoundaryFunction& f = *family.datum;
  const BoundaryArc& gam = f.arc();
  if (gam.is_full()) return f;
  const BoundaryArc ups = gam.complement();
  const ConvexBoundary dom = gam.boundary;
  const double delta = 1e-9 * dom.diameter();
  // Piecewise linear samples of the solution just inside the free arc.
  constexpr int kSamples = 4096;
  std::vector<double> samples(kSamples + 1);
  for (int k = 0; k <= kSamples; ++k) {
    const double g = ups.global(ups.length * k / kSamples);
    samples[k] = evaluate(family, dom.point(g) - dom.normal(g) * delta);
  }
  const BoundaryFunction tu = BoundaryFunction::from_samples(ups, std::move(samples));
  const double lg = gam.length;
  std::vector<Piece> pieces = f.pieces();
  for (Piece p : tu.pieces()) {
    p.s0 += lg;
    p.s1 += lg;
    pieces.push_back(p);
  }
  std::vector<double> kinks = f.kinks();
  for (double k : tu.kinks()) kinks.push_back(k + lg);
  auto value = [f, tu, lg](double s) { return s < lg ? f(s) : tu(s - lg); };
  auto deriv = [f, tu, lg](double s) { return s < lg ? f.derivative(s) : tu.derivative(s - lg); };
  BoundaryFunction out(BoundaryArc::full(dom, gam.start), std::move(pieces), value, deriv);
  out.set_kinks(std::move(kinks));
  return out;
}

TestFunction vanish_off_arc(const TestFunction& p, const BoundaryArc& gamma) {
  const Point a = gamma.first(), b = gamma.last();
  Vec2 n = rotate_plus_90(normalized(b - a));
  if (dot(n, gamma.point(0.5 * gamma.length) - a) < 0.0) n = -n;
  TestFunction out;
  out.value = [p, a, n](Point x) {
    const double l = std::max(dot(n, x - a), 0.0);
    return p.value(x) * l * l;
  };
  out.gradient = [p, a, n](Point x) {
    const double l = std::max(dot(n, x - a), 0.0);
    return p.gradient(x) * (l * l) + n * (2.0 * l * p.value(x));
  };
  // Sampled bound on |grad phi| over the domain.
  const BoundingBox box = gamma.boundary.bbox();
  for (int j = 0; j <= 64; ++j)
    for (int i = 0; i <= 64; ++i) {
      const Point x{box.lo.x + (box.hi.x - box.lo.x) * i / 64.0, box.lo.y + (box.hi.y - box.lo.y) * j / 64.0};
      if (gamma.boundary.contains(x)) out.lipschitz = std::max(out.lipschitz, norm(out.gradient(x)));
    }
  return out;
}

}  // namespace lgp
