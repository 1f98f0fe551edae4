#include "lgp/swz_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "lgp/error.hpp"
#include "lgp/numeric.hpp"

namespace lgp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LevelLine trivial(double t, LevelLine::Extent extent, LineKind kind) {
  LevelLine l;
  l.t = t;
  l.kind = kind;
  l.extent = extent;
  return l;
}

// Segment from p to q oriented so that `inside` lies on its left.
Segment oriented(Point p, Point q, Point inside) {
  if (cross(q - p, inside - p) < 0.0) std::swap(p, q);
  return {p, q};
}

Segment oriented_away(Point p, Point q, Point outside) {
  if (cross(q - p, outside - p) > 0.0) std::swap(p, q);
  return {p, q};
}

HalfPlane left_of(const Segment& s) { return {s.p, normalized(s.q - s.p)}; }
HalfPlane reversed(const HalfPlane& h) { return {h.anchor, -h.direction}; }

bool degenerate(Point p, Point q, double diam) { return dist(p, q) <= 1e-12 * diam; }

// Chord between two datum-arc points with the superlevel side decided by the
// datum on the arc between them.
LevelLine gamma_chord(const BoundaryFunction& f, double t, double s1, double s2, LineKind kind) {
  const BoundaryArc& g = f.arc();
  const Point p = g.point(s1), q = g.point(s2);
  const double mid = 0.5 * (s1 + s2);
  const Point m = g.point(mid);
  LevelLine l;
  l.t = t;
  l.kind = kind;
  const Segment seg = f(mid) > t ? oriented(p, q, m) : oriented_away(p, q, m);
  l.segments.push_back(seg);
  l.closed.push_back(left_of(seg));
  l.gamma_params = {s1, s2};
  return l;
}

void require(bool cond, const std::string& clause, const std::string& detail) {
  if (!cond) throw ValidationError(clause, detail);
}

void finish(LevelFamily& fam, const SolveOptions& opt) {
  std::sort(fam.critical.begin(), fam.critical.end());
  fam.t_grid = make_t_grid(fam.inf, fam.sup, opt.t_samples, fam.critical);
  build_lines(fam);
  std::sort(fam.fat.begin(), fam.fat.end(), [](const FatRegion& a, const FatRegion& b) { return a.value > b.value; });
}

void add_piece_values(LevelFamily& fam, const BoundaryFunction& f) {
  for (const Piece& p : f.pieces()) {
    fam.critical.push_back(p.v0);
    fam.critical.push_back(p.v1);
  }
}

}  // namespace

std::string to_string(LineKind kind) {
  switch (kind) {
    case LineKind::GammaChord: return "gamma_chord";
    case LineKind::UpsilonPair: return "upsilon_pair";
    case LineKind::SingleToUpsilon: return "single_to_upsilon";
    case LineKind::Chord: return "chord";
  }
  return "unknown";
}

bool LevelLine::contains(Point p, double tol) const {
  if (extent == Extent::Everything) return true;
  if (extent == Extent::Nothing) return false;
  for (const HalfPlane& h : closed)
    if (!h.contains(p, tol)) return false;
  return true;
}

double LevelLine::depth(Point p, bool use_upper) const {
  if (extent == Extent::Everything) return kInf;
  if (extent == Extent::Nothing) return -kInf;
  const std::vector<HalfPlane>& hs = use_upper && upper ? *upper : closed;
  double d = kInf;
  for (const HalfPlane& h : hs) d = std::min(d, h.signed_distance(p));
  return d;
}

double LevelLine::total_length() const {
  double s = 0.0;
  for (const Segment& seg : segments) s += seg.length();
  return s;
}

std::vector<double> make_t_grid(double lo, double hi, int n, const std::vector<double>& critical) {
  if (n < 2) throw Error("level grid needs at least two samples");
  std::vector<double> crit;
  for (double c : critical)
    if (c >= lo && c <= hi) crit.push_back(c);
  std::sort(crit.begin(), crit.end());
  const double range = hi - lo;
  const double gap = 1e-9 * std::max(range, 1e-300);
  std::vector<double> out;
  for (int k = 0; k < n; ++k) {
    const double t = k == n - 1 ? hi : lo + range * k / (n - 1);
    auto it = std::lower_bound(crit.begin(), crit.end(), t - gap);
    if (it != crit.end() && *it <= t + gap) continue;
    out.push_back(t);
  }
  out.insert(out.end(), crit.begin(), crit.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void build_lines(LevelFamily& fam) {
  fam.lines.clear();
  fam.T_upsilon.clear();
  fam.T_gamma.clear();
  fam.lines.reserve(fam.t_grid.size());
  for (double t : fam.t_grid) {
    fam.lines.push_back(fam.builder(t));
    const LevelLine& l = fam.lines.back();
    if (l.extent != LevelLine::Extent::Segments) continue;
    const bool at_tau = fam.tau && t == *fam.tau;
    if (l.kind == LineKind::UpsilonPair || l.kind == LineKind::SingleToUpsilon || at_tau) fam.T_upsilon.push_back(t);
    if (l.kind == LineKind::GammaChord || at_tau) fam.T_gamma.push_back(t);
  }
}

// ---------------------------------------------------------------------------
// Case 1

double case1_h(const BoundaryFunction& f, double t) {
  const LevelPreimage pre = f.preimage(t);
  if (pre.points.size() != 2) throw Error("level " + std::to_string(t) + " is not attained exactly twice");
  const ArcDistanceOracle oracle(f.arc().complement());
  return oracle.query(pre.points[0]).distance + oracle.query(pre.points[1]).distance -
         dist(pre.points[0], pre.points[1]);
}

LevelFamily solve_case1(const BoundaryFunction& f, const SolveOptions& opt) {
  const BoundaryArc& g = f.arc();
  require(!g.is_full(), "case 1", "the datum arc must be a proper subarc");
  const auto& pc = f.pieces();
  const double tol = f.level_tolerance();
  require(std::abs(f.value_a() - f.inf()) <= tol && std::abs(f.value_b() - f.inf()) <= tol,
          "case 1: f(a) = f(b) = inf f", "endpoint values differ from the infimum");
  require(pc.size() == 2 && pc[0].kind == PieceKind::Increasing && pc[1].kind == PieceKind::Decreasing,
          "case 1: unique strict maximum", "datum must increase to a single maximum and then decrease");
  require(f.continuous(), "case 1: continuity", "datum has a jump");

  auto oracle = std::make_shared<const ArcDistanceOracle>(g.complement());
  const ConvexBoundary dom = g.boundary;
  const double diam = dom.diameter();
  const double m = f.inf(), M = f.sup();
  const double s_max = pc[0].s1;
  const BoundaryArc ups = g.complement();

  auto h = [&](double t) {
    if (t <= m) return -dist(g.first(), g.last());
    if (t >= M) return 2.0 * oracle->query(g.point(s_max)).distance;
    const LevelPreimage pre = f.preimage(t);
    return oracle->query(pre.points.front()).distance + oracle->query(pre.points.back()).distance -
           dist(pre.points.front(), pre.points.back());
  };
  const double tau = numeric::bisect(h, m, M);

  // Nearest free-arc point, preferring the minimizer next to the given end.
  auto foot = [oracle](Point x, bool near_a) {
    const ArcDistance d = oracle->query(x);
    return near_a ? d.sigmas.back() : d.sigmas.front();
  };

  LevelFamily fam;
  fam.case_id = 1;
  fam.solver = "case1";
  fam.domain = dom;
  fam.gamma = g;
  fam.datum = f;
  fam.inf = m;
  fam.sup = M;
  fam.tau = tau;
  fam.critical = {m, M, tau};

  auto pair_line = [f, ups, foot, s_max, diam](double t, double sx, double sy) {
    const BoundaryArc& g = f.arc();
    const Point x = g.point(sx), y = g.point(sy);
    const double up = foot(x, true), uq = foot(y, false);
    const Point p = ups.point(up), q = ups.point(uq);
    LevelLine l;
    l.t = t;
    l.kind = LineKind::UpsilonPair;
    const double P = ups.boundary.total_length();
    const double ptol = 1e-9 * P;
    const Segment s1 = oriented(x, p, g.point(0.5 * (sx + s_max)));
    const Segment s2 = oriented(y, q, g.point(0.5 * (sy + s_max)));
    for (const Segment& s : {s1, s2}) {
      if (degenerate(s.p, s.q, diam)) continue;
      l.segments.push_back(s);
      l.closed.push_back(left_of(s));
    }
    if (up > ptol && up < ups.length - ptol) l.upsilon_feet.push_back({0, ups.global(up)});
    if (uq > ptol && uq < ups.length - ptol) l.upsilon_feet.push_back({static_cast<int>(l.segments.size()) - 1, ups.global(uq)});
    l.gamma_params = {sx, sy};
    return l;
  };

  fam.builder = [f, tau, m, M, pair_line, tol](double t) {
    if (t <= m + tol) return trivial(t, LevelLine::Extent::Everything, LineKind::UpsilonPair);
    if (t >= M - tol) return trivial(t, LevelLine::Extent::Nothing, LineKind::GammaChord);
    const LevelPreimage pre = f.preimage(t);
    if (pre.params.size() != 2) throw ValidationError("case 1: values attained twice", "level has " +
                                                      std::to_string(pre.params.size()) + " preimages");
    const double sx = pre.params[0], sy = pre.params[1];
    if (t > tau) return gamma_chord(f, t, sx, sy, LineKind::GammaChord);
    LevelLine l = pair_line(t, sx, sy);
    if (t == tau) {
      const LevelLine c = gamma_chord(f, t, sx, sy, LineKind::GammaChord);
      l.upper = c.closed;
      l.upper_segments = c.segments;
    }
    return l;
  };

  // Every interior grid level must have exactly two preimages.
  const std::vector<double> grid = make_t_grid(m, M, opt.t_samples, fam.critical);
  for (size_t k = 1; k + 1 < grid.size(); ++k)
    require(f.preimage(grid[k]).params.size() == 2, "case 1: values attained twice",
            "level " + std::to_string(grid[k]) + " does not have two preimages");

  const LevelLine at_tau = fam.builder(tau);
  std::vector<HalfPlane> cuts = at_tau.closed;
  for (const HalfPlane& hp : *at_tau.upper) cuts.push_back(reversed(hp));
  ConvexRegion region(dom, cuts);
  fam.fat.push_back({tau, region, region.area(), "critical level"});
  finish(fam, opt);
  return fam;
}

// ---------------------------------------------------------------------------
// Case 2

LevelFamily solve_case2(const BoundaryFunction& f, const SolveOptions& opt) {
  const BoundaryArc& g = f.arc();
  require(!g.is_full(), "case 2", "the datum arc must be a proper subarc");
  const auto& pc = f.pieces();
  const PieceKind dir = pc.front().kind;
  for (const Piece& p : pc)
    require(p.kind == dir && dir != PieceKind::Constant, "case 2: f monotone",
            "datum is not strictly monotone on the datum arc");
  require(f.continuous(), "case 2: f monotone", "datum has a jump");
  const bool increasing = dir == PieceKind::Increasing;

  const BoundaryArc ups = g.complement();
  auto oracle = std::make_shared<const ArcDistanceOracle>(ups);
  const ConvexBoundary dom = g.boundary;
  const double diam = dom.diameter();
  const double tol = f.level_tolerance();
  const double m = f.inf(), M = f.sup();

  LevelFamily fam;
  fam.case_id = 2;
  fam.solver = "case2";
  fam.domain = dom;
  fam.gamma = g;
  fam.datum = f;
  fam.inf = m;
  fam.sup = M;
  fam.classification = classify_distance_structure(g, ups, opt.classify_samples);
  fam.critical = {m, M};

  struct DLevel {
    double t;
    double sigma;
    std::vector<double> feet;
  };
  auto dlevels = std::make_shared<std::vector<DLevel>>();
  for (const DistancePoint& d : fam.classification->D) {
    const double t = f(d.sigma);
    dlevels->push_back({t, d.sigma, d.upsilon_sigmas});
    fam.critical.push_back(t);
  }

  const double end = increasing ? g.length : 0.0;
  const double P = dom.total_length();
  const double ptol = 1e-9 * P;

  fam.builder = [=](double t) {
    if (t <= m + tol) return trivial(t, LevelLine::Extent::Everything, LineKind::SingleToUpsilon);
    if (t >= M - tol) return trivial(t, LevelLine::Extent::Nothing, LineKind::SingleToUpsilon);
    double sx;
    std::vector<double> feet;
    const DLevel* hit = nullptr;
    for (const DLevel& d : *dlevels)
      if (std::abs(d.t - t) <= tol) hit = &d;
    if (hit) {
      sx = hit->sigma;
      feet = hit->feet;
    } else {
      const LevelPreimage pre = f.preimage(t);
      if (pre.params.size() != 1) throw ValidationError("case 2: f monotone", "level is not attained once");
      sx = pre.params[0];
      feet = oracle->query(g.point(sx)).sigmas;
    }
    const Point x = g.point(sx);
    const Point ref = g.point(0.5 * (sx + end));
    // As t grows the foot moves towards the end reached last; the closed set
    // takes the limit from below.
    const double lower = increasing ? feet.back() : feet.front();
    const double upper = increasing ? feet.front() : feet.back();
    LevelLine l;
    l.t = t;
    l.kind = LineKind::SingleToUpsilon;
    const Segment s = oriented(x, ups.point(lower), ref);
    if (degenerate(s.p, s.q, diam)) return trivial(t, LevelLine::Extent::Nothing, LineKind::SingleToUpsilon);
    l.segments.push_back(s);
    l.closed.push_back(left_of(s));
    l.gamma_params = {sx};
    if (lower > ptol && lower < ups.length - ptol) l.upsilon_feet.push_back({0, ups.global(lower)});
    if (feet.size() >= 2) {
      const Segment su = oriented(x, ups.point(upper), ref);
      l.upper = std::vector<HalfPlane>{left_of(su)};
      l.upper_segments.push_back(su);
    }
    return l;
  };

  for (const DLevel& d : *dlevels) {
    const Point x0 = g.point(d.sigma);
    const double y1 = d.feet.front(), y2 = d.feet.back();
    const Point inside = ups.point(0.5 * (y1 + y2));
    ConvexRegion region(dom, {HalfPlane::through(x0, ups.point(y1), inside),
                              HalfPlane::through(x0, ups.point(y2), inside)});
    fam.fat.push_back({d.t, region, region.area(), "distance tie"});
  }
  finish(fam, opt);
  return fam;
}

// ---------------------------------------------------------------------------
// Case 3

LevelFamily solve_case3(const BoundaryFunction& f, const SolveOptions& opt) {
  const BoundaryArc& g = f.arc();
  require(!g.is_full(), "case 3", "the datum arc must be a proper subarc");
  const auto& pc = f.pieces();
  const double tol = f.level_tolerance();
  require(std::abs(f.value_a() - f.value_b()) <= tol, "case 3: f(a) = f(b)", "endpoint values differ");
  require(f.continuous(), "case 3: continuity", "datum has a jump");
  require(pc.size() == 3 && pc[0].kind != PieceKind::Constant && pc[1].kind != PieceKind::Constant &&
              pc[2].kind != PieceKind::Constant && pc[0].kind != pc[1].kind && pc[1].kind != pc[2].kind,
          "case 3: one local minimum and one local maximum", "datum must have exactly three monotone arcs");
  const double fa = f.value_a();
  require(fa > f.inf() + tol && fa < f.sup() - tol, "case 3: f(a) between min and max",
          "endpoint value is an extreme value");

  // Order a -> x_m -> x0 -> x_M -> b when the datum first decreases.
  const bool min_first = pc[0].kind == PieceKind::Decreasing;
  const double s_m = min_first ? pc[0].s1 : pc[1].s1;
  const double s_M = min_first ? pc[1].s1 : pc[0].s1;
  const Piece& mid = pc[1];
  const double s0 = numeric::bisect([&](double s) { return f(s) - fa; }, mid.s0, mid.s1);

  const BoundaryArc ups = g.complement();
  const ArcDistanceOracle oracle(ups);
  const ConvexBoundary dom = g.boundary;
  const double diam = dom.diameter();
  const Point a = g.first(), b = g.last(), x0 = g.point(s0);
  const double da = dist(x0, a), db = dist(x0, b), dy = oracle.query(x0).distance;
  const double atol = 1e-8 * diam;
  require(std::abs(da - db) <= atol && std::abs(dy - da) <= atol, "case 3: condition (A)",
          "d(x0, Y) = " + std::to_string(dy) + ", d(x0, a) = " + std::to_string(da) + ", d(x0, b) = " +
              std::to_string(db));

  const double m = f.inf(), M = f.sup();
  LevelFamily fam;
  fam.case_id = 3;
  fam.solver = "case3";
  fam.domain = dom;
  fam.gamma = g;
  fam.datum = f;
  fam.inf = m;
  fam.sup = M;
  fam.critical = {m, M, fa};

  // Chords reached from below and from above at the level f(a).
  const Point xm = g.point(s_m), xM = g.point(s_M);
  const Segment below = min_first ? oriented_away(a, x0, xm) : oriented_away(x0, b, xm);
  const Segment above = min_first ? oriented(x0, b, xM) : oriented(a, x0, xM);

  fam.builder = [=](double t) {
    if (t <= m + tol) return trivial(t, LevelLine::Extent::Everything, LineKind::GammaChord);
    if (t >= M - tol) return trivial(t, LevelLine::Extent::Nothing, LineKind::GammaChord);
    if (std::abs(t - fa) <= tol) {
      LevelLine l;
      l.t = t;
      l.kind = LineKind::GammaChord;
      l.segments = {below};
      l.closed = {left_of(below)};
      l.upper = std::vector<HalfPlane>{left_of(above)};
      l.upper_segments = {above};
      l.gamma_params = {0.0, s0, g.length};
      return l;
    }
    const LevelPreimage pre = f.preimage(t);
    if (pre.params.size() != 2) throw ValidationError("case 3: injective arcs", "level is not attained twice");
    return gamma_chord(f, t, pre.params[0], pre.params[1], LineKind::GammaChord);
  };

  ConvexRegion region(dom, {left_of(below), reversed(left_of(above))});
  fam.fat.push_back({fa, region, region.area(), "endpoint level"});
  finish(fam, opt);
  return fam;
}

// ---------------------------------------------------------------------------
// Chord families

LevelFamily solve_chord_family(const BoundaryFunction& f, const SolveOptions& opt) {
  const BoundaryArc& g = f.arc();
  require(g.is_full(), "chord family", "datum must be given on the whole boundary");
  const double tol = f.level_tolerance();
  const double len = g.length;
  const double diam = g.boundary.diameter();

  LevelFamily fam;
  fam.case_id = 0;
  fam.solver = "chords";
  fam.domain = g.boundary;
  fam.gamma = g;
  fam.datum = f;
  fam.inf = f.inf();
  fam.sup = f.sup();
  add_piece_values(fam, f);
  for (double c : g.boundary.corners()) fam.critical.push_back(f(std::min(g.local(c), len)));

  fam.builder = [f, tol, len, diam](double t) {
    const BoundaryArc& g = f.arc();
    // Intervals of {f >= t}, one per piece at most.
    std::vector<std::pair<double, double>> iv;
    for (const Piece& p : f.pieces()) {
      if (p.kind == PieceKind::Constant) {
        if (p.v0 >= t - tol) iv.emplace_back(p.s0, p.s1);
        continue;
      }
      const double hi = std::max(p.v0, p.v1), lo = std::min(p.v0, p.v1);
      if (hi < t - tol) continue;
      if (lo >= t - tol) {
        iv.emplace_back(p.s0, p.s1);
        continue;
      }
      // A top value within the tolerance below t leaves no sign change: the
      // set degenerates to the top end of the piece.
      const double r = hi < t ? (p.kind == PieceKind::Increasing ? p.s1 : p.s0)
                              : numeric::bisect([&](double s) { return f(s) - t; }, p.s0, p.s1);
      if (p.kind == PieceKind::Increasing)
        iv.emplace_back(r, p.s1);
      else
        iv.emplace_back(p.s0, r);
    }
    const double gap = 1e-12 * len;
    std::vector<std::pair<double, double>> merged;
    for (const auto& i : iv) {
      if (!merged.empty() && i.first - merged.back().second <= gap)
        merged.back().second = std::max(merged.back().second, i.second);
      else
        merged.push_back(i);
    }
    if (merged.size() >= 2 && merged.front().first <= gap && merged.back().second >= len - gap) {
      merged.front().first = merged.back().first - len;
      merged.pop_back();
    }
    if (merged.empty()) return trivial(t, LevelLine::Extent::Nothing, LineKind::Chord);
    if (merged.size() > 1)
      throw ValidationError("single arc superlevel sets",
                            "{f >= " + std::to_string(t) + "} has " + std::to_string(merged.size()) + " components");
    const double lo = merged[0].first, hi = merged[0].second;
    if (hi - lo >= len - gap) return trivial(t, LevelLine::Extent::Everything, LineKind::Chord);
    const Point p = g.point(lo), q = g.point(hi);
    if (degenerate(p, q, diam)) {
      return trivial(t, hi - lo < 0.5 * len ? LevelLine::Extent::Nothing : LevelLine::Extent::Everything,
                     LineKind::Chord);
    }
    LevelLine l;
    l.t = t;
    l.kind = LineKind::Chord;
    const Segment s = oriented(p, q, g.point(0.5 * (lo + hi)));
    l.segments.push_back(s);
    l.closed.push_back(left_of(s));
    for (double e : {lo, hi}) {
      const double u = e < 0.0 ? e + len : e;
      if (std::abs(f(u) - t) <= 1e3 * tol) l.gamma_params.push_back(u);
    }
    return l;
  };
  finish(fam, opt);
  return fam;
}

LevelFamily solve_piecewise_constant(const ConvexBoundary& dom, double s0, double s1, double s2, double a1,
                                     double a2, const SolveOptions& opt) {
  if (!(a1 > 0.0 && a2 > 0.0)) throw ValidationError("piecewise constant datum", "alpha_1 and alpha_2 must be positive");
  const double d1 = dom.wrap(s1 - s0), d2 = dom.wrap(s2 - s0);
  require(d1 > 0.0 && d2 > d1, "piecewise constant datum", "points must be distinct and ordered");
  const Point x0 = dom.point(s0), x1 = dom.point(s1), x2 = dom.point(s2);
  const Point arc12 = dom.point(s0 + 0.5 * (d1 + d2));
  const double top = a1 + a2;

  // The superlevel boundaries are [x0, x1] on (0, a1] and [x1, x2] on (a1, a1 + a2].
  const Segment c01 = oriented(x0, x1, x2);
  const Segment c12 = oriented(x1, x2, arc12);

  LevelFamily fam;
  fam.case_id = 0;
  fam.solver = "piecewise";
  fam.domain = dom;
  fam.datum = datum::piecewise_constant(dom, s0, s1, s2, a1, a2);
  fam.inf = 0.0;
  fam.sup = top;
  fam.critical = {0.0, a1, top};
  fam.builder = [=](double t) {
    if (t <= 0.0) return trivial(t, LevelLine::Extent::Everything, LineKind::Chord);
    if (t > top) return trivial(t, LevelLine::Extent::Nothing, LineKind::Chord);
    LevelLine l;
    l.t = t;
    l.kind = LineKind::Chord;
    const Segment& s = t <= a1 ? c01 : c12;
    l.segments = {s};
    l.closed = {left_of(s)};
    return l;
  };
  const ConvexRegion r2(dom, {left_of(c12)});
  const ConvexRegion r1(dom, {left_of(c01), reversed(left_of(c12))});
  const ConvexRegion r0(dom, {reversed(left_of(c01))});
  fam.fat.push_back({top, r2, r2.area(), "u = a1 + a2"});
  fam.fat.push_back({a1, r1, r1.area(), "u = a1"});
  fam.fat.push_back({0.0, r0, r0.area(), "u = 0"});
  finish(fam, opt);
  return fam;
}

// ---------------------------------------------------------------------------
// Evaluation and totals

double evaluate(const LevelFamily& fam, Point p) {
  const double diam = fam.domain.diameter();
  const double tol = 1e-12 * diam;
  if (!fam.domain.contains(p, tol)) throw Error("point lies outside the domain");
  for (const FatRegion& r : fam.fat)
    if (r.region.contains(p, tol)) return r.value;
  const auto& L = fam.lines;
  const auto& T = fam.t_grid;
  if (L.empty()) throw Error("level family has no lines");
  if (!L.front().contains(p, tol)) return T.front();
  if (L.back().contains(p, tol)) return T.back();
  size_t lo = 0, hi = L.size() - 1;
  while (hi - lo > 1) {
    const size_t mid = (lo + hi) / 2;
    if (L[mid].contains(p, tol))
      lo = mid;
    else
      hi = mid;
  }
  const double din = std::max(L[lo].depth(p, true), 0.0);
  const double dout = std::max(-L[hi].depth(p, false), 0.0);
  if (!std::isfinite(din) || din + dout == 0.0) return T[lo];
  if (!std::isfinite(dout)) return T[lo];
  return T[lo] + (T[hi] - T[lo]) * din / (din + dout);
}

std::vector<WeightedLine> slab_lines(const LevelFamily& fam) {
  std::vector<WeightedLine> out;
  const auto& T = fam.t_grid;
  for (size_t k = 0; k + 1 < T.size(); ++k) {
    const auto [nodes, w] = numeric::gauss2(T[k], T[k + 1]);
    out.push_back({w, fam.builder(nodes.first)});
    out.push_back({w, fam.builder(nodes.second)});
  }
  return out;
}

CoareaResult coarea_tv(const LevelFamily& fam) {
  CoareaResult r;
  for (const WeightedLine& wl : slab_lines(fam)) r.value += wl.weight * wl.line.total_length();
  const auto& T = fam.t_grid;
  double coarse = 0.0;
  for (size_t k = 0; k + 1 < T.size(); k += 2) {
    const size_t e = std::min(k + 2, T.size() - 1);
    const auto [nodes, w] = numeric::gauss2(T[k], T[e]);
    coarse += w * (fam.builder(nodes.first).total_length() + fam.builder(nodes.second).total_length());
  }
  r.error_estimate = std::abs(r.value - coarse) / 15.0;
  return r;
}

UniquenessProbe uniqueness_probe(const LevelFamily& a, const LevelFamily& b) {
  UniquenessProbe out;
  for (size_t k = 0; k < a.t_grid.size(); ++k) {
    const double t = a.t_grid[k];
    const LevelLine& la = a.lines[k];
    const LevelLine lb = b.builder(t);
    if (la.extent != lb.extent) {
      ++out.extent_mismatches;
      continue;
    }
    if (la.extent != LevelLine::Extent::Segments) continue;
    const double d = hausdorff(la.segments, lb.segments);
    out.per_level.push_back(d);
    ++out.compared;
    if (d > out.max_distance) {
      out.max_distance = d;
      out.worst_t = t;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Invariants

InvariantResult check_nesting(const LevelFamily& fam, int stride) {
  InvariantResult r;
  const double tol = 1e-9 * fam.domain.diameter();
  std::vector<std::vector<Point>> verts(fam.lines.size());
  for (size_t k = 0; k < fam.lines.size(); k += stride) {
    const LevelLine& l = fam.lines[k];
    if (l.extent != LevelLine::Extent::Segments) continue;
    verts[k] = ConvexRegion(fam.domain, l.closed).outline(8);
  }
  for (size_t i = 0; i < fam.lines.size(); i += stride) {
    const LevelLine& ls = fam.lines[i];
    for (size_t j = i + stride; j < fam.lines.size(); j += stride) {
      const LevelLine& lt = fam.lines[j];
      if (lt.extent == LevelLine::Extent::Nothing || ls.extent == LevelLine::Extent::Everything) continue;
      if (lt.extent == LevelLine::Extent::Everything || ls.extent == LevelLine::Extent::Nothing) {
        ++r.violations;
        continue;
      }
      for (const Point& v : verts[j]) {
        ++r.checked;
        const double d = ls.depth(v, false);
        if (d < -tol) {
          ++r.violations;
          r.worst = std::max(r.worst, -d);
        }
      }
    }
  }
  r.ok = r.violations == 0;
  return r;
}

InvariantResult check_disjoint(const LevelFamily& fam, int stride) {
  InvariantResult r;
  for (size_t i = 0; i < fam.lines.size(); i += stride) {
    for (size_t j = i + stride; j < fam.lines.size(); j += stride) {
      for (const Segment& a : fam.lines[i].segments)
        for (const Segment& b : fam.lines[j].segments) {
          ++r.checked;
          if (proper_crossing(a, b, 1e-9)) ++r.violations;
        }
    }
  }
  r.ok = r.violations == 0;
  return r;
}

InvariantResult check_boundary_contact(const LevelFamily& fam, const BoundaryFunction& f) {
  InvariantResult r;
  const double tol = 1e-10 * std::max(f.sup() - f.inf(), 1e-300);
  for (const LevelLine& l : fam.lines) {
    const bool at_split = l.upper.has_value();
    for (double s : l.gamma_params) {
      ++r.checked;
      const double d = std::abs(f(std::min(s, f.arc().length)) - l.t);
      if (d > tol && !at_split) {
        ++r.violations;
        r.worst = std::max(r.worst, d);
      }
    }
  }
  r.ok = r.violations == 0;
  return r;
}

InvariantResult check_orthogonality(const LevelFamily& fam) {
  InvariantResult r;
  for (const LevelLine& l : fam.lines) {
    for (const auto& [idx, s] : l.upsilon_feet) {
      if (idx < 0 || idx >= static_cast<int>(l.segments.size())) continue;
      const Segment& seg = l.segments[idx];
      const Vec2 d = normalized(seg.q - seg.p);
      const double defect = std::asin(std::min(1.0, std::abs(dot(d, fam.domain.tangent(s)))));
      ++r.checked;
      r.worst = std::max(r.worst, defect);
      if (defect > 1e-3) ++r.violations;
    }
  }
  r.ok = r.violations == 0;
  return r;
}

}  // namespace lgp
