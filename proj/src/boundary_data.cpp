#include "lgp/boundary_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lgp/error.hpp"
#include "lgp/numeric.hpp"

namespace lgp {

namespace {

constexpr double kPi = std::numbers::pi;

int sign_of(double d, double tol) { return d > tol ? 1 : (d < -tol ? -1 : 0); }

PieceKind kind_of(int sign) {
  return sign > 0 ? PieceKind::Increasing : (sign < 0 ? PieceKind::Decreasing : PieceKind::Constant);
}

}  // namespace

std::string to_string(PieceKind kind) {
  switch (kind) {
    case PieceKind::Increasing: return "increasing";
    case PieceKind::Decreasing: return "decreasing";
    case PieceKind::Constant: return "constant";
  }
  return "unknown";
}

BoundaryFunction::BoundaryFunction(BoundaryArc arc, std::vector<Piece> pieces, Fn value, Fn derivative)
    : arc_(std::move(arc)), pieces_(std::move(pieces)), value_(std::move(value)), derivative_(std::move(derivative)) {
  if (pieces_.empty()) throw Error("boundary datum needs at least one piece");
  if (!(arc_.length > 0.0)) throw Error("boundary datum on an empty arc");
  inf_ = std::numeric_limits<double>::infinity();
  sup_ = -inf_;
  for (const Piece& p : pieces_) {
    inf_ = std::min({inf_, p.v0, p.v1});
    sup_ = std::max({sup_, p.v0, p.v1});
  }
  if (!std::isfinite(inf_) || !std::isfinite(sup_)) throw Error("boundary datum is not bounded");
  for (const Piece& p : pieces_) {
    if (p.kind == PieceKind::Constant) continue;
    const int n = 256;
    for (int k = 0; k <= n; ++k) max_slope_ = std::max(max_slope_, std::abs(this->derivative(p.s0 + (p.s1 - p.s0) * k / n)));
  }
}

BoundaryFunction BoundaryFunction::segmented(BoundaryArc arc, Fn value, std::vector<double> breaks, Fn derivative,
                                             int samples) {
  const double len = arc.length;
  std::vector<double> grid;
  grid.reserve(samples + breaks.size() + 1);
  for (int k = 0; k <= samples; ++k) grid.push_back(len * k / samples);
  for (double b : breaks)
    if (b > 0.0 && b < len) grid.push_back(b);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(), [&](double a, double b) { return b - a <= 1e-13 * len; }),
             grid.end());
  grid.back() = len;

  std::vector<double> val(grid.size());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (size_t k = 0; k < grid.size(); ++k) {
    val[k] = value(grid[k]);
    lo = std::min(lo, val[k]);
    hi = std::max(hi, val[k]);
  }
  const double tol = 1e-12 * std::max(1.0, hi - lo);

  // Runs of equal difference sign, as index ranges into the grid.
  struct Run {
    size_t i0, i1;
    int sign;
  };
  std::vector<Run> runs;
  for (size_t k = 0; k + 1 < grid.size(); ++k) {
    const int sg = sign_of(val[k + 1] - val[k], tol);
    if (!runs.empty() && runs.back().sign == sg)
      runs.back().i1 = k + 1;
    else
      runs.push_back({k, k + 1, sg});
  }

  // Locate each run boundary more precisely than the sampling.
  std::vector<double> cut(runs.size() + 1);
  cut.front() = 0.0;
  cut.back() = len;
  for (size_t r = 1; r < runs.size(); ++r) {
    const size_t k = runs[r].i0;
    const double a = grid[k > 0 ? k - 1 : 0], b = grid[std::min(k + 1, grid.size() - 1)];
    const int s_prev = runs[r - 1].sign, s_next = runs[r].sign;
    double c = grid[k];
    if (s_prev != 0 && s_next != 0) {
      const double orient = s_prev > 0 ? -1.0 : 1.0;  // minimise -f at a maximum, f at a minimum
      auto g = [&](double x) { return orient * value(x); };
      double best = numeric::golden_min(g, a, b, 1e-15 * len).first;
      double gbest = g(best);
      for (double x : {a, grid[k], b})
        if (g(x) <= gbest) {
          best = x;
          gbest = g(x);
        }
      for (double br : breaks)
        if (br >= a && br <= b && g(br) <= gbest + tol) {
          best = br;
          gbest = g(br);
        }
      c = best;
    } else if (s_prev == 0 && s_next != 0) {
      const double v = val[k];
      c = numeric::bisect([&](double x) { return std::abs(value(x) - v) > tol ? 1.0 : -1.0; }, grid[k], b);
    } else if (s_prev != 0 && s_next == 0) {
      const double v = val[k];
      c = numeric::bisect([&](double x) { return std::abs(value(x) - v) > tol ? -1.0 : 1.0; }, a, grid[k]);
    }
    cut[r] = std::clamp(c, cut[r - 1], len);
  }

  std::vector<Piece> pieces;
  for (size_t r = 0; r < runs.size(); ++r) {
    Piece p;
    p.s0 = cut[r];
    p.s1 = cut[r + 1];
    if (p.s1 <= p.s0) continue;
    p.kind = kind_of(runs[r].sign);
    p.v0 = value(p.s0);
    p.v1 = value(p.s1);
    if (p.kind == PieceKind::Constant) p.v1 = p.v0;
    pieces.push_back(p);
  }
  return BoundaryFunction(std::move(arc), std::move(pieces), std::move(value), std::move(derivative));
}

BoundaryFunction BoundaryFunction::from_samples(BoundaryArc arc, std::vector<double> values) {
  if (values.size() < 2) throw ValidationError("samples", "at least two values are required");
  for (double v : values)
    if (!std::isfinite(v)) throw ValidationError("samples", "values must be finite");
  const double len = arc.length;
  const int n = static_cast<int>(values.size()) - 1;
  const double h = len / n;
  auto shared = std::make_shared<const std::vector<double>>(std::move(values));
  auto cell = [n, h](double s) { return std::clamp(static_cast<int>(std::floor(s / h)), 0, n - 1); };
  Fn value = [shared, cell, h](double s) {
    const int k = cell(s);
    const double w = std::clamp(s / h - k, 0.0, 1.0);
    return (*shared)[k] * (1.0 - w) + (*shared)[k + 1] * w;
  };
  Fn slope = [shared, cell, h](double s) {
    const int k = cell(s);
    return ((*shared)[k + 1] - (*shared)[k]) / h;
  };
  std::vector<double> breaks;
  for (int k = 1; k < n; ++k) breaks.push_back(h * k);
  BoundaryFunction f = segmented(std::move(arc), value, breaks, slope, std::max(n, 64));
  f.set_kinks(std::move(breaks));
  return f;
}

BoundaryFunction& BoundaryFunction::set_kinks(std::vector<double> kinks) {
  std::sort(kinks.begin(), kinks.end());
  kinks_ = std::move(kinks);
  return *this;
}

double BoundaryFunction::at_point(Point p) const {
  const double s = arc_.boundary.project(p);
  double sigma = arc_.local(s);
  if (sigma > arc_.length) {
    const double to_end = sigma - arc_.length;
    const double to_start = arc_.boundary.total_length() - sigma;
    sigma = to_end < to_start ? arc_.length : 0.0;
  }
  return value_(sigma);
}

std::size_t BoundaryFunction::piece_index(double sigma) const {
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), sigma, [](double s, const Piece& p) { return s < p.s1; });
  if (it == pieces_.end()) return pieces_.size() - 1;
  return static_cast<std::size_t>(it - pieces_.begin());
}

double BoundaryFunction::derivative(double sigma) const {
  const Piece& p = pieces_[piece_index(sigma)];
  if (p.kind == PieceKind::Constant) return 0.0;
  if (derivative_) return derivative_(sigma);
  const double h = 1e-6 * arc_.length;
  const double a = std::max(p.s0, sigma - h);
  const double b = std::min(p.s1, sigma + h);
  const double fb = b >= p.s1 ? p.v1 : value_(b);
  const double fa = a <= p.s0 ? p.v0 : value_(a);
  return (fb - fa) / (b - a);
}

bool BoundaryFunction::continuous() const {
  const double tol = level_tolerance();
  for (size_t i = 1; i < pieces_.size(); ++i)
    if (std::abs(pieces_[i].v0 - pieces_[i - 1].v1) > tol) return false;
  if (arc_.is_full() && std::abs(pieces_.front().v0 - pieces_.back().v1) > tol) return false;
  return true;
}

bool BoundaryFunction::has_plateaus() const {
  return std::any_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.kind == PieceKind::Constant; });
}

double BoundaryFunction::level_tolerance() const { return 1e-10 * std::max(sup_ - inf_, 1e-300); }

LevelPreimage BoundaryFunction::preimage(double t) const {
  LevelPreimage out;
  out.t = t;
  const double tol = level_tolerance();
  if (t < inf_ - tol || t > sup_ + tol) return out;
  const double merge = 1e-12 * arc_.boundary.total_length();
  auto push = [&](double s, bool plateau) {
    if (!out.params.empty() && s - out.params.back() <= merge) {
      out.plateau.back() = out.plateau.back() || plateau;
      return;
    }
    out.params.push_back(s);
    out.plateau.push_back(plateau);
  };
  for (const Piece& p : pieces_) {
    if (p.kind == PieceKind::Constant) {
      if (std::abs(p.v0 - t) <= tol) {
        push(p.s0, true);
        push(p.s1, true);
      }
      continue;
    }
    const double lo = std::min(p.v0, p.v1), hi = std::max(p.v0, p.v1);
    if (t < lo - tol || t > hi + tol) continue;
    if (std::abs(t - p.v0) <= tol) {
      push(p.s0, false);
    } else if (std::abs(t - p.v1) <= tol) {
      push(p.s1, false);
    } else {
      push(numeric::bisect([&](double s) { return value_(s) - t; }, p.s0, p.s1), false);
    }
  }
  for (double s : out.params) out.points.push_back(arc_.point(s));
  return out;
}

// ---------------------------------------------------------------------------
// Tangential derivative

double TraceMeasure::total_mass() const {
  double m = 0.0;
  for (const TraceAtom& a : atoms) m += a.weight;
  for (const TraceDensity& d : pieces) m += d.increment;
  return m;
}

TraceMeasure tangential_derivative(const BoundaryFunction& f) {
  TraceMeasure g{f.arc().boundary, {}, {}};
  const auto& pcs = f.pieces();
  const double tol = f.level_tolerance();
  auto atom = [&](double sigma, double jump) {
    if (std::abs(jump) > tol) g.atoms.push_back({f.arc().global(sigma), jump});
  };
  for (size_t i = 1; i < pcs.size(); ++i) atom(pcs[i].s0, pcs[i].v0 - pcs[i - 1].v1);
  if (f.arc().is_full()) atom(0.0, pcs.front().v0 - pcs.back().v1);
  for (const Piece& p : pcs) {
    if (p.kind == PieceKind::Constant) continue;
    const double s0 = p.s0;
    std::vector<double> breaks;
    const auto& k = f.kinks();
    for (auto it = std::upper_bound(k.begin(), k.end(), p.s0); it != k.end() && *it < p.s1; ++it)
      breaks.push_back(*it - s0);
    g.pieces.push_back({f.arc().global(s0), p.s1 - p.s0, p.v1 - p.v0, std::move(breaks),
                        [f, s0](double u) { return f.derivative(s0 + u); }});
  }
  return g;
}

double pair(const TraceMeasure& g, const BoundaryTest& phi) {
  using boost::math::quadrature::gauss_kronrod;
  const ConvexBoundary& bd = g.boundary;
  double total = 0.0;
  for (const TraceAtom& a : g.atoms) total += a.weight * phi(bd.point(a.s));
  const std::vector<double> corners = bd.corners();
  const double P = bd.total_length();
  for (const TraceDensity& d : g.pieces) {
    std::vector<double> cuts{0.0, d.length};
    cuts.insert(cuts.end(), d.breaks.begin(), d.breaks.end());
    for (double c : corners) {
      const double u = bd.wrap(c - d.s0);
      if (u > 0.0 && u < d.length) cuts.push_back(u);
      if (u + P < d.length) cuts.push_back(u + P);
    }
    std::sort(cuts.begin(), cuts.end());
    auto integrand = [&](double u) { return phi(bd.point(d.s0 + u)) * d.density(u); };
    // Short panels with bounded refinement: a relative tolerance alone never
    // terminates on panels where the integral nearly cancels.
    const double panel = P / 256.0;
    for (size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (cuts[k + 1] <= cuts[k]) continue;
      const int m = static_cast<int>(std::ceil((cuts[k + 1] - cuts[k]) / panel));
      const double w = (cuts[k + 1] - cuts[k]) / m;
      for (int j = 0; j < m; ++j)
        total += gauss_kronrod<double, 31>::integrate(integrand, cuts[k] + j * w, cuts[k] + (j + 1) * w, 4, 1e-10);
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Rectangle monotonicity

MonotonePairCheck validate_monotone_pair(const BoundaryFunction& f, int samples) {
  MonotonePairCheck out;
  const BoundaryArc& arc = f.arc();
  if (arc.boundary.kind() != BoundaryKind::Rectangle || !arc.is_full()) {
    out.message = "datum must be given on the whole rectangle boundary";
    return out;
  }
  const double half = 0.5 * arc.boundary.total_length();
  auto at = [&](double s) { return f(std::min(arc.local(s), arc.length)); };
  out.value_top_left = at(half);
  out.value_bottom_right = at(0.0);
  const double tol = f.level_tolerance();
  const int dir = sign_of(out.value_bottom_right - out.value_top_left, tol);
  if (dir == 0) {
    out.message = "datum takes the same value at the corners (-L, h) and (L, -h)";
    return out;
  }
  // u runs from the corner (-L, h) to (L, -h); G1 goes backwards in s.
  for (int side = 0; side < 2; ++side) {
    auto s_of = [&](double u) { return side == 0 ? half - u : half + u; };
    double prev = at(s_of(0.0));
    for (int k = 1; k <= samples; ++k) {
      const double u0 = half * (k - 1) / samples, u1 = half * k / samples;
      const double v = at(s_of(u1));
      if (sign_of(v - prev, 0.0) != dir) {
        const double a = s_of(u0), b = s_of(u1);
        out.offending = ParamInterval{std::min(a, b), std::max(a, b)};
        out.message = std::string(side == 0 ? "G1" : "G2") +
                      (v == prev ? " has a plateau" : " reverses direction") + " between s = " +
                      std::to_string(out.offending->lo) + " and s = " + std::to_string(out.offending->hi);
        return out;
      }
      prev = v;
    }
  }
  if (!f.continuous()) {
    out.message = "datum has a jump";
    return out;
  }
  out.ok = true;
  return out;
}

// ---------------------------------------------------------------------------
// Catalog

namespace datum {

namespace {

std::vector<double> corner_breaks(const BoundaryArc& arc) {
  std::vector<double> out;
  for (double c : arc.boundary.corners()) {
    const double u = arc.local(c);
    if (u > 0.0 && u < arc.length) out.push_back(u);
  }
  return out;
}

}  // namespace

AngleMap angle_map(const BoundaryArc& arc, std::optional<double> theta0) {
  AngleMap m;
  const Point a = arc.first();
  m.theta0 = theta0 ? *theta0 : std::atan2(a.y, a.x);
  m.scale = 2.0 * kPi / arc.boundary.total_length();
  return m;
}

BoundaryFunction affine(const BoundaryArc& arc, double cx, double cy, double c0, double power) {
  if (!(power >= 1.0)) throw ValidationError("affine datum", "power must be at least 1");
  auto base = [arc, cx, cy, c0](double s) {
    const Point p = arc.point(s);
    return cx * p.x + cy * p.y + c0;
  };
  auto value = [base, power](double s) { return power == 1.0 ? base(s) : std::pow(std::max(base(s), 0.0), power); };
  auto deriv = [arc, base, cx, cy, power](double s) {
    const Vec2 t = arc.boundary.tangent(arc.global(s));
    const double db = cx * t.x + cy * t.y;
    return power == 1.0 ? db : power * std::pow(std::max(base(s), 0.0), power - 1.0) * db;
  };
  return BoundaryFunction::segmented(arc, value, corner_breaks(arc), deriv);
}

BoundaryFunction angular_affine(const BoundaryArc& arc, double c0, double c1, std::optional<double> theta0) {
  const AngleMap m = angle_map(arc, theta0);
  return BoundaryFunction::segmented(
      arc, [m, c0, c1](double s) { return c0 + c1 * m(s); }, {}, [m, c1](double) { return c1 * m.scale; });
}

BoundaryFunction angular_tent(const BoundaryArc& arc, double peak, double width, double height,
                              std::optional<double> theta0) {
  if (!(width > 0.0)) throw ValidationError("angular tent datum", "width must be positive");
  const AngleMap m = angle_map(arc, theta0);
  auto value = [m, peak, width, height](double s) { return height * (1.0 - std::abs(m(s) - peak) / width); };
  auto deriv = [m, peak, width, height](double s) {
    return (m(s) < peak ? 1.0 : -1.0) * height * m.scale / width;
  };
  std::vector<double> breaks;
  const double u = (peak - m.theta0) / m.scale;
  if (u > 0.0 && u < arc.length) breaks.push_back(u);
  return BoundaryFunction::segmented(arc, value, breaks, deriv);
}

BoundaryFunction angular_sine(const BoundaryArc& arc, double frequency, double shift, double amplitude,
                              std::optional<double> theta0) {
  const AngleMap m = angle_map(arc, theta0);
  auto value = [m, frequency, shift, amplitude](double s) { return amplitude * std::sin(frequency * (m(s) - shift)); };
  auto deriv = [m, frequency, shift, amplitude](double s) {
    return amplitude * frequency * m.scale * std::cos(frequency * (m(s) - shift));
  };
  return BoundaryFunction::segmented(arc, value, {}, deriv);
}

BoundaryFunction fmd_load(const ConvexBoundary& rect, double t_half, double b_half, double l_B, double eps) {
  if (rect.kind() != BoundaryKind::Rectangle) throw ValidationError("fmd load", "domain must be a rectangle");
  const BoundingBox bb = rect.bbox();
  const double L = bb.hi.x, h = bb.hi.y;
  if (!(t_half > 0.0 && t_half <= L)) throw ValidationError("fmd load", "need 0 < t <= L");
  if (!(b_half > 0.0 && b_half <= L)) throw ValidationError("fmd load", "need 0 < b <= L");
  if (!(l_B > 0.0)) throw ValidationError("fmd load", "need l_B > 0");
  if (eps < 0.0) throw ValidationError("fmd load", "need eps >= 0");
  const double l_T = b_half * l_B / t_half;
  const double P = rect.total_length();
  const double half = 0.5 * P;
  const double s_top = 2.0 * h, s_left = 2.0 * h + 2.0 * L, s_bottom = 4.0 * h + 2.0 * L;
  const BoundaryArc arc = BoundaryArc::full(rect, 0.0);
  auto base = [=](double s) {
    if (s < s_top) return 2.0 * b_half * l_B;
    if (s < s_left) {
      const double x = L - (s - s_top);
      return l_T * std::min(std::max(x + t_half, 0.0), 2.0 * t_half);
    }
    if (s < s_bottom) return 0.0;
    const double x = -L + (s - s_bottom);
    return l_B * std::min(std::max(x + b_half, 0.0), 2.0 * b_half);
  };
  auto base_slope = [=](double s) {
    if (s < s_top) return 0.0;
    if (s < s_left) {
      const double x = L - (s - s_top);
      return (x > -t_half && x < t_half) ? -l_T : 0.0;
    }
    if (s < s_bottom) return 0.0;
    const double x = -L + (s - s_bottom);
    return (x > -b_half && x < b_half) ? l_B : 0.0;
  };
  const double k = eps / (2.0 * (L + h));
  auto value = [=](double s) {
    if (s >= P) s = 0.0;
    return base(s) + k * std::abs(s - half);
  };
  auto deriv = [=](double s) { return base_slope(s) + (s < half ? -k : k); };
  std::vector<double> breaks{s_top, s_left, s_bottom, s_top + L - t_half, s_top + L + t_half,
                             s_bottom + L - b_half, s_bottom + L + b_half};
  return BoundaryFunction::segmented(arc, value, breaks, deriv);
}

BoundaryFunction piecewise_constant(const ConvexBoundary& b, double s0, double s1, double s2, double a1, double a2,
                                    double eps) {
  if (!(a1 > 0.0 && a2 > 0.0)) throw ValidationError("piecewise constant datum", "alpha_1 and alpha_2 must be positive");
  const double P = b.total_length();
  const double d1 = b.wrap(s1 - s0), d2 = b.wrap(s2 - s0);
  if (!(d1 > 0.0 && d2 > d1)) throw ValidationError("piecewise constant datum", "points must be distinct and ordered");
  const double top = a1 + a2;
  if (eps <= 0.0) {
    const BoundaryArc arc = BoundaryArc::full(b, s0);
    std::vector<Piece> pieces{{0.0, d1, PieceKind::Constant, 0.0, 0.0},
                              {d1, d2, PieceKind::Constant, top, top},
                              {d2, P, PieceKind::Constant, a1, a1}};
    auto value = [d1, d2, top, a1](double s) { return s < d1 ? 0.0 : (s < d2 ? top : a1); };
    return BoundaryFunction(arc, std::move(pieces), value, [](double) { return 0.0; });
  }
  const double min_gap = std::min({d1, d2 - d1, P - d2});
  if (!(eps < min_gap)) throw ValidationError("piecewise constant datum", "ramp width must be below the gaps");
  const double o = 0.5 * d1;
  const BoundaryArc arc = BoundaryArc::full(b, s0 + o);
  const double j1 = d1 - o, j2 = d2 - o, j0 = P - o;
  const double e = 0.5 * eps;
  auto ramp = [e](double s, double c, double from, double to) {
    const double w = std::clamp((s - (c - e)) / (2.0 * e), 0.0, 1.0);
    return from + (to - from) * w;
  };
  auto value = [=](double s) {
    if (s < 0.5 * (j1 + j2)) return ramp(s, j1, 0.0, top);
    if (s < 0.5 * (j2 + j0)) return ramp(s, j2, top, a1);
    return ramp(s, j0, a1, 0.0);
  };
  auto deriv = [=](double s) {
    if (std::abs(s - j1) < e) return top / eps;
    if (std::abs(s - j2) < e) return -a2 / eps;
    if (std::abs(s - j0) < e) return -a1 / eps;
    return 0.0;
  };
  std::vector<double> breaks{j1 - e, j1 + e, j2 - e, j2 + e, j0 - e, j0 + e};
  return BoundaryFunction::segmented(arc, value, breaks, deriv);
}

}  // namespace datum

}  // namespace lgp
