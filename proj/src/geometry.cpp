#include "lgp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lgp/error.hpp"
#include "lgp/numeric.hpp"

namespace lgp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kSuperellipseTable = 16384;

double positive_mod(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

}  // namespace

std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::Circle: return "circle";
    case BoundaryKind::Rectangle: return "rectangle";
    case BoundaryKind::Superellipse: return "superellipse";
    case BoundaryKind::Polyline: return "polyline";
  }
  return "unknown";
}

struct ConvexBoundary::Impl {
  BoundaryKind kind = BoundaryKind::Circle;
  double length = 0.0;
  double diam = 0.0;
  double area = 0.0;
  BoundingBox box;

  double radius = 1.0;

  double p = 4.0, a = 1.0, b = 1.0;
  std::vector<double> s_tab;      // arclength at uniform polar angles
  std::vector<double> speed_tab;  // |dP/dphi| at the same nodes
  double dphi = 0.0;

  std::vector<Point> verts;  // polygon vertices, counter clockwise
  std::vector<double> cum;   // arclength at each vertex, cum.back() == length

  // Superellipse in polar form.
  double se_r(double phi) const {
    const double c = std::abs(std::cos(phi)) / a;
    const double s = std::abs(std::sin(phi)) / b;
    return std::pow(std::pow(c, p) + std::pow(s, p), -1.0 / p);
  }
  Point se_point(double phi) const {
    const double r = se_r(phi);
    return {r * std::cos(phi), r * std::sin(phi)};
  }
  Vec2 se_derivative(double phi) const {
    const double cs = std::cos(phi), sn = std::sin(phi);
    const double c = std::abs(cs) / a, s = std::abs(sn) / b;
    const double g = std::pow(c, p) + std::pow(s, p);
    const double dc = c > 0.0 ? -p * std::pow(c, p - 1.0) * (cs > 0 ? 1.0 : -1.0) * sn / a : 0.0;
    const double ds = s > 0.0 ? p * std::pow(s, p - 1.0) * (sn > 0 ? 1.0 : -1.0) * cs / b : 0.0;
    const double r = std::pow(g, -1.0 / p);
    const double dr = -(1.0 / p) * std::pow(g, -1.0 / p - 1.0) * (dc + ds);
    return {dr * cs - r * sn, dr * sn + r * cs};
  }
  double se_gauge(Point x) const {
    return std::pow(std::pow(std::abs(x.x) / a, p) + std::pow(std::abs(x.y) / b, p), 1.0 / p);
  }
  double se_s_of_phi(double phi) const {
    phi = positive_mod(phi, kTwoPi);
    int k = static_cast<int>(phi / dphi);
    k = std::clamp(k, 0, kSuperellipseTable - 1);
    const double u = (phi - k * dphi) / dphi;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    return h00 * s_tab[k] + h10 * dphi * speed_tab[k] + h01 * s_tab[k + 1] + h11 * dphi * speed_tab[k + 1];
  }
  double se_phi_of_s(double s) const {
    auto it = std::upper_bound(s_tab.begin(), s_tab.end(), s);
    int k = static_cast<int>(it - s_tab.begin()) - 1;
    k = std::clamp(k, 0, kSuperellipseTable - 1);
    const double hs = s_tab[k + 1] - s_tab[k];
    const double u = (s - s_tab[k]) / hs;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    double phi = h00 * (k * dphi) + h10 * hs / speed_tab[k] + h01 * ((k + 1) * dphi) + h11 * hs / speed_tab[k + 1];
    // One Newton step makes the two interpolants mutually consistent.
    phi -= (se_s_of_phi(phi) - s) / norm(se_derivative(phi));
    return phi;
  }

  // Polygon helpers.
  int edge_of(double s) const {
    auto it = std::upper_bound(cum.begin(), cum.end(), s);
    int i = static_cast<int>(it - cum.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(verts.size()) - 1);
  }
  Point vert(int i) const { return verts[static_cast<size_t>(i) % verts.size()]; }
};

// ---------------------------------------------------------------------------
// Construction

ConvexBoundary ConvexBoundary::circle(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("circle radius must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = BoundaryKind::Circle;
  impl->radius = radius;
  impl->length = kTwoPi * radius;
  impl->diam = 2.0 * radius;
  impl->area = std::numbers::pi * radius * radius;
  impl->box = {{-radius, -radius}, {radius, radius}};
  return ConvexBoundary(std::move(impl));
}

namespace {

void finish_polygon(ConvexBoundary::Impl& impl) {
  const size_t n = impl.verts.size();
  impl.cum.assign(n + 1, 0.0);
  double area2 = 0.0;
  impl.box = {impl.verts[0], impl.verts[0]};
  for (size_t i = 0; i < n; ++i) {
    const Point p = impl.verts[i], q = impl.verts[(i + 1) % n];
    impl.cum[i + 1] = impl.cum[i] + dist(p, q);
    area2 += cross(p, q);
    impl.box.lo = {std::min(impl.box.lo.x, p.x), std::min(impl.box.lo.y, p.y)};
    impl.box.hi = {std::max(impl.box.hi.x, p.x), std::max(impl.box.hi.y, p.y)};
  }
  impl.length = impl.cum[n];
  impl.area = 0.5 * area2;
  impl.diam = 0.0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) impl.diam = std::max(impl.diam, dist(impl.verts[i], impl.verts[j]));
}

}  // namespace

ConvexBoundary ConvexBoundary::rectangle(double half_width, double half_height) {
  if (!(half_width > 0.0) || !(half_height > 0.0)) throw Error("rectangle half sides must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = BoundaryKind::Rectangle;
  impl->verts = {{half_width, -half_height}, {half_width, half_height}, {-half_width, half_height},
                 {-half_width, -half_height}};
  finish_polygon(*impl);
  return ConvexBoundary(std::move(impl));
}

ConvexBoundary ConvexBoundary::superellipse(double exponent, double a, double b) {
  if (!(exponent > 1.0) || !(a > 0.0) || !(b > 0.0)) throw Error("superellipse needs exponent > 1 and positive axes");
  auto impl = std::make_shared<Impl>();
  impl->kind = BoundaryKind::Superellipse;
  impl->p = exponent;
  impl->a = a;
  impl->b = b;
  impl->dphi = kTwoPi / kSuperellipseTable;
  impl->s_tab.assign(kSuperellipseTable + 1, 0.0);
  impl->speed_tab.assign(kSuperellipseTable + 1, 0.0);
  using boost::math::quadrature::gauss;
  const Impl& im = *impl;
  auto speed = [&im](double phi) { return norm(im.se_derivative(phi)); };
  for (int k = 0; k <= kSuperellipseTable; ++k) impl->speed_tab[k] = speed(k * impl->dphi);
  for (int k = 0; k < kSuperellipseTable; ++k)
    impl->s_tab[k + 1] = impl->s_tab[k] + gauss<double, 10>::integrate(speed, k * impl->dphi, (k + 1) * impl->dphi);
  impl->length = impl->s_tab.back();
  double rmax = 0.0;
  for (int k = 0; k < kSuperellipseTable; ++k) rmax = std::max(rmax, impl->se_r(k * impl->dphi));
  impl->diam = 2.0 * rmax;
  impl->box = {{-a, -b}, {a, b}};
  auto half_r2 = [&im](double phi) {
    const double r = im.se_r(phi);
    return 0.5 * r * r;
  };
  double area = 0.0;
  for (int q = 0; q < 4; ++q)
    area += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(half_r2, q * kTwoPi / 4, (q + 1) * kTwoPi / 4,
                                                                          15, 1e-14);
  impl->area = area;
  return ConvexBoundary(std::move(impl));
}

ConvexBoundary ConvexBoundary::polyline(std::vector<Point> vertices) {
  if (vertices.size() < 3) throw Error("polyline needs at least three vertices");
  for (const Point& v : vertices)
    if (!is_finite(v)) throw Error("polyline vertex is not finite");
  double area2 = 0.0;
  for (size_t i = 0; i < vertices.size(); ++i) area2 += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
  if (area2 < 0.0) std::reverse(vertices.begin(), vertices.end());
  const size_t n = vertices.size();
  double scale = 0.0;
  for (const Point& v : vertices) scale = std::max(scale, norm(v));
  for (size_t i = 0; i < n; ++i) {
    const Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
    const Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
    if (norm(e0) == 0.0) throw Error("polyline has repeated vertices");
    if (cross(e0, e1) < -1e-12 * scale * scale) throw Error("polyline is not convex");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = BoundaryKind::Polyline;
  impl->verts = std::move(vertices);
  finish_polygon(*impl);
  return ConvexBoundary(std::move(impl));
}

// ---------------------------------------------------------------------------
// Queries

BoundaryKind ConvexBoundary::kind() const { return impl_->kind; }
double ConvexBoundary::total_length() const { return impl_->length; }
bool ConvexBoundary::strictly_convex() const {
  return impl_->kind == BoundaryKind::Circle || impl_->kind == BoundaryKind::Superellipse;
}
double ConvexBoundary::diameter() const { return impl_->diam; }
BoundingBox ConvexBoundary::bbox() const { return impl_->box; }
double ConvexBoundary::area() const { return impl_->area; }

double ConvexBoundary::wrap(double s) const { return positive_mod(s, impl_->length); }

Point ConvexBoundary::point(double s) const {
  const Impl& im = *impl_;
  s = wrap(s);
  switch (im.kind) {
    case BoundaryKind::Circle: {
      const double th = s / im.radius;
      return {im.radius * std::cos(th), im.radius * std::sin(th)};
    }
    case BoundaryKind::Superellipse: return im.se_point(im.se_phi_of_s(s));
    default: {
      const int i = im.edge_of(s);
      const Point p = im.vert(i), q = im.vert(i + 1);
      const double len = im.cum[i + 1] - im.cum[i];
      return p + (q - p) * ((s - im.cum[i]) / len);
    }
  }
}

Vec2 ConvexBoundary::tangent(double s) const {
  const Impl& im = *impl_;
  s = wrap(s);
  switch (im.kind) {
    case BoundaryKind::Circle: {
      const double th = s / im.radius;
      return {-std::sin(th), std::cos(th)};
    }
    case BoundaryKind::Superellipse: return normalized(im.se_derivative(im.se_phi_of_s(s)));
    default: {
      const int i = im.edge_of(s);
      return normalized(im.vert(i + 1) - im.vert(i));
    }
  }
}

Vec2 ConvexBoundary::normal(double s) const { return rotate_minus_90(tangent(s)); }

double ConvexBoundary::param_of(Point p) const {
  const Impl& im = *impl_;
  switch (im.kind) {
    case BoundaryKind::Circle: return wrap(im.radius * std::atan2(p.y, p.x));
    case BoundaryKind::Superellipse: return wrap(im.se_s_of_phi(std::atan2(p.y, p.x)));
    default: {
      double best = std::numeric_limits<double>::infinity(), best_s = 0.0;
      for (size_t i = 0; i < im.verts.size(); ++i) {
        const Segment e{im.vert(static_cast<int>(i)), im.vert(static_cast<int>(i) + 1)};
        const double d = distance_to_segment(p, e);
        if (d < best) {
          best = d;
          const double len = e.length();
          const double lam = std::clamp(dot(p - e.p, e.q - e.p) / (len * len), 0.0, 1.0);
          best_s = im.cum[i] + lam * len;
        }
      }
      return wrap(best_s);
    }
  }
}

double ConvexBoundary::project(Point p) const {
  const Impl& im = *impl_;
  const double tie = 1e-12 * im.diam;
  switch (im.kind) {
    case BoundaryKind::Circle:
      if (norm(p) <= tie) return 0.0;
      return wrap(im.radius * std::atan2(p.y, p.x));
    case BoundaryKind::Superellipse: {
      const int stride = 8;
      std::vector<std::pair<double, int>> cand;
      double best = std::numeric_limits<double>::infinity();
      for (int k = 0; k < kSuperellipseTable; k += stride) {
        const double d = dist(p, im.se_point(k * im.dphi));
        cand.emplace_back(d, k);
        best = std::min(best, d);
      }
      double best_d = std::numeric_limits<double>::infinity(), best_s = 0.0;
      for (const auto& [d, k] : cand) {
        if (d > best + 4.0 * stride * im.dphi * im.diam) continue;
        auto f = [&](double phi) { return dist(p, im.se_point(phi)); };
        const auto [phi, val] = numeric::golden_min(f, (k - stride) * im.dphi, (k + stride) * im.dphi, 1e-15);
        const double s = wrap(im.se_s_of_phi(phi));
        if (val < best_d - tie || (std::abs(val - best_d) <= tie && s < best_s)) {
          best_d = std::min(best_d, val);
          best_s = s;
        }
      }
      return best_s;
    }
    default: {
      double best_d = std::numeric_limits<double>::infinity(), best_s = 0.0;
      for (size_t i = 0; i < im.verts.size(); ++i) {
        const Segment e{im.vert(static_cast<int>(i)), im.vert(static_cast<int>(i) + 1)};
        const double len = e.length();
        const double lam = std::clamp(dot(p - e.p, e.q - e.p) / (len * len), 0.0, 1.0);
        const double d = dist(p, e.at(lam));
        const double s = wrap(im.cum[i] + lam * len);
        if (d < best_d - tie || (std::abs(d - best_d) <= tie && s < best_s)) {
          best_d = std::min(best_d, d);
          best_s = s;
        }
      }
      return best_s;
    }
  }
}

double ConvexBoundary::signed_distance(Point p) const {
  const Impl& im = *impl_;
  switch (im.kind) {
    case BoundaryKind::Circle: return norm(p) - im.radius;
    case BoundaryKind::Superellipse: {
      const double r = norm(p);
      if (r == 0.0) return -im.se_r(0.0);
      const double phi = std::atan2(p.y, p.x);
      const Vec2 nrm = rotate_minus_90(normalized(im.se_derivative(phi)));
      return (r - im.se_r(phi)) * dot(p / r, nrm);
    }
    default: {
      double dmin = std::numeric_limits<double>::infinity();
      bool inside = true;
      for (size_t i = 0; i < im.verts.size(); ++i) {
        const Segment e{im.vert(static_cast<int>(i)), im.vert(static_cast<int>(i) + 1)};
        dmin = std::min(dmin, distance_to_segment(p, e));
        if (cross(normalized(e.q - e.p), p - e.p) < 0.0) inside = false;
      }
      return inside ? -dmin : dmin;
    }
  }
}

bool ConvexBoundary::contains(Point p, double tol) const {
  const Impl& im = *impl_;
  switch (im.kind) {
    case BoundaryKind::Circle: return norm(p) <= im.radius + tol;
    case BoundaryKind::Superellipse: return signed_distance(p) <= tol;
    default:
      for (size_t i = 0; i < im.verts.size(); ++i) {
        const Point a = im.vert(static_cast<int>(i)), b = im.vert(static_cast<int>(i) + 1);
        if (cross(normalized(b - a), p - a) < -tol) return false;
      }
      return true;
  }
}

std::vector<LineHit> ConvexBoundary::line_intersections(Point p, Vec2 dir) const {
  const Impl& im = *impl_;
  std::vector<LineHit> hits;
  const double d2 = dot(dir, dir);
  if (d2 == 0.0) return hits;
  switch (im.kind) {
    case BoundaryKind::Circle: {
      // |p + l d|^2 = r^2
      const double bq = dot(p, dir) / d2;
      const double cq = (dot(p, p) - im.radius * im.radius) / d2;
      const double disc = bq * bq - cq;
      if (disc < 0.0) return hits;
      const double sq = std::sqrt(disc);
      for (double l : {-bq - sq, -bq + sq}) hits.push_back({l, param_of(p + dir * l)});
      if (sq == 0.0) hits.pop_back();
      return hits;
    }
    case BoundaryKind::Superellipse: {
      auto g = [&](double l) { return im.se_gauge(p + dir * l) - 1.0; };
      const double lc = -dot(p, dir) / d2;
      const double span = (2.0 * im.diam + norm(p)) / std::sqrt(d2);
      const double lo = lc - span, hi = lc + span;
      const auto [lm, gm] = numeric::golden_min(g, lo, hi, 1e-15 * (hi - lo));
      if (gm > 0.0) return hits;
      if (gm == 0.0) {
        hits.push_back({lm, param_of(p + dir * lm)});
        return hits;
      }
      const double l1 = numeric::bisect(g, lo, lm);
      const double l2 = numeric::bisect(g, lm, hi);
      hits.push_back({l1, param_of(p + dir * l1)});
      hits.push_back({l2, param_of(p + dir * l2)});
      return hits;
    }
    default: {
      double lin = -std::numeric_limits<double>::infinity(), lout = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < im.verts.size(); ++i) {
        const Point a = im.vert(static_cast<int>(i)), b = im.vert(static_cast<int>(i) + 1);
        const Vec2 n = rotate_plus_90(normalized(b - a));  // inward
        const double c0 = dot(n, p - a), c1 = dot(n, dir);
        if (c1 == 0.0) {
          if (c0 < 0.0) return hits;
          continue;
        }
        const double l = -c0 / c1;
        if (c1 > 0.0)
          lin = std::max(lin, l);
        else
          lout = std::min(lout, l);
      }
      if (!(lin <= lout)) return hits;
      hits.push_back({lin, param_of(p + dir * lin)});
      if (lout > lin) hits.push_back({lout, param_of(p + dir * lout)});
      return hits;
    }
  }
}

std::vector<double> ConvexBoundary::corners() const {
  const Impl& im = *impl_;
  if (im.kind == BoundaryKind::Circle || im.kind == BoundaryKind::Superellipse) return {};
  return {im.cum.begin(), im.cum.end() - 1};
}

double ConvexBoundary::arc_area_integral(double s0, double s1) const {
  const Impl& im = *impl_;
  if (s1 < s0) s1 += im.length;
  if (s1 - s0 >= im.length) return im.area * std::floor((s1 - s0) / im.length + 1e-15) +
                                   arc_area_integral(s0, s0 + std::fmod(s1 - s0, im.length));
  switch (im.kind) {
    case BoundaryKind::Circle: return 0.5 * im.radius * (s1 - s0);
    case BoundaryKind::Superellipse: {
      if (s1 - s0 <= 0.0) return 0.0;
      const double phi0 = im.se_phi_of_s(wrap(s0));
      double phi1 = im.se_phi_of_s(wrap(s1));
      if (wrap(s1) < wrap(s0)) phi1 += kTwoPi;
      auto half_r2 = [&im](double phi) {
        const double r = im.se_r(phi);
        return 0.5 * r * r;
      };
      return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(half_r2, phi0, phi1, 15, 1e-14);
    }
    default: {
      // Walk the vertices in (s0, s1).
      double total = 0.0;
      Point prev = point(s0);
      const size_t n = im.verts.size();
      const double base = std::floor(s0 / im.length) * im.length;
      for (int lap = 0; lap < 3; ++lap) {
        for (size_t i = 0; i < n; ++i) {
          const double sv = base + lap * im.length + im.cum[i];
          if (sv <= s0 || sv >= s1) continue;
          const Point v = im.verts[i];
          total += 0.5 * cross(prev, v);
          prev = v;
        }
      }
      total += 0.5 * cross(prev, point(s1));
      return total;
    }
  }
}

// ---------------------------------------------------------------------------
// Arcs

BoundaryArc BoundaryArc::full(const ConvexBoundary& b, double start) {
  return {b, b.wrap(start), b.total_length()};
}

BoundaryArc BoundaryArc::between(const ConvexBoundary& b, Point from, Point to) {
  const double s0 = b.project(from), s1 = b.project(to);
  double len = b.wrap(s1 - s0);
  if (len == 0.0) throw Error("arc endpoints coincide");
  return {b, s0, len};
}

bool BoundaryArc::is_full() const { return length >= boundary.total_length() * (1.0 - 1e-15); }

bool BoundaryArc::contains(double s, double tol) const {
  if (is_full()) return true;
  const double l = local(s);
  return l <= length + tol || l >= boundary.total_length() - tol;
}

BoundaryArc BoundaryArc::complement() const {
  if (is_full()) throw Error("full boundary has no complementary arc");
  return {boundary, end(), boundary.total_length() - length};
}

// ---------------------------------------------------------------------------
// Regions

ConvexRegion::ConvexRegion(ConvexBoundary domain, std::vector<HalfPlane> cuts)
    : domain_(std::move(domain)), cuts_(std::move(cuts)) {
  const double P = domain_.total_length();
  const double tol = 1e-12 * domain_.diameter();
  std::vector<std::vector<LineHit>> hits(cuts_.size());
  std::vector<double> params;
  for (size_t i = 0; i < cuts_.size(); ++i) {
    hits[i] = domain_.line_intersections(cuts_[i].anchor, cuts_[i].direction);
    for (const LineHit& h : hits[i]) params.push_back(h.s);
  }
  auto inside_cuts = [&](Point p, double t) {
    for (const HalfPlane& h : cuts_)
      if (!h.contains(p, t)) return false;
    return true;
  };
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end(), [&](double x, double y) { return y - x <= 1e-14 * P; }),
               params.end());
  if (params.empty()) {
    if (inside_cuts(domain_.point(0.0), tol)) edges_.push_back({true, {}, 0.0, P});
  } else {
    for (size_t i = 0; i < params.size(); ++i) {
      const double s0 = params[i];
      const double s1 = i + 1 < params.size() ? params[i + 1] : params[0] + P;
      if (s1 - s0 <= 1e-14 * P) continue;
      if (inside_cuts(domain_.point(0.5 * (s0 + s1)), tol)) edges_.push_back({true, {}, s0, s1});
    }
  }
  for (size_t i = 0; i < cuts_.size(); ++i) {
    if (hits[i].size() < 2) continue;
    const HalfPlane& h = cuts_[i];
    bool duplicate = false;
    for (size_t j = 0; j < i; ++j) {
      const HalfPlane& o = cuts_[j];
      if (std::abs(cross(o.direction, h.direction)) < 1e-14 && std::abs(o.signed_distance(h.anchor)) <= tol &&
          dot(o.direction, h.direction) > 0.0)
        duplicate = true;
    }
    if (duplicate) continue;
    double lo = hits[i].front().lambda, hi = hits[i].back().lambda;
    for (size_t j = 0; j < cuts_.size() && lo < hi; ++j) {
      if (j == i) continue;
      const double c0 = cuts_[j].signed_distance(h.anchor);
      const double c1 = cross(cuts_[j].direction, h.direction);
      if (std::abs(c1) < 1e-15) {
        if (c0 < -tol) hi = lo;
        continue;
      }
      const double l = -c0 / c1;
      if (c1 > 0.0)
        lo = std::max(lo, l);
      else
        hi = std::min(hi, l);
    }
    if (hi - lo > 1e-14 * domain_.diameter())
      edges_.push_back({false, {h.anchor + h.direction * lo, h.anchor + h.direction * hi}, 0.0, 0.0});
  }
  double area = 0.0;
  for (const Edge& e : edges_)
    area += e.is_arc ? domain_.arc_area_integral(e.s0, e.s1) : 0.5 * cross(e.segment.p, e.segment.q);
  area_ = std::max(area, 0.0);
  if (area_ <= 1e-14 * domain_.area()) {
    area_ = 0.0;
  }
}

bool ConvexRegion::contains(Point p, double tol) const {
  if (!domain_.contains(p, tol)) return false;
  for (const HalfPlane& h : cuts_)
    if (!h.contains(p, tol)) return false;
  return true;
}

std::vector<Point> ConvexRegion::outline(int samples_per_arc) const {
  std::vector<std::vector<Point>> pieces;
  for (const Edge& e : edges_) {
    std::vector<Point> pts;
    if (e.is_arc) {
      for (int k = 0; k <= samples_per_arc; ++k) pts.push_back(domain_.point(e.s0 + (e.s1 - e.s0) * k / samples_per_arc));
    } else {
      pts = {e.segment.p, e.segment.q};
    }
    pieces.push_back(std::move(pts));
  }
  std::vector<Point> out;
  if (pieces.empty()) return out;
  std::vector<bool> used(pieces.size(), false);
  size_t cur = 0;
  for (size_t n = 0; n < pieces.size(); ++n) {
    used[cur] = true;
    out.insert(out.end(), pieces[cur].begin(), pieces[cur].end());
    double best = std::numeric_limits<double>::infinity();
    size_t next = cur;
    for (size_t j = 0; j < pieces.size(); ++j) {
      if (used[j]) continue;
      const double d = dist(pieces[j].front(), out.back());
      if (d < best) {
        best = d;
        next = j;
      }
    }
    if (next == cur) break;
    cur = next;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distance to an arc

ArcDistanceOracle::ArcDistanceOracle(BoundaryArc arc, int samples)
    : arc_(std::move(arc)), tol_(1e-9 * arc_.boundary.diameter()) {
  if (!(arc_.length > 0.0)) throw Error("distance to an empty arc is undefined");
  const int n = std::max(samples, 16);
  sigma_.resize(n + 1);
  pts_.resize(n + 1);
  for (int k = 0; k <= n; ++k) {
    sigma_[k] = arc_.length * k / n;
    pts_[k] = arc_.point(sigma_[k]);
  }
}

ArcDistance ArcDistanceOracle::query(Point x) const {
  const ConvexBoundary& bd = arc_.boundary;
  const double len = arc_.length;
  std::vector<std::pair<double, double>> cand;  // (distance, sigma)
  cand.emplace_back(dist(x, pts_.front()), 0.0);
  cand.emplace_back(dist(x, pts_.back()), len);
  if (bd.kind() == BoundaryKind::Circle) {
    if (norm(x) > 1e-14 * bd.diameter()) {
      const double s = bd.project(x);
      if (arc_.contains(s)) {
        const double sig = std::min(arc_.local(s), len);
        cand.emplace_back(dist(x, arc_.point(sig)), sig);
      }
    }
  } else {
    const int n = static_cast<int>(pts_.size()) - 1;
    std::vector<double> d(n + 1);
    for (int k = 0; k <= n; ++k) d[k] = dist(x, pts_[k]);
    auto slope = [&](double sig) { return dot(arc_.point(sig) - x, bd.tangent(arc_.global(sig))); };
    for (int k = 0; k <= n; ++k) {
      const bool left_ok = k == 0 || d[k] <= d[k - 1];
      const bool right_ok = k == n || d[k] <= d[k + 1];
      if (!left_ok || !right_ok) continue;
      const double lo = sigma_[std::max(k - 1, 0)], hi = sigma_[std::min(k + 1, n)];
      double sig;
      const double glo = slope(lo), ghi = slope(hi);
      if (glo <= 0.0 && ghi >= 0.0) {
        sig = numeric::bisect(slope, lo, hi);
      } else {
        sig = numeric::golden_min([&](double s) { return dist(x, arc_.point(s)); }, lo, hi, 1e-15 * len).first;
      }
      cand.emplace_back(dist(x, arc_.point(sig)), sig);
    }
  }
  double dmin = std::numeric_limits<double>::infinity();
  for (const auto& c : cand) dmin = std::min(dmin, c.first);
  std::vector<std::pair<double, double>> keep;
  for (const auto& c : cand)
    if (c.first <= dmin + tol_) keep.push_back(c);
  std::sort(keep.begin(), keep.end(), [](const auto& l, const auto& r) { return l.second < r.second; });
  ArcDistance out;
  out.distance = dmin;
  const double merge = 1e-7 * len;
  for (const auto& c : keep) {
    if (!out.sigmas.empty() && c.second - out.sigmas.back() <= merge) {
      // Same minimizer found twice; endpoints take precedence.
      const bool endpoint = c.second == 0.0 || c.second == len;
      if (endpoint) {
        out.sigmas.back() = c.second;
        out.points.back() = arc_.point(c.second);
      }
      continue;
    }
    out.sigmas.push_back(c.second);
    out.points.push_back(c.second == len ? pts_.back() : (c.second == 0.0 ? pts_.front() : arc_.point(c.second)));
  }
  return out;
}

ArcDistance distance_to_arc(Point x, const BoundaryArc& upsilon) { return ArcDistanceOracle(upsilon).query(x); }

// ---------------------------------------------------------------------------
// Classification

namespace {

std::vector<ParamInterval> runs(const std::vector<double>& samples, const std::vector<bool>& flag) {
  std::vector<ParamInterval> out;
  for (size_t k = 0; k < samples.size(); ++k) {
    if (!flag[k]) continue;
    if (k > 0 && flag[k - 1])
      out.back().hi = samples[k];
    else
      out.push_back({samples[k], samples[k]});
  }
  return out;
}

// Boundary of a predicate between lo (true) and hi (false).
template <class Pred>
double refine_switch(Pred&& pred, double lo, double hi, double xtol) {
  while (hi - lo > xtol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DistanceClassification classify_distance_structure(const BoundaryArc& gamma, const BoundaryArc& upsilon,
                                                   int n_samples) {
  if (n_samples < 16) throw Error("classification needs at least 16 samples");
  const ConvexBoundary& bd = gamma.boundary;
  const double P = bd.total_length();
  const double ptol = 1e-9 * P;
  if (upsilon.boundary.total_length() != P || std::abs(gamma.length + upsilon.length - P) > ptol ||
      std::min(bd.wrap(gamma.end() - upsilon.start), P - bd.wrap(gamma.end() - upsilon.start)) > ptol)
    throw ValidationError("complementary arcs", "datum arc and free arc do not partition the boundary");

  const ArcDistanceOracle oracle(upsilon);
  const double ulen = upsilon.length;
  const double tol = oracle.tolerance();
  const Point a = gamma.first(), b = gamma.last();

  auto query = [&](double sig) { return oracle.query(gamma.point(sig)); };
  auto meets_open = [&](const ArcDistance& q) {
    for (double s : q.sigmas)
      if (s > ptol && s < ulen - ptol) return true;
    return false;
  };
  auto attains = [&](double sig, Point end) {
    const Point x = gamma.point(sig);
    return dist(x, end) <= oracle.query(x).distance + tol;
  };

  DistanceClassification out;
  const int n = n_samples;
  std::vector<ArcDistance> q(n - 1);
  std::vector<bool> in_s(n - 1), unique(n - 1), has_a(n - 1), has_b(n - 1);
  for (int k = 1; k < n; ++k) {
    const double sig = gamma.length * k / n;
    out.samples.push_back(sig);
    q[k - 1] = query(sig);
    out.phi.push_back(q[k - 1].sigmas);
    in_s[k - 1] = meets_open(q[k - 1]);
    unique[k - 1] = q[k - 1].sigmas.size() == 1;
    has_a[k - 1] = dist(gamma.point(sig), a) <= q[k - 1].distance + tol;
    has_b[k - 1] = dist(gamma.point(sig), b) <= q[k - 1].distance + tol;
  }
  out.S = runs(out.samples, in_s);
  out.U = runs(out.samples, unique);

  const double xtol = 1e-14 * P;
  for (size_t k = 0; k < q.size(); ++k) {
    if (q[k].sigmas.size() >= 2) {
      out.D.push_back({out.samples[k], q[k].sigmas, q[k].points, in_s[k]});
      continue;
    }
    if (k + 1 >= q.size() || !unique[k] || !unique[k + 1]) continue;
    const double mu_l0 = q[k].sigmas[0], mu_r0 = q[k + 1].sigmas[0];
    if (std::abs(mu_l0 - mu_r0) <= 1e-4 * P) continue;
    double lo = out.samples[k], hi = out.samples[k + 1];
    double mu_lo = mu_l0, mu_hi = mu_r0;
    std::optional<DistancePoint> found;
    while (hi - lo > xtol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const ArcDistance m = query(mid);
      if (m.sigmas.size() >= 2) {
        found = DistancePoint{mid, m.sigmas, m.points, meets_open(m)};
        break;
      }
      if (std::abs(m.sigmas[0] - mu_lo) < std::abs(m.sigmas[0] - mu_hi)) {
        lo = mid;
        mu_lo = m.sigmas[0];
      } else {
        hi = mid;
        mu_hi = m.sigmas[0];
      }
    }
    if (!found) {
      if (std::abs(mu_lo - mu_hi) <= 1e-6 * P) continue;  // fast but continuous motion
      const double mid = 0.5 * (lo + hi);
      std::vector<double> sig = {std::min(mu_lo, mu_hi), std::max(mu_lo, mu_hi)};
      found = DistancePoint{mid, sig, {upsilon.point(sig[0]), upsilon.point(sig[1])}, false};
      for (double s : sig)
        if (s > ptol && s < ulen - ptol) found->meets_open_arc = true;
    }
    out.D.push_back(*found);
  }
  std::sort(out.D.begin(), out.D.end(), [](const auto& l, const auto& r) { return l.sigma < r.sigma; });
  for (const DistancePoint& d : out.D)
    if (d.meets_open_arc) out.D_open.push_back(d);

  // B_a: leading run where a attains the distance; B_b: trailing run for b.
  if (has_a.front()) {
    size_t k = 0;
    while (k + 1 < has_a.size() && has_a[k + 1]) ++k;
    out.s_a = k + 1 < has_a.size()
                  ? refine_switch([&](double s) { return attains(s, a); }, out.samples[k], out.samples[k + 1], xtol)
                  : gamma.length;
    out.B_a = ParamInterval{0.0, out.s_a};
  }
  if (has_b.back()) {
    size_t k = has_b.size() - 1;
    while (k > 0 && has_b[k - 1]) --k;
    out.s_b = k > 0 ? refine_switch([&](double s) { return !attains(s, b); }, out.samples[k - 1], out.samples[k], xtol)
                    : 0.0;
    out.B_b = ParamInterval{out.s_b, gamma.length};
  }
  if (!out.S.empty()) {
    auto in_open = [&](double s) { return meets_open(query(s)); };
    size_t first = 0;
    while (!in_s[first]) ++first;
    size_t last = in_s.size() - 1;
    while (!in_s[last]) --last;
    const double lo0 = first > 0 ? out.samples[first - 1] : 0.0;
    out.inf_S = refine_switch([&](double s) { return !in_open(s); }, lo0, out.samples[first], xtol);
    const double hi0 = last + 1 < in_s.size() ? out.samples[last + 1] : gamma.length;
    out.sup_S = refine_switch(in_open, out.samples[last], hi0, xtol);
    if (out.B_a) out.corollary_gap_a = std::abs(out.s_a - *out.inf_S);
    if (out.B_b) out.corollary_gap_b = std::abs(out.s_b - *out.sup_S);
  }
  return out;
}

double hausdorff(const std::vector<Segment>& a, const std::vector<Segment>& b, int samples_per_segment) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto one_sided = [samples_per_segment](const std::vector<Segment>& from, const std::vector<Segment>& to) {
    double worst = 0.0;
    for (const Segment& s : from) {
      for (int k = 0; k <= samples_per_segment; ++k) {
        const Point p = s.at(static_cast<double>(k) / samples_per_segment);
        double best = std::numeric_limits<double>::infinity();
        for (const Segment& t : to) best = std::min(best, distance_to_segment(p, t));
        worst = std::max(worst, best);
      }
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace lgp
