#include "lgp/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lgp/error.hpp"

namespace lgp {

using nlohmann::json;

namespace {

bool same_segments(const LevelLine& a, const LevelLine& b, double tol) {
  if (a.segments.size() != b.segments.size()) return false;
  for (std::size_t k = 0; k < a.segments.size(); ++k)
    if (dist(a.segments[k].p, b.segments[k].p) > tol || dist(a.segments[k].q, b.segments[k].q) > tol) return false;
  return true;
}

json point_json(Point p) { return json::array({p.x, p.y}); }

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return std::string(buf) == "-0.000" ? "0.000" : buf;
}

std::string points_attr(const std::vector<Point>& pts) {
  std::string s;
  for (const Point& p : pts) {
    if (!s.empty()) s += ' ';
    s += fmt3(p.x) + "," + fmt3(p.y);
  }
  return s;
}

// Blue at the bottom of the range to red at the top.
std::string level_colour(double u) {
  u = std::clamp(u, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(40 + 200 * u));
  const int g = static_cast<int>(std::lround(60 + 80 * (1.0 - std::abs(2.0 * u - 1.0))));
  const int b = static_cast<int>(std::lround(220 - 190 * u));
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

std::vector<Point> domain_outline(const ConvexBoundary& d, int samples = 512) {
  std::vector<double> s;
  const double P = d.total_length();
  for (int k = 0; k < samples; ++k) s.push_back(P * k / samples);
  for (double c : d.corners()) s.push_back(c);
  std::sort(s.begin(), s.end());
  std::vector<Point> pts;
  for (double v : s) pts.push_back(d.point(v));
  return pts;
}

}  // namespace

std::vector<DistinctLine> distinct_lines(const LevelFamily& family) {
  const double tol = 1e-12 * family.domain.diameter();
  std::vector<DistinctLine> out;
  std::size_t last = family.lines.size();  // grid index of the previous merged line
  for (std::size_t k = 0; k < family.lines.size(); ++k) {
    const LevelLine& l = family.lines[k];
    if (l.extent != LevelLine::Extent::Segments || l.segments.empty()) continue;
    if (last + 1 == k && same_segments(*out.back().line, l, tol)) {
      out.back().t_hi = l.t;
    } else {
      out.push_back({l.t, l.t, &l});
    }
    last = k;
  }
  return out;
}

json levels_json(const LevelFamily& family) {
  json lines = json::array();
  for (const DistinctLine& d : distinct_lines(family)) {
    json segs = json::array();
    for (const Segment& s : d.line->segments) segs.push_back(json::array({point_json(s.p), point_json(s.q)}));
    lines.push_back({{"t", d.t_lo}, {"t_hi", d.t_hi}, {"kind", to_string(d.line->kind)}, {"segments", segs}});
  }
  json fat = json::array();
  for (const FatRegion& r : family.fat) {
    json outline = json::array();
    for (const Point& p : r.region.outline()) outline.push_back(point_json(p));
    fat.push_back({{"value", r.value}, {"area", r.area}, {"label", r.label}, {"outline", outline}});
  }
  return {{"schema", "lgp.levels/1"}, {"solver", family.solver}, {"lines", lines}, {"fat", fat}};
}

json flux_json(const ChordFlux& q) {
  json segs = json::array();
  for (const auto& piece : q.pieces) {
    const Segment& s = piece.segment;
    const double len = s.length();
    const Vec2 dir = len > 0.0 ? (s.q - s.p) / len : Vec2{};
    segs.push_back({{"p", point_json(s.p)}, {"q", point_json(s.q)}, {"dir", point_json(dir)}, {"weight", piece.weight}});
  }
  return {{"schema", "lgp.flux/1"}, {"mass", q.mass}, {"segments", segs}};
}

void write_field_csv(const std::string& path, const ScalarField& geometric, const ScalarField* oracle) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  const RasterGrid& g = *geometric.grid;
  out.precision(17);
  out << "# nx=" << g.nx << " ny=" << g.ny << " spacing=" << g.spacing << " origin=" << g.origin.x << ","
      << g.origin.y << "\n";
  out << "i,j,x,y,kind,u" << (oracle ? ",u_oracle" : "") << "\n";
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int k = g.index(i, j);
      const Point p = g.node(i, j);
      const char* kind = g.kind[k] == RasterGrid::Node::Inside ? "inside"
                         : g.kind[k] == RasterGrid::Node::Dirichlet ? "dirichlet"
                                                                    : "outside";
      out << i << ',' << j << ',' << p.x << ',' << p.y << ',' << kind << ',';
      if (g.active(k)) out << geometric.values[k];
      if (oracle) {
        out << ',';
        if (g.active(k)) out << oracle->values[k];
      }
      out << '\n';
    }
  if (!out) throw Error("error writing " + path);
}

std::string svg_text(const LevelFamily& family, const ConvexBoundary& domain, SvgStats* stats, int max_lines) {
  const BoundingBox box = domain.bbox();
  const double w = box.hi.x - box.lo.x, h = box.hi.y - box.lo.y;
  const double pad = 0.05 * std::max(w, h);
  const double stroke = 0.004 * std::max(w, h);
  SvgStats st;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt3(box.lo.x - pad) << ' '
      << fmt3(-box.hi.y - pad) << ' ' << fmt3(w + 2 * pad) << ' ' << fmt3(h + 2 * pad) << "\" width=\"600\" height=\""
      << static_cast<int>(std::lround(600 * (h + 2 * pad) / (w + 2 * pad))) << "\">\n";
  svg << "<defs><pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"" << fmt3(6 * stroke)
      << "\" height=\"" << fmt3(6 * stroke) << "\" patternTransform=\"rotate(45)\"><path d=\"M0,0 V"
      << fmt3(6 * stroke) << "\" stroke=\"#555555\" stroke-width=\"" << fmt3(stroke) << "\"/></pattern></defs>\n";
  // Flip y so that coordinates stay in user units.
  svg << "<g transform=\"scale(1,-1)\">\n";

  for (const FatRegion& r : family.fat) {
    svg << "<polygon class=\"fat\" data-value=\"" << r.value << "\" points=\"" << points_attr(r.region.outline())
        << "\" fill=\"url(#hatch)\" stroke=\"none\"/>\n";
    ++st.regions;
  }

  const std::vector<DistinctLine> lines = distinct_lines(family);
  std::vector<bool> keep(lines.size(), false);
  const std::size_t stride = std::max<std::size_t>(1, (lines.size() + max_lines - 1) / std::max(1, max_lines));
  for (std::size_t k = 0; k < lines.size(); k += stride) keep[k] = true;
  std::vector<double> critical = family.critical;
  if (family.tau) critical.push_back(*family.tau);
  for (std::size_t k = 0; k < lines.size(); ++k)
    for (double c : critical)
      if (lines[k].t_lo <= c && c <= lines[k].t_hi) keep[k] = true;
  const double span = family.sup > family.inf ? family.sup - family.inf : 1.0;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    if (!keep[k]) continue;
    const LevelLine& l = *lines[k].line;
    const bool is_tau = family.tau && lines[k].t_lo <= *family.tau && *family.tau <= lines[k].t_hi;
    for (const Segment& s : l.segments) {
      svg << "<line class=\"level " << to_string(l.kind) << (is_tau ? " tau" : "") << "\" data-t=\"" << l.t
          << "\" x1=\"" << fmt3(s.p.x) << "\" y1=\"" << fmt3(s.p.y) << "\" x2=\"" << fmt3(s.q.x) << "\" y2=\""
          << fmt3(s.q.y) << "\" stroke=\"" << (is_tau ? "#000000" : level_colour((l.t - family.inf) / span))
          << "\" stroke-width=\"" << fmt3(is_tau ? 2 * stroke : stroke) << "\"/>\n";
      ++st.lines;
    }
  }

  svg << "<polygon class=\"domain\" points=\"" << points_attr(domain_outline(domain))
      << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"" << fmt3(stroke) << "\"/>\n";
  if (family.gamma && !family.gamma->is_full()) {
    const BoundaryArc ups = family.gamma->complement();
    std::vector<Point> pts;
    for (int k = 0; k <= 128; ++k) pts.push_back(ups.point(ups.length * k / 128.0));
    svg << "<polyline class=\"free-arc\" points=\"" << points_attr(pts)
        << "\" fill=\"none\" stroke=\"#2a9d8f\" stroke-width=\"" << fmt3(3 * stroke) << "\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  if (stats) *stats = st;
  return svg.str();
}

SvgStats emit_svg(const LevelFamily& family, const ConvexBoundary& domain, const std::string& path, int max_lines) {
  SvgStats st;
  const std::string text = svg_text(family, domain, &st, max_lines);
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("error writing " + path);
  return st;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error("error writing " + path);
}

}  // namespace lgp
