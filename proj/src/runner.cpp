#include "lgp/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <memory>
#include <random>

#include "lgp/export.hpp"
#include "lgp/rect_solver.hpp"
#include "lgp/tv_oracle.hpp"

namespace lgp {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class InvariantTable {
 public:
  void add(const std::string& name, double value, const std::string& relation, double threshold) {
    bool pass = false;
    if (relation == "<=") pass = value <= threshold;
    else if (relation == ">=") pass = value >= threshold;
    else if (relation == ">") pass = value > threshold;
    rows.push_back({name, value, relation, threshold, pass && std::isfinite(value)});
  }
  std::vector<InvariantRecord> rows;
};

std::vector<Point> sample_domain(const ConvexBoundary& d, int n, std::mt19937_64& rng) {
  const BoundingBox box = d.bbox();
  std::uniform_real_distribution<double> ux(box.lo.x, box.hi.x), uy(box.lo.y, box.hi.y);
  std::vector<Point> pts;
  pts.reserve(n);
  while (static_cast<int>(pts.size()) < n) {
    const Point p{ux(rng), uy(rng)};
    if (d.signed_distance(p) < 0.0) pts.push_back(p);
  }
  return pts;
}

// A level boundary whose segments close up into a polygon.
bool forms_polygon(const LevelLine& l, double tol) {
  if (l.segments.size() < 3) return false;
  for (const Segment& s : l.segments)
    for (Point end : {s.p, s.q}) {
      int met = 0;
      for (const Segment& o : l.segments) met += (dist(end, o.p) <= tol) + (dist(end, o.q) <= tol);
      if (met < 2) return false;
    }
  return true;
}

double max_pairing_gap(const ChordFlux& q, const TraceMeasure& g, const std::vector<TestFunction>& phis) {
  double worst = 0.0;
  for (const TestFunction& phi : phis)
    worst = std::max(worst, std::abs(pair_flux_gradient(q, phi) - pair(g, phi.value)) / (1.0 + phi.lipschitz));
  return worst;
}

json point_json(Point p) { return json::array({p.x, p.y}); }

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void diff_walk(const json& a, const json& b, const std::string& path, ReportDiff& d) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    const double abs = std::abs(x - y);
    const double rel = abs / std::max({std::abs(x), std::abs(y), 1e-300});
    if (abs > d.max_abs) {
      d.max_abs = abs;
      d.worst_field = path;
    }
    if (abs > 0.0) d.max_rel = std::max(d.max_rel, rel);
    return;
  }
  if (a.type() != b.type()) {
    d.mismatched.push_back(path + ": type differs");
    return;
  }
  if (a.is_object()) {
    // Wall times and the artifact directory do not describe the result.
    auto ignored = [&](const std::string& k) { return k == "timings" || path + "/" + k == "/scenario/output"; };
    for (const auto& [k, v] : a.items()) {
      if (ignored(k)) continue;
      if (!b.contains(k)) d.mismatched.push_back(path + "/" + k + ": missing in second report");
      else diff_walk(v, b.at(k), path + "/" + k, d);
    }
    for (const auto& [k, v] : b.items())
      if (!ignored(k) && !a.contains(k)) d.mismatched.push_back(path + "/" + k + ": missing in first report");
  } else if (a.is_array()) {
    if (a.size() != b.size()) {
      d.mismatched.push_back(path + ": array sizes " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) diff_walk(a[i], b[i], path + "/" + std::to_string(i), d);
  } else if (a != b) {
    d.mismatched.push_back(path + ": " + a.dump() + " vs " + b.dump());
  }
}

}  // namespace

bool RunReport::all_pass() const {
  return std::all_of(invariants.begin(), invariants.end(), [](const InvariantRecord& r) { return r.pass; });
}

Solved solve_scenario(const Scenario& s) {
  const BoundaryFunction& f = *s.datum;
  const SolveOptions opt{.t_samples = s.tgrid};
  Solved out;
  switch (s.solver) {
    case SolverId::Case1: out.family = solve_case1(f, opt); break;
    case SolverId::Case2: out.family = solve_case2(f, opt); break;
    case SolverId::Case3: out.family = solve_case3(f, opt); break;
    case SolverId::Rectangle: {
      auto rs = std::make_shared<RectSolution>(f);
      out.family = solve_chord_family(f, opt);
      out.value = [rs](Point p) { return rs->value(p); };
      return out;
    }
    case SolverId::Piecewise: {
      const PiecewiseParams& p = *s.piecewise;
      out.family = p.eps > 0.0 ? solve_chord_family(f, opt)
                               : solve_piecewise_constant(s.domain, p.s0, p.s1, p.s2, p.a1, p.a2, opt);
      break;
    }
    case SolverId::FmdLoad: {
      const BoundingBox box = s.domain.bbox();
      auto sol = std::make_shared<FmdLoadSolution>(box.hi.x, box.hi.y, s.fmd->t_half, s.fmd->b_half, s.fmd->l_B);
      out.family = solve_chord_family(f, opt);
      out.value = [sol](Point p) { return sol->value(p); };
      return out;
    }
  }
  auto fam = std::make_shared<const LevelFamily>(out.family);
  out.value = [fam](Point p) { return evaluate(*fam, p); };
  return out;
}

json scenario_echo(const Scenario& s) {
  json e = s.config;
  e["name"] = s.name;
  e["grid"] = s.grid;
  e["tgrid"] = s.tgrid;
  e["seed"] = s.seed;
  e["output"] = s.output;
  return e;
}

RunReport run_scenario(const Scenario& s, bool write_artifacts) {
  const auto t_start = Clock::now();
  json timings;

  auto t0 = Clock::now();
  const Solved solved = solve_scenario(s);
  const LevelFamily& fam = solved.family;
  const BoundaryFunction& f = fam.datum ? *fam.datum : *s.datum;
  timings["solve"] = seconds_since(t0);

  t0 = Clock::now();
  std::mt19937_64 rng(s.seed);
  InvariantTable inv;
  const double range = f.sup() - f.inf();
  const CoareaResult tv = coarea_tv(fam);

  // Range of the solution.
  const std::vector<Point> pts = sample_domain(s.domain, s.range_samples, rng);
  {
    const double tol = f.level_tolerance();
    long bad = 0;
    for (const Point& p : pts) {
      const double u = evaluate(fam, p);
      if (!(u >= f.inf() - tol && u <= f.sup() + tol)) ++bad;
    }
    inv.add("range_violations", static_cast<double>(bad), "<=", 0.0);
  }

  // Structure of the level family.
  inv.add("nesting_violations", static_cast<double>(check_nesting(fam).violations), "<=", 0.0);
  inv.add("crossing_violations", static_cast<double>(check_disjoint(fam).violations), "<=", 0.0);
  inv.add("boundary_contact_violations", static_cast<double>(check_boundary_contact(fam, f).violations), "<=", 0.0);
  if (fam.gamma && !fam.gamma->is_full()) inv.add("orthogonality_defect", check_orthogonality(fam).worst, "<=", 1e-3);
  {
    const double tol = 1e-9 * s.domain.diameter();
    long polys = 0;
    for (const LevelLine& l : fam.lines) polys += forms_polygon(l, tol);
    inv.add("closed_level_boundaries", static_cast<double>(polys), "<=", 0.0);
  }

  // Trace identity of the dual flux.
  const ChordFlux q = du_to_flux(fam);
  const bool partial = fam.gamma && !fam.gamma->is_full();
  std::vector<TestFunction> phis;
  for (int k = 0; k < s.pairing_functions; ++k) phis.push_back(random_polynomial(rng, s.domain));
  json pairing{{"functions", phis.size()}};
  if (!phis.empty()) {
    const TraceMeasure g = tangential_derivative(partial ? extended_trace(fam) : f);
    const double gap = max_pairing_gap(q, g, phis);
    pairing["max_gap"] = gap;
    inv.add("pairing_gap", gap, "<=", s.pairing_tolerance);
    if (partial) {
      std::vector<TestFunction> off;
      for (int k = 0; k < std::min(10, s.pairing_functions); ++k) off.push_back(vanish_off_arc(phis[k], *fam.gamma));
      const double gap_off = max_pairing_gap(q, tangential_derivative(f), off);
      pairing["off_arc_functions"] = off.size();
      pairing["off_arc_max_gap"] = gap_off;
      inv.add("pairing_gap_off_arc", gap_off, "<=", s.pairing_tolerance);
    }
  }

  // Closed forms against the level family.
  json extra = json::object();
  const int n_cmp = std::min<int>(10000, static_cast<int>(pts.size()));
  if (s.solver == SolverId::Rectangle || s.solver == SolverId::FmdLoad) {
    double worst = 0.0;
    for (int k = 0; k < n_cmp; ++k) worst = std::max(worst, std::abs(evaluate(fam, pts[k]) - solved.value(pts[k])));
    // Between grid levels the family interpolates, so one level spacing is the
    // resolution next to plateaus.
    inv.add("family_vs_closed_form", worst / range, "<=", 1.0 / (s.tgrid - 1));
  }
  if (s.solver == SolverId::Rectangle) {
    const RectSolution rs(f);
    const std::vector<Point> a = sample_domain(s.domain, s.modulus_pairs, rng);
    const std::vector<Point> b = sample_domain(s.domain, s.modulus_pairs, rng);
    long bad = 0;
    double slack = std::numeric_limits<double>::infinity();
    for (int k = 0; k < s.modulus_pairs; ++k) {
      const double lhs = std::abs(rs.value(a[k]) - rs.value(b[k]));
      const double rhs = rs.modulus_bound(a[k], b[k]);
      slack = std::min(slack, rhs - lhs);
      if (lhs > rhs + 1e-12 * range) ++bad;
    }
    extra["modulus"] = {{"pairs", s.modulus_pairs}, {"min_slack", s.modulus_pairs ? slack : 0.0}};
    inv.add("modulus_violations", static_cast<double>(bad), "<=", 0.0);
  }
  if (s.solver == SolverId::FmdLoad) {
    const BoundingBox box = s.domain.bbox();
    const FmdLoadSolution sol(box.hi.x, box.hi.y, s.fmd->t_half, s.fmd->b_half, s.fmd->l_B);
    inv.add("load_equilibrium", std::abs(sol.equilibrium_residual()), "<=", 1e-12);
    json fmd{{"top_load", sol.top_load()}, {"max_value", sol.max_value()}};
    if (s.fmd->eps > 0.0) {
      const RectSolution perturbed(sol.datum(s.fmd->eps));
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (int k = 0; k < n_cmp; ++k) {
        const double d = perturbed.value(pts[k]) - sol.value(pts[k]);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      fmd["eps"] = s.fmd->eps;
      fmd["perturbation_min"] = lo;
      fmd["perturbation_max"] = hi;
      inv.add("perturbation_lower", lo, ">=", -1e-12);
      inv.add("perturbation_upper", hi, "<=", s.fmd->eps + 1e-12);
    }
    extra["fmd_load"] = fmd;
  }

  // Stated expectations.
  for (const Expectation& e : s.expect) {
    double err = std::numeric_limits<double>::infinity();
    if (e.name == "coarea_tv") {
      err = std::abs(tv.value - e.values[0]);
    } else if (e.name == "tau") {
      if (fam.tau) err = std::abs(*fam.tau - e.values[0]);
    } else if (e.name == "fat_value") {
      std::vector<double> got;
      for (const FatRegion& r : fam.fat) got.push_back(r.value);
      std::vector<double> want = e.values;
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      if (got.size() == want.size()) {
        err = 0.0;
        for (std::size_t k = 0; k < got.size(); ++k) err = std::max(err, std::abs(got[k] - want[k]));
      }
    } else if (e.name == "value_at") {
      err = std::abs(solved.value(*e.point) - e.values[0]);
    }
    inv.add("expect_" + e.name, err, "<=", e.tolerance);
  }
  timings["invariants"] = seconds_since(t0);

  // Discrete oracle.
  t0 = Clock::now();
  json oracle = nullptr;
  std::optional<TvResult> tvr;
  std::optional<ScalarField> geometric;
  if (s.grid > 0) {
    tvr = minimize_tv_dirichlet(f, s.grid);
    geometric = rasterize(solved.value, tvr->field.grid);
    const CompareMetrics cm = compare(*geometric, tvr->field);
    const double gap = std::abs(tvr->energy - tv.value) / std::max(tv.value, 1e-300);
    oracle = {{"grid", s.grid},
              {"energy", tvr->energy},
              {"energy_rel_gap", gap},
              {"iterations", tvr->iterations},
              {"converged", tvr->converged},
              {"l1", cm.l1},
              {"l1_rel", cm.l1 / range},
              {"linf", cm.linf},
              {"geometric_discrete_tv", discrete_tv(*geometric)}};
    if (tv.value > 0.0) inv.add("oracle_energy_gap", gap, "<=", s.oracle_tolerance);
    inv.add("oracle_l1", cm.l1 / range, "<=", s.oracle_tolerance);
  }
  timings["oracle"] = seconds_since(t0);

  RunReport rep;
  rep.invariants = inv.rows;

  json fat = json::array();
  for (const FatRegion& r : fam.fat) fat.push_back({{"value", r.value}, {"area", r.area}, {"label", r.label}});
  json classification = nullptr;
  if (fam.classification) {
    const DistanceClassification& c = *fam.classification;
    json D = json::array();
    for (const DistancePoint& d : c.D) {
      const Point x = fam.gamma->point(d.sigma);
      D.push_back({{"sigma", d.sigma}, {"point", point_json(x)}, {"minimizers", d.minimizers.size()}});
    }
    auto intervals = [](const std::vector<ParamInterval>& v) {
      json a = json::array();
      for (const ParamInterval& i : v) a.push_back(json::array({i.lo, i.hi}));
      return a;
    };
    classification = {{"D", D}, {"S", intervals(c.S)}, {"U", intervals(c.U)}};
    if (c.B_a) classification["B_a"] = json::array({c.B_a->lo, c.B_a->hi});
    if (c.B_b) classification["B_b"] = json::array({c.B_b->lo, c.B_b->hi});
  }
  json table = json::array();
  for (const InvariantRecord& r : rep.invariants)
    table.push_back({{"name", r.name},
                     {"value", r.value},
                     {"relation", r.relation},
                     {"threshold", r.threshold},
                     {"pass", r.pass}});

  rep.json = {{"schema_version", "lgp.report/1"},
              {"scenario", scenario_echo(s)},
              {"seed", s.seed},
              {"solver", to_string(s.solver)},
              {"case_id", fam.case_id},
              {"datum", {{"inf", f.inf()}, {"sup", f.sup()}}},
              {"levels", {{"t_grid", fam.t_grid.size()}, {"distinct", distinct_lines(fam).size()}}},
              {"tau", optional_json(fam.tau)},
              {"critical", fam.critical},
              {"fat", fat},
              {"classification", classification},
              {"tv", {{"coarea", tv.value}, {"coarea_error", tv.error_estimate}, {"flux_mass", q.mass}, {"oracle", oracle}}},
              {"pairing", pairing},
              {"checks", extra},
              {"invariants", table},
              {"pass", rep.all_pass()}};

  if (write_artifacts) {
    t0 = Clock::now();
    std::filesystem::create_directories(s.output);
    const std::filesystem::path dir(s.output);
    write_json((dir / "levels.json").string(), levels_json(fam));
    write_json((dir / "flux.json").string(), flux_json(q));
    if (!geometric) geometric = rasterize(solved.value, make_grid(f, 64));
    write_field_csv((dir / "field.csv").string(), *geometric, tvr ? &tvr->field : nullptr);
    emit_svg(fam, s.domain, (dir / "plot.svg").string());
    timings["artifacts"] = seconds_since(t0);
  }
  timings["total"] = seconds_since(t_start);
  rep.json["timings"] = timings;
  if (write_artifacts) write_json((std::filesystem::path(s.output) / "report.json").string(), rep.json);
  return rep;
}

ReportDiff compare_reports(const json& a, const json& b) {
  ReportDiff d;
  diff_walk(a, b, "", d);
  return d;
}

}  // namespace lgp
