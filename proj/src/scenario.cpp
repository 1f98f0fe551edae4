#include "lgp/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lgp/rect_solver.hpp"
#include "lgp/swz_solver.hpp"

namespace lgp {

using nlohmann::json;

std::string to_string(SolverId id) {
  switch (id) {
    case SolverId::Case1: return "case1";
    case SolverId::Case2: return "case2";
    case SolverId::Case3: return "case3";
    case SolverId::Rectangle: return "rectangle";
    case SolverId::Piecewise: return "piecewise";
    case SolverId::FmdLoad: return "fmd_load";
  }
  return "?";
}

SolverId solver_from_string(const std::string& s) {
  for (SolverId id : {SolverId::Case1, SolverId::Case2, SolverId::Case3, SolverId::Rectangle, SolverId::Piecewise,
                      SolverId::FmdLoad})
    if (to_string(id) == s) return id;
  throw ScenarioError("/solver", "unknown solver id '" + s +
                                     "' (expected case1, case2, case3, rectangle, piecewise or fmd_load)");
}

namespace {

// Recursive descent over: sum := prod (('+'|'-') prod)*, prod := unary
// (('*'|'/') unary)*, unary := '-' unary | power, power := atom ('^' unary)?
class ExprParser {
 public:
  explicit ExprParser(const std::string& text) : s_(text) {}

  double parse() {
    const double v = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument(what + " at offset " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  double sum() {
    double v = prod();
    for (;;) {
      if (eat('+')) v += prod();
      else if (eat('-')) v -= prod();
      else return v;
    }
  }
  double prod() {
    double v = unary();
    for (;;) {
      if (eat('*')) v *= unary();
      else if (eat('/')) v /= unary();
      else return v;
    }
  }
  double unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    const double base = atom();
    if (eat('^')) return std::pow(base, unary());
    return base;
  }
  double atom() {
    skip();
    if (eat('(')) {
      const double v = sum();
      if (!eat(')')) fail("missing ')'");
      return v;
    }
    if (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      const std::size_t b = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string name = s_.substr(b, pos_ - b);
      if (name == "pi") return std::numbers::pi;
      double (*fn)(double) = nullptr;
      if (name == "sqrt") fn = [](double x) { return std::sqrt(x); };
      else if (name == "sin") fn = [](double x) { return std::sin(x); };
      else if (name == "cos") fn = [](double x) { return std::cos(x); };
      else if (name == "abs") fn = [](double x) { return std::abs(x); };
      else fail("unknown name '" + name + "'");
      if (!eat('(')) fail("expected '(' after " + name);
      const double arg = sum();
      if (!eat(')')) fail("missing ')'");
      return fn(arg);
    }
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  std::string s_;
  std::size_t pos_ = 0;
};

// Field access with JSON pointer diagnostics.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return j_.is_object() && j_.contains(key); }
  Node at(const std::string& key) const {
    if (!j_.is_object()) throw ScenarioError(path_, "expected an object");
    if (!j_.contains(key)) throw ScenarioError(path_ + "/" + key, "missing required field");
    return {j_.at(key), path_ + "/" + key};
  }
  Node at(std::size_t i) const {
    if (!j_.is_array() || i >= j_.size()) throw ScenarioError(path_ + "/" + std::to_string(i), "missing entry");
    return {j_.at(i), path_ + "/" + std::to_string(i)};
  }
  std::size_t size() const {
    if (!j_.is_array()) throw ScenarioError(path_, "expected an array");
    return j_.size();
  }

  double number() const {
    if (j_.is_number()) return j_.get<double>();
    if (j_.is_string()) {
      try {
        return eval_expression(j_.get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ScenarioError(path_, e.what());
      }
    }
    throw ScenarioError(path_, "expected a number or an expression string");
  }
  double number(const std::string& key, double fallback) const { return has(key) ? at(key).number() : fallback; }
  double positive(const std::string& key) const {
    const double v = at(key).number();
    if (!(v > 0.0)) throw ScenarioError(path_ + "/" + key, "must be positive");
    return v;
  }
  int integer(const std::string& key, int fallback, int lo) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ScenarioError(path_ + "/" + key, "expected an integer");
    const long long n = v.get<long long>();
    if (n < lo) throw ScenarioError(path_ + "/" + key, "must be at least " + std::to_string(lo));
    return static_cast<int>(n);
  }
  std::string string(const std::string& key) const {
    const Node n = at(key);
    if (!n.j_.is_string()) throw ScenarioError(n.path_, "expected a string");
    return n.j_.get<std::string>();
  }
  Point point() const {
    if (size() != 2) throw ScenarioError(path_, "expected a point [x, y]");
    return {at(std::size_t{0}).number(), at(std::size_t{1}).number()};
  }

 private:
  const json& j_;
  std::string path_;
};

ConvexBoundary parse_domain(const Node& n) {
  const std::string kind = n.string("kind");
  if (kind == "circle") return ConvexBoundary::circle(n.positive("radius"));
  if (kind == "rectangle") return ConvexBoundary::rectangle(n.positive("L"), n.positive("h"));
  if (kind == "superellipse") {
    const double p = n.at("p").number();
    if (!(p >= 2.0)) throw ScenarioError(n.path() + "/p", "exponent must be at least 2");
    return ConvexBoundary::superellipse(p, n.number("a", 1.0), n.number("b", 1.0));
  }
  if (kind == "polyline") {
    const Node pts = n.at("points");
    std::vector<Point> v;
    for (std::size_t i = 0; i < pts.size(); ++i) v.push_back(pts.at(i).point());
    if (v.size() < 3) throw ScenarioError(pts.path(), "a polygon needs at least three vertices");
    try {
      return ConvexBoundary::polyline(std::move(v));
    } catch (const Error& e) {
      throw ScenarioError(pts.path(), e.what());
    }
  }
  throw ScenarioError(n.path() + "/kind", "unknown domain kind '" + kind +
                                              "' (expected circle, rectangle, superellipse or polyline)");
}

// Boundary parameter of the point at polar angle theta seen from the origin.
double param_at_angle(const ConvexBoundary& b, double theta, const std::string& path) {
  const auto hits = b.line_intersections({0.0, 0.0}, {std::cos(theta), std::sin(theta)});
  for (auto it = hits.rbegin(); it != hits.rend(); ++it)
    if (it->lambda > 0.0) return it->s;
  throw ScenarioError(path, "the origin must lie inside the domain to use angles");
}

double parse_location(const ConvexBoundary& b, const Node& n, const std::string& angle_key,
                      const std::string& point_key) {
  if (n.has(angle_key)) return param_at_angle(b, n.at(angle_key).number(), n.path() + "/" + angle_key);
  if (n.has(point_key)) return b.project(n.at(point_key).point());
  throw ScenarioError(n.path() + "/" + point_key, "missing required field (or " + angle_key + ")");
}

BoundaryArc parse_arc(const ConvexBoundary& b, const Node& n) {
  const double s0 = parse_location(b, n, "theta_from", "from");
  const double s1 = parse_location(b, n, "theta_to", "to");
  const double len = b.wrap(s1 - s0);
  if (!(len > 0.0)) throw ScenarioError(n.path(), "arc ends coincide");
  return {b, s0, len};
}

std::optional<double> optional_number(const Node& n, const std::string& key) {
  if (!n.has(key)) return std::nullopt;
  return n.at(key).number();
}

std::vector<double> atom_params(const ConvexBoundary& b, const Node& n) {
  std::vector<double> s;
  if (n.has("theta")) {
    const Node t = n.at("theta");
    for (std::size_t i = 0; i < t.size(); ++i) s.push_back(param_at_angle(b, t.at(i).number(), t.at(i).path()));
  } else {
    const Node t = n.at("s");
    for (std::size_t i = 0; i < t.size(); ++i) s.push_back(b.wrap(t.at(i).number()));
  }
  if (s.size() != 3) throw ScenarioError(n.path() + (n.has("theta") ? "/theta" : "/s"), "expected three points");
  // Increasing order starting at the first point.
  s[1] = s[0] + b.wrap(s[1] - s[0]);
  s[2] = s[0] + b.wrap(s[2] - s[0]);
  if (!(s[1] > s[0] && s[2] > s[1]))
    throw ScenarioError(n.path(), "the three points must be distinct and positively ordered");
  return s;
}

void parse_datum(Scenario& sc, const Node& n) {
  const BoundaryArc arc = sc.gamma ? *sc.gamma : BoundaryArc::full(sc.domain);
  const std::string kind = n.string("kind");
  if (kind == "samples") {
    const Node v = n.at("values");
    std::vector<double> values;
    for (std::size_t i = 0; i < v.size(); ++i) values.push_back(v.at(i).number());
    try {
      sc.datum = BoundaryFunction::from_samples(arc, std::move(values));
    } catch (const ValidationError& e) {
      throw ScenarioError(v.path(), e.what());
    }
    return;
  }
  if (kind != "analytic")
    throw ScenarioError(n.path() + "/kind", "unknown datum kind '" + kind + "' (expected analytic or samples)");

  const std::string id = n.string("expr_id");
  try {
    if (id == "linear") {
      sc.datum = datum::affine(arc, n.at("cx").number(), n.at("cy").number(), n.number("c0", 0.0),
                               n.number("power", 1.0));
    } else if (id == "angular-affine") {
      if (n.has("from_value")) {
        const double v0 = n.at("from_value").number(), v1 = n.at("to_value").number();
        const double per_angle = (v1 - v0) / (2.0 * std::numbers::pi * arc.length / sc.domain.total_length());
        sc.datum = datum::angular_affine(arc, v0, per_angle, 0.0);
      } else {
        sc.datum = datum::angular_affine(arc, n.at("c0").number(), n.at("c1").number(), optional_number(n, "theta0"));
      }
    } else if (id == "angular-tent") {
      sc.datum = datum::angular_tent(arc, n.at("peak").number(), n.at("width").number(), n.number("height", 1.0),
                                     optional_number(n, "theta0"));
    } else if (id == "angular-sine") {
      sc.datum = datum::angular_sine(arc, n.at("frequency").number(), n.at("shift").number(),
                                     n.number("amplitude", 1.0), optional_number(n, "theta0"));
    } else if (id == "fmd-load") {
      if (sc.domain.kind() != BoundaryKind::Rectangle)
        throw ScenarioError("/domain/kind", "the fmd-load datum needs a rectangle");
      FmdLoadParams p{n.positive("t"), n.positive("b"), n.positive("l_B"), n.number("eps", 0.0)};
      if (p.eps < 0.0) throw ScenarioError(n.path() + "/eps", "must be non-negative");
      sc.datum = datum::fmd_load(sc.domain, p.t_half, p.b_half, p.l_B);
      sc.fmd = p;
    } else if (id == "piecewise-constant") {
      if (sc.gamma) throw ScenarioError("/gamma", "the piecewise-constant datum lives on the whole boundary");
      const std::vector<double> s = atom_params(sc.domain, n);
      PiecewiseParams p{s[0], s[1], s[2], n.positive("a1"), n.positive("a2"), n.number("eps", 0.0)};
      sc.datum = datum::piecewise_constant(sc.domain, p.s0, p.s1, p.s2, p.a1, p.a2, p.eps);
      sc.piecewise = p;
    } else {
      throw ScenarioError(n.path() + "/expr_id",
                          "unknown expression '" + id +
                              "' (expected linear, angular-affine, angular-tent, angular-sine, fmd-load or "
                              "piecewise-constant)");
    }
  } catch (const ValidationError& e) {
    throw ScenarioError(n.path(), e.what());
  }
}

void parse_expectations(Scenario& sc, const Node& n) {
  for (const auto& [key, _] : n.raw().items()) {
    const Node e = n.at(key);
    Expectation x;
    x.name = key;
    x.tolerance = e.number("tol", 0.0);
    const Node v = e.at("value");
    if (v.raw().is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) x.values.push_back(v.at(i).number());
    } else {
      x.values.push_back(v.number());
    }
    if (key == "value_at") x.point = e.at("point").point();
    else if (key != "coarea_tv" && key != "tau" && key != "fat_value")
      throw ScenarioError(e.path(), "unknown expectation (expected coarea_tv, tau, fat_value or value_at)");
    sc.expect.push_back(std::move(x));
  }
}

void check_solver_fits(const Scenario& sc) {
  const bool rect = sc.domain.kind() == BoundaryKind::Rectangle;
  switch (sc.solver) {
    case SolverId::Case1:
    case SolverId::Case2:
    case SolverId::Case3:
      if (!sc.gamma) throw ScenarioError("/gamma", "missing required field for a partial boundary solver");
      break;
    case SolverId::Rectangle:
      if (!rect) throw ScenarioError("/domain/kind", "the rectangle solver needs a rectangle");
      if (sc.gamma) throw ScenarioError("/gamma", "the rectangle solver takes data on the whole boundary");
      break;
    case SolverId::Piecewise:
      if (!sc.piecewise) throw ScenarioError("/datum/expr_id", "the piecewise solver needs a piecewise-constant datum");
      break;
    case SolverId::FmdLoad:
      if (!sc.fmd) throw ScenarioError("/datum/expr_id", "the fmd_load solver needs an fmd-load datum");
      break;
  }
}

}  // namespace

double eval_expression(const std::string& text) { return ExprParser(text).parse(); }

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ScenarioError("line " + std::to_string(line) + ", column " + std::to_string(col), e.what());
  }
  if (!j.is_object()) throw ScenarioError("/", "expected a JSON object");

  Scenario sc;
  sc.config = j;
  const Node root(sc.config, "");
  sc.name = root.has("name") ? root.string("name") : "scenario";
  sc.domain = parse_domain(root.at("domain"));
  if (root.has("gamma") && root.has("upsilon")) throw ScenarioError("/upsilon", "give either gamma or upsilon");
  if (root.has("gamma")) sc.gamma = parse_arc(sc.domain, root.at("gamma"));
  if (root.has("upsilon")) sc.gamma = parse_arc(sc.domain, root.at("upsilon")).complement();
  sc.solver = solver_from_string(root.string("solver"));
  parse_datum(sc, root.at("datum"));
  check_solver_fits(sc);

  sc.grid = root.integer("grid", sc.grid, 0);
  if (sc.grid > 0 && sc.grid < 8) throw ScenarioError("/grid", "must be 0 or at least 8");
  sc.tgrid = root.integer("tgrid", sc.tgrid, 3);
  if (root.has("seed")) {
    if (!sc.config["seed"].is_number_unsigned()) throw ScenarioError("/seed", "expected a non-negative integer");
    sc.seed = sc.config["seed"].get<std::uint64_t>();
  }
  if (root.has("output")) sc.output = root.string("output");
  else sc.output = "out/" + sc.name;
  if (root.has("checks")) {
    const Node c = root.at("checks");
    sc.range_samples = c.integer("range_samples", sc.range_samples, 0);
    sc.modulus_pairs = c.integer("modulus_pairs", sc.modulus_pairs, 0);
    sc.pairing_functions = c.integer("pairing_functions", sc.pairing_functions, 0);
    sc.oracle_tolerance = c.number("oracle_tolerance", sc.oracle_tolerance);
    sc.pairing_tolerance = c.number("pairing_tolerance", sc.pairing_tolerance);
  }
  if (root.has("expect")) parse_expectations(sc, root.at("expect"));
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

PreconditionReport check_preconditions(const Scenario& s) {
  PreconditionReport r;
  const BoundaryFunction& f = *s.datum;
  try {
    switch (s.solver) {
      case SolverId::Rectangle: {
        const MonotonePairCheck c = validate_monotone_pair(f);
        if (!c.ok) throw ValidationError("rectangle data monotone on G1 and G2", c.message);
        break;
      }
      case SolverId::Case1: solve_case1(f, {.t_samples = 201}); break;
      case SolverId::Case2: solve_case2(f, {.t_samples = 201}); break;
      case SolverId::Case3: solve_case3(f, {.t_samples = 201}); break;
      case SolverId::Piecewise:
        if (s.piecewise->eps > 0.0) solve_chord_family(f, {.t_samples = 201});
        break;
      case SolverId::FmdLoad:
        FmdLoadSolution(s.domain.bbox().hi.x, s.domain.bbox().hi.y, s.fmd->t_half, s.fmd->b_half, s.fmd->l_B);
        break;
    }
  } catch (const ValidationError& e) {
    r.ok = false;
    r.clause = e.clause();
    r.message = e.what();
  }
  return r;
}

}  // namespace lgp
