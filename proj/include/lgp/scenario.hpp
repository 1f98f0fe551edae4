#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lgp/boundary_data.hpp"
#include "lgp/error.hpp"
#include "lgp/geometry.hpp"

namespace lgp {

/// Malformed scenario text or a missing or invalid field. `field` is a JSON
/// pointer ("/datum/expr_id"); syntax errors carry a line and column instead.
class ScenarioError : public Error {
 public:
  ScenarioError(std::string field, const std::string& detail)
      : Error(field + ": " + detail), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class SolverId { Case1, Case2, Case3, Rectangle, Piecewise, FmdLoad };

std::string to_string(SolverId id);
SolverId solver_from_string(const std::string& s);

/// Scalar expression with numbers, pi, + - * / ^, parentheses and sqrt, sin,
/// cos, abs. JSON numbers are accepted as they are.
double eval_expression(const std::string& text);

struct Expectation {
  std::string name;  // coarea_tv, tau, fat_value, value_at
  std::vector<double> values;
  std::optional<Point> point;
  double tolerance = 0.0;
};

struct PiecewiseParams {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;  // global boundary parameters
  double a1 = 1.0, a2 = 1.0;
  double eps = 0.0;  // ramp width of the mollified datum, 0 for the jump datum
};

struct FmdLoadParams {
  double t_half = 0.0, b_half = 0.0, l_B = 0.0;
  double eps = 0.0;  // perturbation for the comparison run
};

struct Scenario {
  std::string name;
  nlohmann::json config;  // the parsed text, echoed into the report
  ConvexBoundary domain = ConvexBoundary::circle(1.0);
  std::optional<BoundaryArc> gamma;  // datum arc; absent for full boundary data
  SolverId solver = SolverId::Case2;
  std::optional<BoundaryFunction> datum;  // always set by the parser
  std::optional<PiecewiseParams> piecewise;
  std::optional<FmdLoadParams> fmd;

  int grid = 128;       // oracle raster size, 0 disables the oracle
  int tgrid = 2001;     // level grid size
  std::uint64_t seed = 0;
  std::string output = "out";

  int range_samples = 100000;
  int modulus_pairs = 20000;
  int pairing_functions = 20;
  double oracle_tolerance = 0.02;  // relative energy gap and L1 / range
  double pairing_tolerance = 1e-6;
  std::vector<Expectation> expect;
};

/// Parses JSON scenario text. Syntax errors report line and column; field
/// errors name the offending field.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);

struct PreconditionReport {
  bool ok = true;
  std::string clause;
  std::string message;
};

/// Runs the solver preconditions (monotone pair check for rectangles, the
/// case hypotheses on a coarse level grid for partial data).
PreconditionReport check_preconditions(const Scenario& s);

}  // namespace lgp
