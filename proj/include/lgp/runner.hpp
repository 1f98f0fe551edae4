#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lgp/fmd_dual.hpp"
#include "lgp/scenario.hpp"
#include "lgp/swz_solver.hpp"

namespace lgp {

/// One row of the invariant table: pass iff value <relation> threshold.
struct InvariantRecord {
  std::string name;
  double value = 0.0;
  std::string relation = "<=";
  double threshold = 0.0;
  bool pass = false;
};

struct RunReport {
  nlohmann::json json;
  std::vector<InvariantRecord> invariants;

  bool all_pass() const;
  /// 0 when every invariant passes, 2 otherwise.
  int exit_status() const { return all_pass() ? 0 : 2; }
};

/// Solution built for a scenario: the level family and the evaluator used
/// for rasters (closed forms where available).
struct Solved {
  LevelFamily family;
  std::function<double(Point)> value;
};

Solved solve_scenario(const Scenario& s);

/// Solves, checks the invariants, runs the oracle (grid > 0) and, when
/// `write_artifacts` is set, writes levels.json, field.csv, flux.json,
/// plot.svg and report.json into s.output. Solver precondition failures
/// propagate as ValidationError.
RunReport run_scenario(const Scenario& s, bool write_artifacts = true);

/// Scenario echo with the effective grid, tgrid, seed and output.
nlohmann::json scenario_echo(const Scenario& s);

struct ReportDiff {
  double max_abs = 0.0;
  double max_rel = 0.0;
  std::string worst_field;
  std::vector<std::string> mismatched;  // structural differences
};

/// Numeric comparison of two reports, ignoring wall times and the output directory.
ReportDiff compare_reports(const nlohmann::json& a, const nlohmann::json& b);

}  // namespace lgp
