#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lgp/error.hpp"
#include "lgp/runner.hpp"
#include "lgp/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInvariantFailure = 2;
constexpr int kPrecondition = 3;

void print_table(const lgp::RunReport& rep) {
  for (const lgp::InvariantRecord& r : rep.invariants)
    std::printf("  %-4s %-30s %12.4e %s %.4e\n", r.pass ? "ok" : "FAIL", r.name.c_str(), r.value, r.relation.c_str(),
                r.threshold);
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lgp::Error("cannot open " + path);
  return nlohmann::json::parse(in);
}

int cmd_run(const std::string& config, std::optional<int> grid, std::optional<int> tgrid,
            std::optional<std::string> out, std::optional<std::uint64_t> seed) {
  lgp::Scenario s = lgp::load_scenario(config);
  if (grid) s.grid = *grid;
  if (tgrid) s.tgrid = *tgrid;
  if (out) s.output = *out;
  if (seed) s.seed = *seed;
  const lgp::PreconditionReport pre = lgp::check_preconditions(s);
  if (!pre.ok) {
    std::fprintf(stderr, "precondition failed: %s\n", pre.message.c_str());
    return kPrecondition;
  }
  const lgp::RunReport rep = lgp::run_scenario(s);
  std::printf("%s: solver %s, coarea TV %.12g, %s\n", s.name.c_str(), lgp::to_string(s.solver).c_str(),
              rep.json["tv"]["coarea"].get<double>(), rep.all_pass() ? "all invariants pass" : "INVARIANT FAILURE");
  print_table(rep);
  std::printf("artifacts in %s\n", s.output.c_str());
  return rep.all_pass() ? kOk : kInvariantFailure;
}

int cmd_validate(const std::string& config) {
  const lgp::Scenario s = lgp::load_scenario(config);
  const lgp::PreconditionReport pre = lgp::check_preconditions(s);
  if (!pre.ok) {
    std::fprintf(stderr, "%s: precondition failed: %s\n", s.name.c_str(), pre.message.c_str());
    return kPrecondition;
  }
  std::printf("%s: valid (solver %s, grid %d, tgrid %d, seed %llu)\n", s.name.c_str(),
              lgp::to_string(s.solver).c_str(), s.grid, s.tgrid, static_cast<unsigned long long>(s.seed));
  return kOk;
}

int cmd_compare(const std::string& a, const std::string& b, double tol) {
  const lgp::ReportDiff d = lgp::compare_reports(read_json(a), read_json(b));
  for (const std::string& m : d.mismatched) std::printf("  differs %s\n", m.c_str());
  std::printf("max abs diff %.3e (%s), max rel diff %.3e\n", d.max_abs,
              d.worst_field.empty() ? "-" : d.worst_field.c_str(), d.max_rel);
  const bool same = d.mismatched.empty() && d.max_abs <= tol;
  std::printf("%s\n", same ? "reports agree" : "reports differ");
  return same ? kOk : kInvariantFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Least gradient scenarios: geometric solutions, invariants and a discrete TV oracle"};
  app.require_subcommand(1);

  std::string config;
  std::optional<int> grid, tgrid;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Solve a scenario, check invariants and write artifacts");
  run->add_option("config", config, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--grid", grid, "Oracle grid size (0 disables the oracle)")->check(CLI::NonNegativeNumber);
  run->add_option("--tgrid", tgrid, "Number of levels")->check(CLI::Range(3, 1000000));
  run->add_option("--out", out, "Output directory");
  run->add_option("--seed", seed, "Seed of the randomized checks");

  auto* validate = app.add_subcommand("validate", "Parse a scenario and check the solver preconditions");
  validate->add_option("config", config, "Scenario JSON file")->required()->check(CLI::ExistingFile);

  std::string report_a, report_b;
  double tol = 1e-12;
  auto* compare = app.add_subcommand("compare", "Compare the numeric fields of two run reports");
  compare->add_option("reportA", report_a, "First report.json")->required()->check(CLI::ExistingFile);
  compare->add_option("reportB", report_b, "Second report.json")->required()->check(CLI::ExistingFile);
  compare->add_option("--tol", tol, "Largest accepted absolute difference");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, grid, tgrid, out, seed);
    if (*validate) return cmd_validate(config);
    if (*compare) return cmd_compare(report_a, report_b, tol);
  } catch (const lgp::ScenarioError& e) {
    std::fprintf(stderr, "%s: %s\n", config.c_str(), e.what());
    return kUsage;
  } catch (const lgp::ValidationError& e) {
    std::fprintf(stderr, "precondition failed: %s\n", e.what());
    return kPrecondition;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  }
  return kUsage;
}
