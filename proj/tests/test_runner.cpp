#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "lgp/export.hpp"
#include "lgp/runner.hpp"
#include "lgp/scenario.hpp"

using namespace lgp;

namespace {

std::string scenario_path(const std::string& name) {
  return (std::filesystem::path(LGP_SCENARIO_DIR) / (name + ".json")).string();
}

std::string field_of_error(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.field();
  }
  return "";
}

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
  return n;
}

Scenario quick(const std::string& name, const std::string& out) {
  Scenario s = load_scenario(scenario_path(name));
  s.grid = 0;
  s.tgrid = 401;
  s.range_samples = 2000;
  s.modulus_pairs = 2000;
  s.pairing_functions = 4;
  s.pairing_tolerance = 1e-4;
  s.output = (std::filesystem::temp_directory_path() / out).string();
  return s;
}

}  // namespace

TEST_CASE("expression strings") {
  CHECK(eval_expression("2") == 2.0);
  CHECK(eval_expression("-pi/4") == doctest::Approx(-std::numbers::pi / 4).epsilon(1e-15));
  CHECK(eval_expression("2*sqrt(2)") == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(eval_expression("(1 - 0.5^4)^0.25") == doctest::Approx(std::pow(1 - 0.0625, 0.25)).epsilon(1e-15));
  CHECK(eval_expression("2^3^2") == 512.0);
  CHECK(eval_expression("abs(-3) + cos(0) - sin(0)") == 4.0);
  CHECK_THROWS(eval_expression("1 +"));
  CHECK_THROWS(eval_expression("foo(1)"));
}

TEST_CASE("parse errors name the offending field") {
  CHECK(field_of_error(R"({"name": "x", "domain": {"kind": "circle", "radius": 1}, "solver": "case2"})") ==
        "/datum");
  CHECK(field_of_error(R"({"name": "x", "domain": {"kind": "circle", "radius": 1},
      "datum": {"kind": "analytic", "expr_id": "angular-sine", "frequency": 1, "shift": 0},
      "solver": "newton"})") == "/solver");
  CHECK(field_of_error(R"({"name": "x", "domain": {"kind": "triangle"}})").starts_with("/domain"));
  const std::string syntax = field_of_error("{\n  \"name\": \"x\",\n  \"domain\": {,}\n}");
  CHECK(syntax.starts_with("line 3, column"));
}

TEST_CASE("bundled scenarios parse") {
  const Scenario s = load_scenario(scenario_path("d2_case1"));
  CHECK(s.name == "d2_case1");
  CHECK(s.solver == SolverId::Case1);
  REQUIRE(s.gamma);
  CHECK(s.gamma->length == doctest::Approx(1.5 * std::numbers::pi));
  CHECK(s.grid == 128);
  CHECK(s.tgrid == 2001);
  for (const auto& e : std::filesystem::directory_iterator(LGP_SCENARIO_DIR)) {
    CAPTURE(e.path().string());
    CHECK(check_preconditions(load_scenario(e.path().string())).ok);
  }
}

TEST_CASE("non-monotone rectangle datum fails the precondition") {
  const Scenario s = parse_scenario(R"({"name": "bad", "domain": {"kind": "rectangle", "L": 1, "h": 1},
      "datum": {"kind": "analytic", "expr_id": "linear", "cx": 1, "cy": 0, "c0": 0, "power": 2},
      "solver": "rectangle"})");
  const PreconditionReport pre = check_preconditions(s);
  CHECK_FALSE(pre.ok);
  CHECK_FALSE(pre.message.empty());
}

TEST_CASE("svg output") {
  SUBCASE("empty family draws only the outline") {
    const LevelFamily fam;
    SvgStats st;
    const std::string svg = svg_text(fam, fam.domain, &st);
    CHECK(st.lines == 0);
    CHECK(st.regions == 0);
    CHECK(count(svg, "class=\"domain\"") == 1);
    CHECK(count(svg, "<line ") == 0);
  }
  SUBCASE("three-valued datum") {
    const Scenario s = load_scenario(scenario_path("p1_piecewise"));
    const LevelFamily fam = solve_scenario(s).family;
    SvgStats st;
    const std::string svg = svg_text(fam, s.domain, &st);
    CHECK(st.lines == 2);
    CHECK(st.regions == 3);
    CHECK(count(svg, "<line ") == 2);
    const nlohmann::json lv = levels_json(fam);
    CHECK(lv["lines"].size() == 2);
    CHECK(lv["schema"] == "lgp.levels/1");
  }
  SUBCASE("critical level is highlighted") {
    const Scenario s = load_scenario(scenario_path("d2_case1"));
    const std::string svg = svg_text(solve_scenario(s).family, s.domain);
    CHECK(count(svg, " tau\"") >= 1);
    CHECK(count(svg, "class=\"free-arc\"") == 1);
  }
}

TEST_CASE("report contents and determinism") {
  const Scenario s = quick("d1_monotone", "lgp_test_d1");
  const RunReport a = run_scenario(s);
  CHECK(a.all_pass());
  CHECK(a.exit_status() == 0);
  REQUIRE(a.json["fat"].size() == 1);
  CHECK(a.json["fat"][0]["value"].get<double>() == 0.5);
  CHECK(a.json["classification"]["D"].size() == 1);
  for (const char* f : {"levels.json", "flux.json", "field.csv", "plot.svg", "report.json"})
    CHECK(std::filesystem::exists(std::filesystem::path(s.output) / f));

  std::ifstream in(std::filesystem::path(s.output) / "report.json");
  const nlohmann::json stored = nlohmann::json::parse(in);
  CHECK(stored["schema_version"] == "lgp.report/1");
  CHECK(stored["scenario"]["tgrid"] == 401);

  const RunReport b = run_scenario(s, false);
  const ReportDiff d = compare_reports(a.json, b.json);
  CHECK(d.max_abs == 0.0);
  CHECK(d.mismatched.empty());

  Scenario other = s;
  other.tgrid = 801;
  const ReportDiff d2 = compare_reports(a.json, run_scenario(other, false).json);
  CHECK(d2.max_abs > 0.0);
}
