// Python bindings: scenarios, solves and run reports. JSON crosses the
// boundary as text and is decoded on the Python side.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lgp/error.hpp"
#include "lgp/export.hpp"
#include "lgp/runner.hpp"
#include "lgp/scenario.hpp"

namespace py = pybind11;
using namespace lgp;

namespace {

struct Solution {
  Solved solved;

  double value(double x, double y) const { return solved.value({x, y}); }
  double level_value(double x, double y) const { return evaluate(solved.family, {x, y}); }
  std::vector<double> values(const std::vector<std::pair<double, double>>& pts) const {
    std::vector<double> out;
    out.reserve(pts.size());
    for (const auto& [x, y] : pts) out.push_back(solved.value({x, y}));
    return out;
  }
};

}  // namespace

PYBIND11_MODULE(_lgp, m) {
  m.doc() = "Least gradient problems on convex planar domains";

  auto& error = py::register_exception<Error>(m, "Error");
  py::register_exception<ScenarioError>(m, "ScenarioError", error.ptr());

  py::class_<Scenario>(m, "Scenario")
      .def_readonly("name", &Scenario::name)
      .def_property_readonly("solver", [](const Scenario& s) { return to_string(s.solver); })
      .def_property_readonly("partial", [](const Scenario& s) { return s.gamma.has_value(); })
      .def_readwrite("grid", &Scenario::grid)
      .def_readwrite("tgrid", &Scenario::tgrid)
      .def_readwrite("seed", &Scenario::seed)
      .def_readwrite("output", &Scenario::output)
      .def_readwrite("range_samples", &Scenario::range_samples)
      .def_readwrite("modulus_pairs", &Scenario::modulus_pairs)
      .def_readwrite("pairing_functions", &Scenario::pairing_functions)
      .def_readwrite("pairing_tolerance", &Scenario::pairing_tolerance)
      .def_readwrite("oracle_tolerance", &Scenario::oracle_tolerance)
      .def("__repr__", [](const Scenario& s) { return "<Scenario " + s.name + " (" + to_string(s.solver) + ")>"; });

  py::class_<Solution>(m, "Solution")
      .def("value", &Solution::value, py::arg("x"), py::arg("y"), "Solution value, closed form where available")
      .def("level_value", &Solution::level_value, py::arg("x"), py::arg("y"), "Value read off the level family")
      .def("values", &Solution::values, py::arg("points"))
      .def_property_readonly("inf", [](const Solution& s) { return s.solved.family.inf; })
      .def_property_readonly("sup", [](const Solution& s) { return s.solved.family.sup; })
      .def_property_readonly("case_id", [](const Solution& s) { return s.solved.family.case_id; })
      .def_property_readonly("tau", [](const Solution& s) { return s.solved.family.tau; })
      .def_property_readonly("critical", [](const Solution& s) { return s.solved.family.critical; })
      .def_property_readonly("fat_values",
                             [](const Solution& s) {
                               std::vector<double> v;
                               for (const FatRegion& r : s.solved.family.fat) v.push_back(r.value);
                               return v;
                             })
      .def("coarea_tv", [](const Solution& s) { return coarea_tv(s.solved.family).value; })
      .def("levels_json", [](const Solution& s) { return levels_json(s.solved.family).dump(); })
      .def("svg", [](const Solution& s, int max_lines) {
        return svg_text(s.solved.family, s.solved.family.domain, nullptr, max_lines);
      }, py::arg("max_lines") = 48);

  m.def("parse_scenario", &parse_scenario, py::arg("text"));
  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("check_preconditions", [](const Scenario& s) {
    const PreconditionReport r = check_preconditions(s);
    return py::make_tuple(r.ok, r.message);
  }, py::arg("scenario"));
  m.def("solve", [](const Scenario& s) {
    py::gil_scoped_release release;
    return Solution{solve_scenario(s)};
  }, py::arg("scenario"));
  m.def("run_json", [](const Scenario& s, bool write_artifacts) {
    RunReport rep;
    {
      py::gil_scoped_release release;
      rep = run_scenario(s, write_artifacts);
    }
    return rep.json.dump();
  }, py::arg("scenario"), py::arg("write_artifacts") = false);
  m.def("compare_json", [](const std::string& a, const std::string& b) {
    const ReportDiff d = compare_reports(nlohmann::json::parse(a), nlohmann::json::parse(b));
    return py::make_tuple(d.max_abs, d.max_rel, d.worst_field, d.mismatched);
  });
}
