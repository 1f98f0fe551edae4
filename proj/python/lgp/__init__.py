"""Least gradient problems on convex planar domains."""

import json

from ._lgp import (
    Error,
    Scenario,
    ScenarioError,
    Solution,
    check_preconditions,
    load_scenario,
    parse_scenario,
    solve,
)
from . import _lgp

__all__ = [
    "Error",
    "Scenario",
    "ScenarioError",
    "Solution",
    "check_preconditions",
    "compare",
    "load_scenario",
    "parse_scenario",
    "run",
    "solve",
]


def run(scenario, write_artifacts=False):
    """Solve, check invariants and return the report as a dict."""
    return json.loads(_lgp.run_json(scenario, write_artifacts))


def compare(a, b):
    """Numeric difference of two reports (dicts), ignoring wall times."""
    max_abs, max_rel, worst, mismatched = _lgp.compare_json(json.dumps(a), json.dumps(b))
    return {"max_abs": max_abs, "max_rel": max_rel, "worst_field": worst, "mismatched": mismatched}
