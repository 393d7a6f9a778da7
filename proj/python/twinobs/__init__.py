"""Twin observables of bipartite density matrices."""

import json

from ._twinobs import (
    Error,
    Tolerances,
    certainty,
    coupled_basis,
    example_state,
    partial_trace,
    run_cli,
    scenarios,
    twin_residual,
    twin_space,
)
from . import _twinobs

__all__ = [
    "Error",
    "Tolerances",
    "analyze",
    "certainty",
    "coupled_basis",
    "example_state",
    "measure",
    "partial_trace",
    "run_cli",
    "scenarios",
    "solve",
    "twin_residual",
    "twin_space",
]


def solve(rho, dims, tol=None, scenario=None):
    return json.loads(_twinobs.solve_report(rho, dims, tol or Tolerances(), scenario))


def analyze(rho, dims, tol=None, seed=0):
    return json.loads(_twinobs.analyze_report(rho, dims, tol or Tolerances(), seed))


def measure(rho, dims, a_plus, a_minus, tol=None):
    return json.loads(_twinobs.measure_report(rho, dims, a_plus, a_minus, tol or Tolerances()))
