"""Reacting thermosolutal convection in a rectangle.

Modules
-------
domain
    Grids, fields and discrete norms.
elliptic
    Fast Poisson solves, torsion function, membrane eigenvalue and the
    boundary constants they produce.
scenario
    Scenario data and its JSON configuration.
convection
    The time integrator and recorded norm trajectories.
bounds
    Data-only a priori constants and the continuous-dependence bound.
harness
    Twin runs, scaling studies and the verification battery.
"""

from .bounds import FreeParameters, compute_ledger, tune_free_parameters
from .convection import SolverOptions, Trajectory, run_lockstep, simulate
from .domain import BoundaryTrace, Grid2D, ScalarField, VectorField2D
from .elliptic import GeometryConstants, geometry_constants
from .harness import TwinSpec, scaling_study, sobolev_check, suite_scenarios, twin_run, verify_all
from .scenario import Scenario, load_scenario, scenario_from_dict

__version__ = "0.1.0"

__all__ = [
    "FreeParameters", "compute_ledger", "tune_free_parameters",
    "SolverOptions", "Trajectory", "run_lockstep", "simulate",
    "BoundaryTrace", "Grid2D", "ScalarField", "VectorField2D",
    "GeometryConstants", "geometry_constants",
    "TwinSpec", "scaling_study", "sobolev_check", "suite_scenarios", "twin_run", "verify_all",
    "Scenario", "load_scenario", "scenario_from_dict",
]
