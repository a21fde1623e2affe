"""Diffuse-interface solver for N-phase compressible flow with diffusion.

Single velocity, single pressure, per-phase temperatures that relax
instantaneously; stiffened-gas phases; viscosity, heat conduction and laser
heating solved by operator splitting.  The main entry points are

* :mod:`diffmix.cases` - built-in problem setups,
* :func:`diffmix.driver.run` - the time loop,
* :mod:`diffmix.hyperbolic`, :mod:`diffmix.parabolic`,
  :mod:`diffmix.viscous`, :mod:`diffmix.thermal` - the individual stages.
"""

from .cases import CASES, builtin_case
from .config import CaseConfig, Region, load_case, dump_case, initial_state
from .driver import RunPlan, Simulation, convergence_report, run
from .errors import (ClosureError, ConfigError, ConvergenceError, DiffmixError, DivergenceError,
                     StageError, ThermodynamicError, VacuumError)
from .materials import MaterialParams, Materials
from .state import ConservedState, Grid, PrimitiveState
from .units import CGS_US_MK, SI, UnitSystem

__version__ = "0.1.0"

__all__ = [
    "CASES", "builtin_case", "CaseConfig", "Region", "load_case", "dump_case", "initial_state",
    "RunPlan", "Simulation", "convergence_report", "run", "ClosureError", "ConfigError",
    "ConvergenceError", "DiffmixError", "DivergenceError", "StageError", "ThermodynamicError",
    "VacuumError", "MaterialParams", "Materials", "ConservedState", "Grid", "PrimitiveState",
    "CGS_US_MK", "SI", "UnitSystem",
]
