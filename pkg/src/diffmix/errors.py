"""Exception hierarchy shared by all solver stages."""

import numpy as np


class DiffmixError(Exception):
    """Base class for solver errors."""


class ConfigError(DiffmixError, ValueError):
    """Invalid case configuration or run plan."""


class ThermodynamicError(DiffmixError):
    """A state lies outside the domain of the equation of state."""


class ClosureError(DiffmixError):
    """A per-cell closure (pressure, volume fractions, temperature) failed.

    ``cells`` holds the flat indices of the offending cells; ``details`` is a
    free-form dict with diagnostic values.
    """

    def __init__(self, message, cells=(), details=None):
        self.cells = np.atleast_1d(np.asarray(cells, dtype=int))
        self.details = dict(details or {})
        if self.cells.size:
            shown = ", ".join(str(c) for c in self.cells[:8])
            more = "" if self.cells.size <= 8 else f" (+{self.cells.size - 8} more)"
            message = f"{message} [cells: {shown}{more}]"
        super().__init__(message)


class ConvergenceError(DiffmixError):
    """An iterative solver did not reach its tolerance."""

    def __init__(self, message, residuals=()):
        self.residuals = list(residuals)
        if self.residuals:
            message = f"{message} (last residual {self.residuals[-1]:.3e})"
        super().__init__(message)


class DivergenceError(DiffmixError):
    """An explicit iteration produced non-finite values."""


class VacuumError(DiffmixError):
    """The Riemann problem generates vacuum."""


class StageError(DiffmixError):
    """A time-step stage failed; carries where and when it happened."""

    def __init__(self, stage, time, step, cause, coords=None):
        self.stage = stage
        self.time = time
        self.step = step
        self.cause = cause
        self.coords = coords
        where = ""
        if coords is not None and len(coords):
            where = " at " + ", ".join(
                "(" + ", ".join(f"{v:.6g}" for v in c) + ")" for c in coords[:4])
        super().__init__(
            f"stage '{stage}' failed at step {step}, t={time:.6g}{where}: {cause}")
