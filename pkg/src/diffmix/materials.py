"""Per-phase material parameters and their stacked, broadcastable form."""

from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class MaterialParams:
    """Stiffened-gas constants and transport closures of one phase.

    ``rho e = (p + gamma p_inf) / (gamma - 1) + rho w = rho cv T + p_inf + rho w``

    ``viscosity`` and ``conductivity`` are callables ``model(rho, T, mat)``
    returning the phase coefficient (see :mod:`diffmix.closures`); ``None``
    means the phase does not diffuse momentum or heat.
    """

    gamma: float
    p_inf: float = 0.0
    cv: float = 1.0
    w: float = 0.0
    viscosity: Optional[Any] = None
    conductivity: Optional[Any] = None
    name: str = ""

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ConfigError(f"material {self.name!r}: gamma must exceed 1, got {self.gamma}")
        if not self.p_inf >= 0.0:
            raise ConfigError(f"material {self.name!r}: p_inf must be >= 0, got {self.p_inf}")
        if not self.cv > 0.0:
            raise ConfigError(f"material {self.name!r}: cv must be positive, got {self.cv}")

    @property
    def cp(self):
        return self.gamma * self.cv

    def viscosity_at(self, rho, T):
        if self.viscosity is None:
            return np.zeros(np.broadcast(rho, T).shape)
        return np.broadcast_to(self.viscosity(rho, T, self), np.broadcast(rho, T).shape)

    def conductivity_at(self, rho, T):
        if self.conductivity is None:
            return np.zeros(np.broadcast(rho, T).shape)
        return np.broadcast_to(self.conductivity(rho, T, self), np.broadcast(rho, T).shape)


@dataclass(frozen=True)
class Materials:
    """An ordered set of phases with their EOS constants stacked as arrays."""

    phases: tuple
    gamma: np.ndarray = field(init=False, repr=False)
    p_inf: np.ndarray = field(init=False, repr=False)
    cv: np.ndarray = field(init=False, repr=False)
    w: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        phases = tuple(self.phases)
        if not phases:
            raise ConfigError("at least one material is required")
        object.__setattr__(self, "phases", phases)
        for name in ("gamma", "p_inf", "cv", "w"):
            object.__setattr__(self, name, np.array([getattr(m, name) for m in phases], dtype=float))

    def __len__(self):
        return len(self.phases)

    def __iter__(self):
        return iter(self.phases)

    def __getitem__(self, k):
        return self.phases[k]

    def col(self, name, ndim):
        """Constant ``name`` shaped ``(N, 1, ..., 1)`` to broadcast against
        an ``(N, *cells)`` array with ``ndim`` spatial axes."""
        return getattr(self, name).reshape((-1,) + (1,) * ndim)


def as_materials(mats: Sequence[MaterialParams]) -> Materials:
    if isinstance(mats, Materials):
        return mats
    if isinstance(mats, MaterialParams):
        return Materials((mats,))
    return Materials(tuple(mats))
