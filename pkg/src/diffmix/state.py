"""State containers, the structured grid, and conserved <-> primitive maps.

Layout conventions
------------------
Cell arrays carry the phase (or component) index first: ``(N, nx)`` in 1D,
``(N, nx, ny)`` in 2D.  The conserved vector is packed as rows

    ``m_1 .. m_N | rho u_1 .. rho u_d | rho E | alpha_1 .. alpha_{N-1}``

so that the last volume fraction never exists in storage and saturation
cannot be broken by an update.
"""

from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from . import eos
from .errors import ClosureError, ConfigError
from .materials import as_materials

ALPHA_GUARD = 1e-12
BOUNDARY_KINDS = ("extrapolation", "periodic", "reflective")


@dataclass(frozen=True)
class Grid:
    """Uniform Cartesian grid in one or two dimensions.

    ``bc`` holds one ``(lower, upper)`` pair of boundary tags per axis, each
    one of ``extrapolation``, ``periodic`` or ``reflective``.
    """

    shape: Tuple[int, ...]
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    bc: Tuple[Tuple[str, str], ...] = None
    ghost: int = 2

    def __post_init__(self):
        shape = tuple(int(n) for n in np.atleast_1d(self.shape))
        lower = tuple(float(v) for v in np.atleast_1d(self.lower))
        upper = tuple(float(v) for v in np.atleast_1d(self.upper))
        if not (len(shape) == len(lower) == len(upper)) or len(shape) not in (1, 2):
            raise ConfigError("grid needs matching 1D or 2D shape/lower/upper")
        if any(n < 1 for n in shape):
            raise ConfigError(f"cell counts must be positive, got {shape}")
        if any(hi <= lo for lo, hi in zip(lower, upper)):
            raise ConfigError("grid extents must satisfy upper > lower")
        bc = self.bc
        if bc is None:
            bc = (("extrapolation", "extrapolation"),) * len(shape)
        elif isinstance(bc, str):
            bc = ((bc, bc),) * len(shape)
        bc = tuple((b, b) if isinstance(b, str) else tuple(b) for b in bc)
        if len(bc) != len(shape):
            raise ConfigError("one boundary pair per axis is required")
        for pair in bc:
            for b in pair:
                if b not in BOUNDARY_KINDS:
                    raise ConfigError(f"unknown boundary kind {b!r}; use one of {BOUNDARY_KINDS}")
            if (pair[0] == "periodic") != (pair[1] == "periodic"):
                raise ConfigError("periodic boundaries must be set on both sides of an axis")
        if self.ghost < 2:
            raise ConfigError("ghost width must be at least 2 for MUSCL stencils")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "bc", bc)

    @property
    def ndim(self):
        return len(self.shape)

    @property
    def dx(self):
        return tuple((hi - lo) / n for lo, hi, n in zip(self.lower, self.upper, self.shape))

    @property
    def cell_volume(self):
        return float(np.prod(self.dx))

    def centers(self, axis=0):
        lo, d = self.lower[axis], self.dx[axis]
        return lo + (np.arange(self.shape[axis]) + 0.5) * d

    def faces(self, axis=0):
        return self.lower[axis] + np.arange(self.shape[axis] + 1) * self.dx[axis]

    def mesh(self):
        """Cell-center coordinate arrays, each of the grid's shape."""
        return np.meshgrid(*[self.centers(a) for a in range(self.ndim)], indexing="ij")

    def with_cells(self, shape):
        return replace(self, shape=tuple(np.atleast_1d(shape)))

    def pad(self, q, normal_rows=None, width=None):
        """Add ghost layers to a stacked field ``q`` of shape ``(nvar, *shape)``.

        ``normal_rows[axis]`` lists the rows holding the velocity (or
        momentum) component normal to ``axis``; those change sign in
        reflective ghosts.  Extrapolation copies the edge cell.
        """
        g = self.ghost if width is None else width
        out = q
        for axis in range(self.ndim):
            ax = axis + 1
            for side, kind in enumerate(self.bc[axis]):
                pw = [(0, 0)] * out.ndim
                pw[ax] = (g, 0) if side == 0 else (0, g)
                if kind == "periodic":
                    if side == 1:
                        continue
                    pw[ax] = (g, g)
                    out = np.pad(out, pw, mode="wrap")
                elif kind == "extrapolation":
                    out = np.pad(out, pw, mode="edge")
                else:
                    out = np.pad(out, pw, mode="symmetric")
                    rows = () if normal_rows is None else normal_rows[axis]
                    if len(rows):
                        sl = [slice(None)] * out.ndim
                        sl[ax] = slice(0, g) if side == 0 else slice(out.shape[ax] - g, None)
                        for r in rows:
                            sl[0] = r
                            out[tuple(sl)] *= -1.0
        return out

    def interior(self, width=None):
        g = self.ghost if width is None else width
        return (slice(None),) + tuple(slice(g, g + n) for n in self.shape)


@dataclass
class ConservedState:
    """Packed conserved unknowns ``(m_k, rho u, rho E, alpha_1..alpha_{N-1})``."""

    data: np.ndarray
    n_phases: int

    @property
    def ndim(self):
        return self.data.ndim - 1

    @property
    def shape(self):
        return self.data.shape[1:]

    @property
    def m(self):
        return self.data[: self.n_phases]

    @property
    def mom(self):
        return self.data[self.n_phases: self.n_phases + self.ndim]

    @property
    def E(self):
        return self.data[self.n_phases + self.ndim]

    @property
    def alpha_stored(self):
        return self.data[self.n_phases + self.ndim + 1:]

    @property
    def alpha(self):
        """All N volume fractions, the last recovered by saturation."""
        a = self.alpha_stored
        return np.concatenate([a, (1.0 - a.sum(axis=0))[None]], axis=0)

    @property
    def rho(self):
        return self.m.sum(axis=0)

    def copy(self):
        return ConservedState(self.data.copy(), self.n_phases)

    @classmethod
    def nvar(cls, n_phases, ndim):
        return 2 * n_phases + ndim


@dataclass
class PrimitiveState:
    """Closure view of a cell field: ``rho_k, u, p, alpha_k, T_k, e_k``."""

    rho: np.ndarray
    u: np.ndarray
    p: np.ndarray
    alpha: np.ndarray
    T: np.ndarray
    e: np.ndarray

    @property
    def m(self):
        return self.alpha * self.rho

    @property
    def density(self):
        return np.sum(self.alpha * self.rho, axis=0)

    @property
    def n_phases(self):
        return self.rho.shape[0]

    @property
    def ndim(self):
        return self.u.shape[0]

    def copy(self):
        return PrimitiveState(*(np.array(getattr(self, f)) for f in ("rho", "u", "p", "alpha", "T", "e")))


def mixture_temperature(W, mats):
    """``sum m_k cv_k T_k / sum m_k cv_k``; equals the common T after relaxation."""
    mats = as_materials(mats)
    mc = W.m * mats.col("cv", W.p.ndim)
    return np.sum(mc * W.T, axis=0) / np.sum(mc, axis=0)


def _guarded(alpha):
    return np.clip(alpha, ALPHA_GUARD, 1.0 - ALPHA_GUARD)


def validate_conserved(U: ConservedState):
    m, a = U.m, U.alpha
    bad = ~(np.all(m > 0.0, axis=0) & np.all(a > 0.0, axis=0) & np.all(a < 1.0, axis=0)
            & np.all(np.isfinite(U.data), axis=0))
    if U.n_phases == 1:
        bad = ~(np.all(m > 0.0, axis=0) & np.all(np.isfinite(U.data), axis=0))
    if np.any(bad):
        raise ClosureError("conserved state violates m_k > 0 or 0 < alpha_k < 1", np.flatnonzero(bad))


def primitive_from_conserved(U: ConservedState, mats, check=True) -> PrimitiveState:
    """Recover ``(rho_k, u, p, alpha_k, T_k, e_k)`` under pressure equilibrium.

    The pressure comes from the mixture energy through
    :func:`eos.mixture_pressure_allaire`; ``e_k`` and ``T_k`` then follow from
    each phase's own equation of state at that pressure.
    """
    mats = as_materials(mats)
    if check:
        validate_conserved(U)
    m = U.m
    alpha = U.alpha
    rho = m.sum(axis=0)
    u = U.mom / rho
    rho_e = U.E - 0.5 * np.sum(U.mom * u, axis=0)
    p = eos.mixture_pressure_allaire(m, rho_e, alpha, mats)
    rho_k = m / _guarded(alpha) if len(mats) > 1 else m.copy()
    e = eos.sg_energy(rho_k, p, mats)
    T = eos.sg_temperature(rho_k, p, mats)
    return PrimitiveState(rho=rho_k, u=u, p=p, alpha=alpha, T=T, e=e)


def conserved_from_primitive(W: PrimitiveState, mats=None) -> ConservedState:
    """Assemble the packed conserved vector from a primitive state."""
    m = W.alpha * W.rho
    rho = m.sum(axis=0)
    mom = rho * W.u
    E = np.sum(m * W.e, axis=0) + 0.5 * rho * np.sum(W.u * W.u, axis=0)
    data = np.concatenate([m, mom, E[None], W.alpha[:-1]], axis=0)
    return ConservedState(np.ascontiguousarray(data, dtype=float), W.rho.shape[0])


def reconstruct_phase_energies(W: PrimitiveState) -> np.ndarray:
    """Phase total energies ``alpha_k rho_k E_k = m_k (e_k(rho_k, p) + |u|^2 / 2)``.

    Returned as an ``(N, *cells)`` array whose phase sum equals the mixture
    ``rho E`` to round-off when ``W`` came from :func:`primitive_from_conserved`.
    """
    ke = 0.5 * np.sum(W.u * W.u, axis=0)
    return W.alpha * W.rho * (W.e + ke)


def primitive_from_pt(p, T, u, alpha, mats) -> PrimitiveState:
    """Primitive state at common pressure and temperature (initial data helper)."""
    mats = as_materials(mats)
    alpha = np.asarray(alpha, dtype=float)
    nd = alpha.ndim - 1
    p = np.broadcast_to(np.asarray(p, dtype=float), alpha.shape[1:]).copy()
    Tk = np.broadcast_to(np.asarray(T, dtype=float), alpha.shape).copy()
    rho = eos.sg_density(p, Tk, mats)
    e = eos.sg_energy(rho, p, mats)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if u.shape[1:] != alpha.shape[1:]:
        u = np.broadcast_to(u.reshape((-1,) + (1,) * nd), (u.shape[0],) + alpha.shape[1:])
    return PrimitiveState(rho=rho, u=np.array(u), p=p, alpha=alpha, T=Tk, e=e)
