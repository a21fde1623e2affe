"""Hydrodynamic stage: HLLC finite volumes for the reduced N-phase system.

Per direction the semi-discrete right-hand side is

    dU/dt = -(F_{i+1/2} - F_{i-1/2}) / dx                     (m_k, rho u, rho E)
    dalpha_l/dt = -(F^a_{i+1/2} - F^a_{i-1/2}) / dx
                  + (A / A_l alpha_l)_i (u_{i+1/2} - u_{i-1/2}) / dx

where ``F^a = alpha_l u`` is upwinded at the contact speed and ``u_{i+1/2}``
is the HLLC contact speed of the face.  Face states come from MUSCL
reconstruction of the primitive variables ``(rho_k, u, p, alpha_k)``; time
integration is three-stage SSP Runge-Kutta.

Primitive stacks used throughout have rows
``rho_1..rho_N | u_1..u_d | p | alpha_1..alpha_N``.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import eos
from .errors import ClosureError, ConfigError
from .materials import as_materials
from .state import ConservedState, Grid, PrimitiveState, primitive_from_conserved

RK3_WEIGHTS = (1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0)


# ---------------------------------------------------------------- limiters

def minmod_phi(r):
    return np.maximum(0.0, np.minimum(r, 1.0))


def overbee_phi(r):
    """Over-compressive limiter on the upper edge of the TVD region: ``max(0, min(2r, 2))``."""
    return np.maximum(0.0, np.minimum(2.0 * r, 2.0))


def superbee_phi(r):
    return np.maximum(0.0, np.maximum(np.minimum(2.0 * r, 1.0), np.minimum(r, 2.0)))


def first_order_phi(r):
    return np.zeros_like(r)


LIMITERS = {"minmod": minmod_phi, "overbee": overbee_phi, "superbee": superbee_phi,
            "first_order": first_order_phi}


def _phi(name):
    try:
        return LIMITERS[name]
    except KeyError:
        raise ConfigError(f"unknown limiter {name!r}; choose from {sorted(LIMITERS)}") from None


def _ratio(dm, dp):
    """``r = dm / dp`` with ``r = 0`` where ``dp == 0`` (slope is zero there anyway)."""
    safe = np.where(dp == 0.0, 1.0, dp)
    return np.where(dp == 0.0, 0.0, dm / safe)


def limited_slopes(dm, dp, limiter="minmod"):
    """Slope ``phi(r) * dp`` from backward/forward differences."""
    if limiter == "minmod":
        return np.where(dm * dp > 0.0, np.sign(dp) * np.minimum(np.abs(dm), np.abs(dp)), 0.0)
    if limiter == "overbee":
        return np.where(dm * dp > 0.0, 2.0 * np.sign(dp) * np.minimum(np.abs(dm), np.abs(dp)), 0.0)
    return _phi(limiter)(_ratio(dm, dp)) * dp


def coupled_fraction_slopes(dm, dp, limiter="minmod"):
    """Volume-fraction slopes sharing one limiter factor across phases.

    Each phase gets its own ``phi(r_k)``; the common factor
    ``theta = min_k phi(r_k)`` over phases with ``dp_k != 0`` scales all the
    forward differences, so slopes sum to zero (faces keep ``sum alpha = 1``)
    and each one stays inside its own TVD bound (faces keep ``alpha_k`` between
    neighbouring cell values).
    """
    phi = _phi(limiter)(_ratio(dm, dp))
    phi = np.where(dp == 0.0, np.inf, phi)
    theta = np.min(phi, axis=0)
    theta = np.where(np.isinf(theta), 0.0, theta)
    return theta[None] * dp


def _take(a, ax, start, stop):
    sl = [slice(None)] * a.ndim
    sl[ax] = slice(start, stop)
    return a[tuple(sl)]


def muscl_reconstruct(q, axis, n_cells, ghost, limiter="minmod", alpha_rows=None,
                      alpha_limiter=None):
    """Left/right states on the ``n_cells + 1`` faces of the interior along ``axis``.

    ``q`` is a ghost-padded stack ``(nvar, ...)``; ``axis`` is the spatial axis
    (0-based, so array axis ``axis + 1``).  Rows in ``alpha_rows`` (a slice) are
    limited together with :func:`coupled_fraction_slopes`.
    """
    ax = axis + 1
    dq = np.diff(q, axis=ax)
    # cells ghost-1 .. ghost+n need slopes; slope of cell c uses dq[c-1], dq[c]
    dm = _take(dq, ax, ghost - 2, ghost + n_cells)
    dp = _take(dq, ax, ghost - 1, ghost + n_cells + 1)
    sigma = limited_slopes(dm, dp, limiter)
    if alpha_rows is not None:
        sigma[alpha_rows] = coupled_fraction_slopes(dm[alpha_rows], dp[alpha_rows],
                                                    alpha_limiter or limiter)
    qc = _take(q, ax, ghost - 1, ghost + n_cells + 1)
    qL = _take(qc, ax, 0, n_cells + 1) + 0.5 * _take(sigma, ax, 0, n_cells + 1)
    qR = _take(qc, ax, 1, n_cells + 2) - 0.5 * _take(sigma, ax, 1, n_cells + 2)
    return qL, qR


# ---------------------------------------------------------------- HLLC

@dataclass
class HllcBreakdown:
    """Face-wise HLLC result.

    ``flux`` rows follow the conserved layout with the ``alpha_l`` rows
    holding the advective flux ``alpha_l u_face``; ``u_face`` is the face
    velocity used in the non-conservative volume-fraction term.
    """

    S_L: np.ndarray
    S_star: np.ndarray
    S_R: np.ndarray
    flux: np.ndarray
    u_face: np.ndarray
    star_L: Optional[np.ndarray] = None
    star_R: Optional[np.ndarray] = None


class Layout:
    """Row bookkeeping for primitive and conserved stacks."""

    def __init__(self, n_phases, ndim):
        N, d = n_phases, ndim
        self.N, self.d = N, d
        self.rho = slice(0, N)
        self.u = slice(N, N + d)
        self.p = N + d
        self.alpha = slice(N + d + 1, 2 * N + d + 1)
        self.n_prim = 2 * N + d + 1
        # conserved
        self.m = slice(0, N)
        self.mom = slice(N, N + d)
        self.E = N + d
        self.alpha_c = slice(N + d + 1, 2 * N + d)
        self.n_cons = 2 * N + d

    def velocity_rows(self, axis):
        return (self.N + axis,)


def pack_primitive(W: PrimitiveState):
    return np.concatenate([W.rho, W.u, W.p[None], W.alpha], axis=0)


def _face_physics(q, lay: Layout, mats, axis, nd):
    """Conserved vector, physical flux pieces and Wood sound speed of face states."""
    rho_k = q[lay.rho]
    u = q[lay.u]
    p = q[lay.p]
    alpha = q[lay.alpha]
    m = alpha * rho_k
    rho = m.sum(axis=0)
    g, pinf, w = mats.col("gamma", nd), mats.col("p_inf", nd), mats.col("w", nd)
    Ak = g * (p + pinf)
    A = 1.0 / np.sum(alpha / Ak, axis=0)
    a = np.sqrt(A / rho)
    rho_e = np.sum(alpha * (p + g * pinf) / (g - 1.0), axis=0) + np.sum(m * w, axis=0)
    E = rho_e + 0.5 * rho * np.sum(u * u, axis=0)
    return m, rho, u, p, alpha, E, a


def _hllc_stack(qL, qR, mats, lay: Layout, axis, keep_star=False):
    nd = qL.ndim - 1
    mL, rL, uL, pL, aLph, EL, cL = _face_physics(qL, lay, mats, axis, nd)
    mR, rR, uR, pR, aRph, ER, cR = _face_physics(qR, lay, mats, axis, nd)
    unL, unR = uL[axis], uR[axis]

    SL = np.minimum(unL - cL, unR - cR)
    SR = np.maximum(unL + cL, unR + cR)
    if np.any(~(SL < SR)):
        bad = np.flatnonzero(~(SL < SR))
        raise ClosureError("degenerate HLLC wave fan (S_L >= S_R, vacuum-like face)", bad)
    dL = rL * (SL - unL)
    dR = rR * (SR - unR)
    Ss = (pR - pL + unL * dL - unR * dR) / (dL - dR)

    def phys(m, rho, u, p, alpha, E, un):
        F = np.empty((lay.n_cons,) + un.shape)
        F[lay.m] = m * un
        F[lay.mom] = rho * u * un
        F[lay.N + axis] += p
        F[lay.E] = (E + p) * un
        F[lay.alpha_c] = alpha[:-1] * un
        return F

    def cons(m, rho, u, alpha, E):
        U = np.empty((lay.n_cons,) + rho.shape)
        U[lay.m] = m
        U[lay.mom] = rho * u
        U[lay.E] = E
        U[lay.alpha_c] = alpha[:-1]
        return U

    def star(m, rho, u, p, alpha, E, un, S):
        chi = (S - un) / (S - Ss)
        Us = np.empty((lay.n_cons,) + rho.shape)
        Us[lay.m] = m * chi
        Us[lay.mom] = rho * chi * u
        Us[lay.N + axis] = rho * chi * Ss
        Us[lay.E] = chi * (E + (Ss - un) * (rho * Ss + p / (S - un)))
        Us[lay.alpha_c] = alpha[:-1]
        return Us

    FL = phys(mL, rL, uL, pL, aLph, EL, unL)
    FR = phys(mR, rR, uR, pR, aRph, ER, unR)
    UL = cons(mL, rL, uL, aLph, EL)
    UR = cons(mR, rR, uR, aRph, ER)
    UsL = star(mL, rL, uL, pL, aLph, EL, unL, SL)
    UsR = star(mR, rR, uR, pR, aRph, ER, unR, SR)
    FsL = FL + SL * (UsL - UL)
    FsR = FR + SR * (UsR - UR)

    # face velocity: contact speed inside the fan, the upwind velocity outside
    u_face = np.where(SL >= 0.0, unL, np.where(SR <= 0.0, unR, Ss))
    F = np.where(Ss > 0.0, FsL, np.where(Ss < 0.0, FsR, 0.5 * (FsL + FsR)))
    F = np.where(SL >= 0.0, FL, np.where(SR <= 0.0, FR, F))
    # volume fractions: contact-upwinded value times face velocity
    a_up = np.where(Ss > 0.0, aLph[:-1], np.where(Ss < 0.0, aRph[:-1], 0.5 * (aLph[:-1] + aRph[:-1])))
    F[lay.alpha_c] = a_up * u_face
    return HllcBreakdown(SL, Ss, SR, F, u_face,
                         UsL if keep_star else None, UsR if keep_star else None)


def hllc_flux(WL: PrimitiveState, WR: PrimitiveState, mats, axis=0) -> HllcBreakdown:
    """HLLC flux between face states given as :class:`PrimitiveState` arrays.

    Wave speeds are Davis bounds built on the mixture (Wood) sound speed.
    """
    mats = as_materials(mats)
    lay = Layout(WL.n_phases, WL.ndim)
    return _hllc_stack(pack_primitive(WL), pack_primitive(WR), mats, lay, axis, keep_star=True)


def nonconservative_alpha_update(alpha, A_ratio, u_face, dx, axis=0):
    """``(A / A_l alpha_l)_i (u_{i+1/2} - u_{i-1/2}) / dx`` for the stored fractions.

    ``alpha`` and ``A_ratio`` are cell arrays ``(N-1, ...)``; ``u_face`` has
    one more entry than the cells along ``axis``.
    """
    ax = axis
    div = (_take(u_face[None], ax + 1, 1, None) - _take(u_face[None], ax + 1, 0, -1))[0] / dx
    return A_ratio * alpha * div


# ---------------------------------------------------------------- stage

@dataclass
class HydroConfig:
    limiter: str = "minmod"
    alpha_limiter: Optional[str] = None
    cfl: float = 0.5

    def __post_init__(self):
        _phi(self.limiter)
        if self.alpha_limiter is not None:
            _phi(self.alpha_limiter)
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigError(f"cfl must lie in (0, 1], got {self.cfl}")


def wood_sound_speed(W: PrimitiveState, mats):
    mats = as_materials(mats)
    Ak = eos.phase_moduli(W.p, mats, W.p.ndim)
    A = 1.0 / np.sum(W.alpha / Ak, axis=0)
    return np.sqrt(A / W.density)


def compute_dt_cfl(W: PrimitiveState, grid: Grid, mats, cfl):
    """``cfl * min_d min_cells dx_d / (|u_d| + a)`` with the Wood sound speed ``a``."""
    if not 0.0 < cfl <= 1.0:
        raise ConfigError(f"cfl must lie in (0, 1], got {cfl}")
    a = wood_sound_speed(W, mats)
    dt = np.inf
    for d, h in enumerate(grid.dx):
        s = np.abs(W.u[d]) + a
        if not np.all(np.isfinite(s)):
            raise ClosureError("non-finite wave speed", np.flatnonzero(~np.isfinite(s)))
        dt = min(dt, h / np.max(s))
    return cfl * dt


def hydro_rhs(U: ConservedState, grid: Grid, mats, cfg: HydroConfig = HydroConfig(), W=None):
    """Semi-discrete right-hand side and boundary flux rate.

    Returns ``(dUdt, boundary_rate)`` where ``boundary_rate[v]`` is the rate of
    change of the domain total of conserved row ``v`` (per unit of the
    transverse extent) caused by fluxes through the domain boundary.
    """
    mats = as_materials(mats)
    N, d = U.n_phases, U.ndim
    lay = Layout(N, d)
    if W is None:
        W = primitive_from_conserved(U, mats)
    q = pack_primitive(W)
    g = grid.ghost
    qp = grid.pad(q, normal_rows=[lay.velocity_rows(a) for a in range(d)])

    # cell-centred ratio A / A_l for the stored fractions
    Ak = eos.phase_moduli(W.p, mats, d)
    A = 1.0 / np.sum(W.alpha / Ak, axis=0)
    A_ratio = A / Ak[:-1]

    dU = np.zeros_like(U.data)
    brate = np.zeros(lay.n_cons)
    for axis in range(d):
        # trim ghost layers of the transverse axes
        qa = qp
        for other in range(d):
            if other != axis:
                qa = _take(qa, other + 1, g, g + grid.shape[other])
        n = grid.shape[axis]
        qL, qR = muscl_reconstruct(qa, axis, n, g, cfg.limiter, alpha_rows=lay.alpha,
                                   alpha_limiter=cfg.alpha_limiter)
        hb = _hllc_stack(qL, qR, mats, lay, axis)
        F = hb.flux
        h = grid.dx[axis]
        dU -= (_take(F, axis + 1, 1, None) - _take(F, axis + 1, 0, -1)) / h
        if N > 1:
            dU[lay.alpha_c] += nonconservative_alpha_update(W.alpha[:-1], A_ratio, hb.u_face, h, axis)
        area = grid.cell_volume / h
        lo = _take(F, axis + 1, 0, 1)
        hi = _take(F, axis + 1, n, n + 1)
        brate += (lo - hi).reshape(lay.n_cons, -1).sum(axis=1) * area
    return dU, brate


@dataclass
class HydroResult:
    U: ConservedState
    boundary_delta: np.ndarray


def hydro_step(U: ConservedState, grid: Grid, mats, dt, cfg: HydroConfig = HydroConfig(),
               W=None) -> HydroResult:
    """One SSP-RK3 step of the hyperbolic system.

    ``boundary_delta`` is the change of each conserved domain total caused by
    boundary fluxes over the step (zero for periodic boundaries), so that
    ``total(U_new) - total(U) - boundary_delta`` measures conservation error.
    """
    mats = as_materials(mats)
    N = U.n_phases
    L0, b0 = hydro_rhs(U, grid, mats, cfg, W)
    U1 = ConservedState(U.data + dt * L0, N)
    L1, b1 = hydro_rhs(U1, grid, mats, cfg)
    U2 = ConservedState(0.75 * U.data + 0.25 * (U1.data + dt * L1), N)
    L2, b2 = hydro_rhs(U2, grid, mats, cfg)
    U3 = ConservedState(U.data / 3.0 + 2.0 / 3.0 * (U2.data + dt * L2), N)
    w0, w1, w2 = RK3_WEIGHTS
    return HydroResult(U3, dt * (w0 * b0 + w1 * b1 + w2 * b2))


def domain_totals(U: ConservedState, grid: Grid):
    """Cell-volume weighted sums of every conserved row."""
    return U.data.reshape(U.data.shape[0], -1).sum(axis=1) * grid.cell_volume
