"""Temperature relaxation and equilibrium heat conduction under pressure equilibrium.

At a common temperature ``T`` the phases of a cell also share a pressure; the
saturation constraint

    ``sum_k m_k (gamma_k - 1) cv_k T / (p + p_inf_k) = 1``

fixes ``p(T)``, and the volume fractions ``alpha_k = m_k (gamma_k - 1) cv_k T
/ (p + p_inf_k)`` follow.  The total internal energy along that manifold is

    ``E(T) = T sum_k m_k cv_k + sum_k p_inf_k alpha_k(T) + sum_k m_k w_k``,

whose slope ``dE/dT`` is the effective heat capacity.  ``E`` is strictly
increasing, so relaxation (find ``T`` with ``E(T) = E_int``) has a unique
solution.
"""

from dataclasses import dataclass

import numpy as np

from . import eos
from .errors import ClosureError, ConfigError, ThermodynamicError
from .materials import as_materials
from .parabolic import DiffusionOperator, picard_outer, DEFAULT_MAX_STENCIL
from .state import ConservedState, Grid, PrimitiveState
from .viscous import diffusion_bc


@dataclass
class EquilibriumState:
    """Cell states at a common temperature ``T`` and pressure ``p``."""

    T: np.ndarray
    p: np.ndarray
    alpha: np.ndarray
    rho: np.ndarray
    e: np.ndarray
    E_int: np.ndarray

    def primitive(self, u):
        N = self.alpha.shape[0]
        return PrimitiveState(rho=self.rho, u=u, p=self.p, alpha=self.alpha,
                              T=np.broadcast_to(self.T, (N,) + self.T.shape).copy(), e=self.e)


def equilibrium_at(m, T, mats) -> EquilibriumState:
    """Pressure, fractions, densities and energies of cells at common temperature ``T``."""
    mats = as_materials(mats)
    m = np.asarray(m, dtype=float)
    T = np.asarray(T, dtype=float)
    if np.any(~(T > 0.0)):
        raise ThermodynamicError("temperature must be positive")
    nd = m.ndim - 1
    g, pinf, cv, w = (mats.col(n, nd) for n in ("gamma", "p_inf", "cv", "w"))
    c = m * (g - 1.0) * cv * T
    d = pinf * np.ones_like(c)
    p = eos.solve_saturation(c, d)
    alpha = c / (p + d)
    rho = (p + pinf) / ((g - 1.0) * cv * T)
    e = cv * T + pinf / rho + w
    E = T * np.sum(m * cv, axis=0) + np.sum(pinf * alpha, axis=0) + np.sum(m * w, axis=0)
    return EquilibriumState(T, p, alpha, rho, e, E)


def effective_heat_capacity(m, T, p, alpha, mats):
    """``dE/dT`` along the saturation constraint.

    ``dp/dT = (1/T) / sum_j alpha_j / (p + p_inf_j)`` and
    ``dalpha_k/dT = alpha_k / T - alpha_k / (p + p_inf_k) dp/dT``, so
    ``A = sum_k m_k cv_k + sum_k p_inf_k dalpha_k/dT``.
    """
    mats = as_materials(mats)
    m = np.asarray(m, dtype=float)
    nd = m.ndim - 1
    pinf, cv = mats.col("p_inf", nd), mats.col("cv", nd)
    s = 1.0 / (p + pinf)
    dpdT = (1.0 / T) / np.sum(alpha * s, axis=0)
    dadT = alpha / T - alpha * s * dpdT
    return np.sum(m * cv, axis=0) + np.sum(pinf * dadT, axis=0)


def relax_temperatures(m, E_int, mats, T_guess=None, tol=1e-14, max_iter=60,
                       method="exact", phase_T=None) -> EquilibriumState:
    """Common temperature ``T`` with ``E(T) = E_int`` at fixed partial densities.

    ``method="exact"`` runs a bracketed Newton iteration on ``T`` (inner
    pressure from the saturation solve); bracket
    ``[(E - sum m w - max p_inf) / S, (E - sum m w - min p_inf) / S]`` with
    ``S = sum m_k cv_k``.  ``method="linearized"`` returns the one-step
    weighted average ``T = sum_jk A_jk T_j / sum_jk A_jk`` of the incoming
    phase temperatures ``phase_T`` (energy then holds only to second order).
    """
    mats = as_materials(mats)
    m = np.asarray(m, dtype=float)
    E_int = np.asarray(E_int, dtype=float)
    nd = m.ndim - 1
    pinf, cv, w = mats.col("p_inf", nd), mats.col("cv", nd), mats.col("w", nd)
    S = np.sum(m * cv, axis=0)
    Ew = E_int - np.sum(m * w, axis=0)

    if method == "linearized":
        if phase_T is None:
            raise ConfigError("linearized relaxation needs the phase temperatures")
        return equilibrium_at(m, linearized_temperature(m, phase_T, mats), mats)
    if method != "exact":
        raise ConfigError(f"unknown relaxation method {method!r}")

    T_lo = (Ew - pinf.max()) / S
    T_hi = (Ew - pinf.min()) / S
    if np.any(~(T_hi > 0.0)):
        bad = np.flatnonzero(~(T_hi > 0.0))
        raise ClosureError("internal energy below the cold-compression floor", bad)
    T_lo = np.maximum(T_lo, np.finfo(float).tiny)
    if T_guess is None:
        T = 0.5 * (T_lo + T_hi)
    else:
        T = np.clip(np.asarray(T_guess, dtype=float), T_lo, T_hi)
    if len(mats) == 1:
        return equilibrium_at(m, T_hi, mats)
    active = np.ones(T.shape, dtype=bool)
    for _ in range(max_iter):
        st = equilibrium_at(m, T, mats)
        F = st.E_int - E_int
        A = effective_heat_capacity(m, T, st.p, st.alpha, mats)
        T_lo = np.where(F < 0.0, T, T_lo)
        T_hi = np.where(F > 0.0, T, T_hi)
        step = -F / A
        trial = T + step
        outside = ~((trial > T_lo) & (trial < T_hi))
        trial = np.where(outside, 0.5 * (T_lo + T_hi), trial)
        done = (np.abs(step) <= tol * T) | (F == 0.0)
        active = ~done
        T = np.where(active, trial, T)
        if not np.any(active):
            break
    else:
        raise ClosureError("temperature relaxation did not converge", np.flatnonzero(active),
                           {"residual": np.abs(F)[active][:8]})
    return equilibrium_at(m, T, mats)


def linearized_temperature(m, phase_T, mats):
    """``sum_jk A_jk T_j / sum_jk A_jk`` with the constrained Jacobian ``A_jk = m_k de_k/dT_j``."""
    mats = as_materials(mats)
    m = np.asarray(m, dtype=float)
    Tk = np.asarray(phase_T, dtype=float)
    nd = m.ndim - 1
    g, pinf, cv = mats.col("gamma", nd), mats.col("p_inf", nd), mats.col("cv", nd)
    c = m * (g - 1.0) * cv * Tk
    d = pinf * np.ones_like(c)
    p = eos.solve_saturation(c, d)
    alpha = c / (p + d)
    s = 1.0 / (p + pinf)
    S = np.sum(alpha * s, axis=0)
    # dp/dT_j = (alpha_j / T_j) / S ; dalpha_k/dT_j = delta_jk alpha_k / T_k - alpha_k s_k dp/dT_j
    dpdT = alpha / Tk / S
    sum_j_dpdT = dpdT.sum(axis=0)
    sum_j_dpdT_Tj = (dpdT * Tk).sum(axis=0)
    num = np.sum(m * cv * Tk, axis=0) + np.sum(pinf * (alpha - alpha * s * sum_j_dpdT_Tj), axis=0)
    den = np.sum(m * cv, axis=0) + np.sum(pinf * (alpha / Tk - alpha * s * sum_j_dpdT), axis=0)
    return num / den


@dataclass
class ThermalConfig:
    relax: bool = True
    conduct: bool = True
    solver: str = "lim"
    tol: float = 1e-8
    max_iter: int = 20
    max_stencil: int = DEFAULT_MAX_STENCIL
    relax_method: str = "exact"
    chord_threshold: float = 1e-12

    def __post_init__(self):
        if self.solver not in ("lim", "implicit"):
            raise ConfigError(f"unknown solver {self.solver!r}")
        if self.relax_method not in ("exact", "linearized"):
            raise ConfigError(f"unknown relaxation method {self.relax_method!r}")


def mixture_conductivity(st: EquilibriumState, mats):
    mats = as_materials(mats)
    lam = np.stack([mat.conductivity_at(st.rho[k], st.T) for k, mat in enumerate(mats)])
    return np.sum(st.alpha * lam, axis=0)


@dataclass
class ConductionResult:
    state: EquilibriumState
    iterations: int
    residuals: list


def heat_conduction_step(m, eq: EquilibriumState, grid: Grid, mats, dt, source=None,
                         cfg: ThermalConfig = ThermalConfig()) -> ConductionResult:
    """Advance ``E(T)`` by ``div(lambda grad T) + I`` over ``dt`` at fixed ``m_k``.

    Written as ``C dT/dt = div(lambda grad T) + I`` with the chord capacity
    ``C = (E(T^s) - E(T^n)) / (T^s - T^n)`` (the tangent capacity where the
    change is negligible) and ``lambda`` lagged at the Picard iterate
    ``T^s``, so that a converged iterate satisfies the energy balance
    exactly.  After the solve, pressure, fractions and densities are
    recomputed from the saturation constraint at the new temperature.
    """
    mats = as_materials(mats)
    T_n = eq.T
    E_n = eq.E_int
    bc = diffusion_bc(grid)
    A_n = effective_heat_capacity(m, T_n, eq.p, eq.alpha, mats)
    lam_n = mixture_conductivity(eq, mats) if cfg.conduct else np.zeros_like(T_n)

    def assemble(T):
        if T is T_n:
            C, lam = A_n, lam_n
        else:
            if np.any(~(T > 0.0)):
                raise ThermodynamicError("conduction iterate produced non-positive temperature")
            st = equilibrium_at(m, T, mats)
            dT = T - T_n
            tangent = effective_heat_capacity(m, T, st.p, st.alpha, mats)
            small = np.abs(dT) <= cfg.chord_threshold * T_n
            C = np.where(small, tangent, (st.E_int - E_n) / np.where(small, 1.0, dT))
            lam = mixture_conductivity(st, mats) if cfg.conduct else np.zeros_like(T)
        op = DiffusionOperator.from_cells(lam, C, grid.dx, bc)
        return op, source

    res = picard_outer(T_n, assemble, dt, cfg.solver, cfg.tol, cfg.max_iter, cfg.max_stencil)
    T = res.v
    if np.any(~(T > 0.0)):
        raise ThermodynamicError("heat conduction produced non-positive temperature")
    return ConductionResult(equilibrium_at(m, T, mats), res.iterations, res.residuals)
