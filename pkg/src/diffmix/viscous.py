"""Viscous stage: momentum diffusion plus per-phase viscous work.

The velocity obeys ``rho du/dt = div(tau)`` with Newtonian stress
``tau = mu (grad u + grad u^T - 2/3 div(u) I)`` (``tau = 4/3 mu du/dx`` in 1D)
and mixture viscosity ``mu = sum_k alpha_k mu_k``.  Partial densities do not
change; each phase total energy receives the work ``div(alpha_k tau_k . u)``.
Afterwards the phase internal energies fix a new pressure and volume
fractions through the saturation constraint.
"""

from dataclasses import dataclass
import numpy as np

from . import eos
from .errors import ConfigError
from .materials import as_materials
from .parabolic import DiffusionOperator, picard_outer, DEFAULT_MAX_STENCIL
from .state import ConservedState, Grid, PrimitiveState


@dataclass
class ViscousConfig:
    enabled: bool = True
    mu_bulk: float = 0.0
    tol: float = 1e-8
    max_iter: int = 20
    solver: str = "lim"
    max_stencil: int = DEFAULT_MAX_STENCIL

    def __post_init__(self):
        if self.mu_bulk < 0:
            raise ConfigError("bulk viscosity must be non-negative")
        if self.solver not in ("lim", "implicit"):
            raise ConfigError(f"unknown solver {self.solver!r}")


@dataclass
class ViscousResult:
    U: ConservedState
    phase_energy: np.ndarray
    p: np.ndarray
    alpha: np.ndarray
    e: np.ndarray
    iterations: int = 0


def mixture_viscosity(alpha, mu_k):
    """``mu = sum_k alpha_k mu_k``."""
    return np.sum(np.asarray(alpha) * np.asarray(mu_k), axis=0)


def phase_viscosities(W: PrimitiveState, mats):
    mats = as_materials(mats)
    return np.stack([mat.viscosity_at(W.rho[k], W.T[k]) for k, mat in enumerate(mats)])


def diffusion_bc(grid: Grid, component=None):
    """Map hydrodynamic boundary tags to diffusion-operator tags.

    Reflective walls are zero-flux for scalars and antisymmetric (no-penetration)
    for the wall-normal velocity component ``component``.
    """
    out = []
    for axis, pair in enumerate(grid.bc):
        tags = []
        for kind in pair:
            if kind == "periodic":
                tags.append("periodic")
            elif kind == "reflective" and component == axis:
                tags.append("odd")
            else:
                tags.append("neumann")
        out.append(tuple(tags))
    return tuple(out)


def _take(a, ax, start, stop):
    sl = [slice(None)] * a.ndim
    sl[ax] = slice(start, stop)
    return a[tuple(sl)]


def _face_mean(q_cells, grid: Grid, axis, rows_normal=None):
    """Arithmetic face means (``n+1`` along ``axis``) of a stacked cell field."""
    qp = grid.pad(q_cells, normal_rows=rows_normal, width=1)
    for other in range(grid.ndim):
        if other != axis:
            qp = _take(qp, other + 1, 1, 1 + grid.shape[other])
    return 0.5 * (_take(qp, axis + 1, 0, -1) + _take(qp, axis + 1, 1, None))


def _face_gradient(q_cells, grid: Grid, axis, rows_normal=None):
    qp = grid.pad(q_cells, normal_rows=rows_normal, width=1)
    for other in range(grid.ndim):
        if other != axis:
            qp = _take(qp, other + 1, 1, 1 + grid.shape[other])
    return np.diff(qp, axis=axis + 1) / grid.dx[axis]


def _face_tangential_gradient(q_cells, grid: Grid, axis, tangent, rows_normal=None):
    """``d q / d x_tangent`` on the faces normal to ``axis`` (central differences, averaged)."""
    qp = grid.pad(q_cells, normal_rows=rows_normal, width=1)
    ax_t = tangent + 1
    dct = (_take(qp, ax_t, 2, None) - _take(qp, ax_t, 0, -2)) / (2.0 * grid.dx[tangent])
    # dct is interior along the tangent and padded (n+2) along ``axis``
    return 0.5 * (_take(dct, axis + 1, 0, -1) + _take(dct, axis + 1, 1, None))


def _div_faces(F, grid: Grid, axis):
    return np.diff(F, axis=axis + 1) / grid.dx[axis]


def _work_1d(u, kn, grid: Grid, dt):
    """Per-phase work increments ``dt d/dx (kn_k du/dx u)`` for velocity ``u`` of shape (1, n)."""
    normal = [(0,)]
    ug = _face_gradient(u, grid, 0, normal)[0]
    uf = _face_mean(u, grid, 0, normal)[0]
    kf = _face_mean(kn, grid, 0)
    return dt * np.diff(kf * ug * uf, axis=1) / grid.dx[0]


def viscous_step(U: ConservedState, phase_energy, W: PrimitiveState, grid: Grid, mats, dt,
                 cfg: ViscousConfig = ViscousConfig()) -> ViscousResult:
    """Diffuse momentum and update phase energies; then re-close ``(p, alpha)``.

    ``W`` supplies the stage-entry ``(rho_k, T_k, alpha_k)`` at which the phase
    viscosities are evaluated (held fixed inside the stage).  Bulk viscosity,
    if any, is attributed to the phases in proportion to ``alpha_k``.
    """
    mats = as_materials(mats)
    m = U.m
    rho = m.sum(axis=0)
    u0 = U.mom / rho
    mu_k = phase_viscosities(W, mats)
    shear = W.alpha * mu_k
    dilat = W.alpha * (cfg.mu_bulk - 2.0 / 3.0 * mu_k)
    Ek = np.array(phase_energy, dtype=float)
    iters = 0
    if not cfg.enabled or not (np.any(mu_k > 0.0) or cfg.mu_bulk > 0.0):
        u = u0
    elif grid.ndim == 1:
        kn = 2.0 * shear + dilat
        op = DiffusionOperator.from_cells(kn.sum(axis=0), rho, grid.dx, diffusion_bc(grid, 0))
        res = picard_outer(u0[0], lambda v: (op, None), dt, cfg.solver, cfg.tol, cfg.max_iter,
                           cfg.max_stencil)
        iters = res.iterations
        u = res.v[None]
        # the last LIM iteration uses the predictor, so the work does too
        for h, pred in res.solution.stages:
            Ek += _work_1d(pred[None], kn, grid, h)
    else:
        u, iters = _velocity_2d(u0, shear.sum(axis=0), dilat.sum(axis=0), rho, grid, dt, cfg)
        Ek += dt * _work_2d(u, shear, dilat, grid)

    ke = 0.5 * np.sum(u * u, axis=0)
    e = Ek / m - ke
    p, alpha = eos.solve_pressure_volume_fractions(m, e, mats)
    data = U.data.copy()
    N, d = U.n_phases, U.ndim
    data[N:N + d] = rho * u
    data[N + d] = Ek.sum(axis=0)
    data[N + d + 1:] = alpha[:-1]
    return ViscousResult(ConservedState(data, N), Ek, p, alpha, e, iters)


def _velocity_gradients(u, grid: Grid, axis):
    """``g[i][j] = d u_i / d x_j`` on the faces normal to ``axis``."""
    normal = [(a,) for a in range(grid.ndim)]
    d = grid.ndim
    cols = [_face_gradient(u, grid, axis, normal) if j == axis
            else _face_tangential_gradient(u, grid, axis, j, normal) for j in range(d)]
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _stress_faces(u, shear, dilat, grid: Grid, axis):
    """Rows ``tau_{axis, j}`` on faces normal to ``axis`` for stacked coefficients.

    ``tau = shear (grad u + grad u^T) + dilat div(u) I`` with ``shear`` and
    ``dilat`` of shape ``(K, *cells)``; each returned row is ``(K, *faces)``.
    """
    g = _velocity_gradients(u, grid, axis)
    d = grid.ndim
    div = sum(g[i][i] for i in range(d))
    sf = _face_mean(shear, grid, axis)
    df = _face_mean(dilat, grid, axis)
    tau = []
    for j in range(d):
        t = sf * (g[axis][j] + g[j][axis])
        if j == axis:
            t = t + df * div
        tau.append(t)
    return tau


def _velocity_2d(u0, shear, dilat, rho, grid: Grid, dt, cfg: ViscousConfig):
    """Solve each velocity component with its normal-stress operator; cross terms explicit."""
    u_new = u0.copy()
    iters = 0
    for i in range(grid.ndim):
        k_faces = []
        src = np.zeros_like(rho)
        for axis in range(grid.ndim):
            sf = _face_mean(shear[None], grid, axis)[0]
            g = _velocity_gradients(u0, grid, axis)
            if axis == i:
                k_faces.append(2.0 * sf + _face_mean(dilat[None], grid, axis)[0])
                df = _face_mean(dilat[None], grid, axis)[0]
                cross = df * sum(g[j][j] for j in range(grid.ndim) if j != i)
            else:
                k_faces.append(sf)
                cross = sf * g[axis][i]
            src += _div_faces(cross[None], grid, axis)[0]
        op = DiffusionOperator(k_faces, rho, grid.dx, diffusion_bc(grid, i))
        res = picard_outer(u0[i], lambda v, op=op, src=src: (op, src), dt, cfg.solver, cfg.tol,
                           cfg.max_iter, cfg.max_stencil)
        u_new[i] = res.v
        iters += res.iterations
    return u_new, iters


def _work_2d(u, shear, dilat, grid: Grid):
    """``div(tau_k . u)`` per phase with per-phase coefficients."""
    normal = [(a,) for a in range(grid.ndim)]
    out = np.zeros_like(shear)
    for axis in range(grid.ndim):
        tau = _stress_faces(u, shear, dilat, grid, axis)
        uf = _face_mean(u, grid, axis, normal)
        flux = sum(tau[j] * uf[j][None] for j in range(grid.ndim))
        out += _div_faces(flux, grid, axis)
    return out
