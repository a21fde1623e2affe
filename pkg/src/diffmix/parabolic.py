"""Solvers for ``c dv/dt = div(k grad v) + f`` on a structured grid.

Two inner solvers share one discrete operator:

* ``lim``: the explicit locally iterative method with Chebyshev parameters,
  ``v^(m) = (v^n + dt b_m v^(m-1) + dt (L v^(m-1) + f)) / (1 + dt b_m)``,
  ``m = 1 .. 2P - 1``, where ``L = c^-1 div(k grad .)``;
* ``implicit``: backward Euler ``(C/dt - K) v = C v^n / dt + f`` by
  Jacobi-preconditioned conjugate gradients.

Nonlinear coefficients are handled by :func:`picard_outer`, which lags them
at the previous iterate.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

import numpy as np
from scipy import sparse

from .errors import ConfigError, ConvergenceError, DivergenceError

OP_BOUNDARIES = ("periodic", "neumann", "odd")
DEFAULT_MAX_STENCIL = 12


def _take(a, ax, start, stop):
    sl = [slice(None)] * a.ndim
    sl[ax] = slice(start, stop)
    return a[tuple(sl)]


def _pad1(v, ax, bc):
    """One ghost layer along array axis ``ax``: wrap, mirror, or negated mirror."""
    lo_kind, hi_kind = bc
    if lo_kind == "periodic":
        return np.concatenate([_take(v, ax, -1, None), v, _take(v, ax, 0, 1)], axis=ax)
    lo = _take(v, ax, 0, 1)
    hi = _take(v, ax, -1, None)
    if lo_kind == "odd":
        lo = -lo
    if hi_kind == "odd":
        hi = -hi
    return np.concatenate([lo, v, hi], axis=ax)


def _normalize_bc(bc, ndim):
    if bc is None:
        bc = "neumann"
    if isinstance(bc, str):
        bc = ((bc, bc),) * ndim
    bc = tuple((b, b) if isinstance(b, str) else tuple(b) for b in bc)
    if len(bc) != ndim:
        raise ConfigError("one boundary pair per axis is required")
    for pair in bc:
        for b in pair:
            if b not in OP_BOUNDARIES:
                raise ConfigError(f"unknown diffusion boundary {b!r}; use one of {OP_BOUNDARIES}")
        if (pair[0] == "periodic") != (pair[1] == "periodic"):
            raise ConfigError("periodic must be set on both sides of an axis")
    return bc


@dataclass
class DiffusionOperator:
    """Discrete ``div(k grad v)`` with face coefficients and cell capacities.

    ``k_faces[d]`` has ``n_d + 1`` entries along axis ``d`` (boundary faces
    included; for periodic axes the first and last face coincide).
    ``bc[d]`` is a ``(lower, upper)`` pair from ``periodic``, ``neumann``
    (zero flux) and ``odd`` (antisymmetric ghost: ``v = 0`` on the wall).
    """

    k_faces: List[np.ndarray]
    c: np.ndarray
    dx: Tuple[float, ...]
    bc: Tuple[Tuple[str, str], ...] = None

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float)
        self.dx = tuple(float(h) for h in np.atleast_1d(self.dx))
        self.bc = _normalize_bc(self.bc, self.c.ndim)
        if len(self.k_faces) != self.c.ndim or len(self.dx) != self.c.ndim:
            raise ConfigError("operator needs one face array and spacing per axis")
        if np.any(~(self.c > 0.0)):
            raise ConfigError("capacities must be positive")
        for d, k in enumerate(self.k_faces):
            if k.shape[d] != self.c.shape[d] + 1:
                raise ConfigError(f"face array {d} has wrong length {k.shape[d]}")
            if np.any(k < 0.0):
                raise ConfigError("diffusion coefficients must be non-negative")

    @classmethod
    def from_cells(cls, k_cell, c, dx, bc=None):
        """Face coefficients as arithmetic means of neighbouring cell values."""
        k_cell = np.asarray(k_cell, dtype=float)
        c = np.broadcast_to(np.asarray(c, dtype=float), k_cell.shape)
        bcn = _normalize_bc(bc, k_cell.ndim)
        faces = []
        for d in range(k_cell.ndim):
            # ghost coefficients mirror the edge cell (or wrap)
            kind = "periodic" if bcn[d][0] == "periodic" else "neumann"
            kp = _pad1(k_cell, d, (kind, kind))
            faces.append(0.5 * (_take(kp, d, 0, -1) + _take(kp, d, 1, None)))
        return cls(faces, np.array(c), dx, bcn)

    @property
    def ndim(self):
        return self.c.ndim

    def flux_divergence(self, v, axes=None):
        """``K v = sum_d d/dx_d (k dv/dx_d)`` (capacity not applied)."""
        out = np.zeros_like(v, dtype=float)
        for d in (range(self.ndim) if axes is None else axes):
            vp = _pad1(v, d, self.bc[d])
            flux = self.k_faces[d] * np.diff(vp, axis=d)
            out += np.diff(flux, axis=d) / self.dx[d] ** 2
        return out

    def apply(self, v, axes=None):
        """``L v = c^-1 K v``."""
        return self.flux_divergence(v, axes) / self.c

    def diagonal(self, axes=None):
        """Diagonal of ``-K`` including the boundary ghost treatment."""
        diag = np.zeros(self.c.shape)
        for d in (range(self.ndim) if axes is None else axes):
            k = self.k_faces[d]
            h2 = self.dx[d] ** 2
            diag += (_take(k, d, 0, -1) + _take(k, d, 1, None)) / h2
            lo_kind, hi_kind = self.bc[d]
            for kind, cell, face in ((lo_kind, 0, 0), (hi_kind, -1, -1)):
                if kind == "periodic":
                    continue
                sl = [slice(None)] * self.ndim
                sl[d] = cell
                fsl = [slice(None)] * self.ndim
                fsl[d] = face
                diag[tuple(sl)] += (k[tuple(fsl)] if kind == "odd" else -k[tuple(fsl)]) / h2
        return diag

    def matrix(self):
        """Sparse matrix of :meth:`flux_divergence` on the flattened (C-order) cells."""
        n = self.c.size
        idx = np.arange(n).reshape(self.c.shape)
        rows, cols, vals = [], [], []

        def couple(a, b, w):
            # flux w (v_b - v_a) enters a, leaves b
            rows.extend([a, a, b, b])
            cols.extend([a, b, b, a])
            vals.extend([-w, w, -w, w])

        for d in range(self.ndim):
            k = self.k_faces[d]
            h2 = self.dx[d] ** 2
            couple(_take(idx, d, 0, -1).ravel(), _take(idx, d, 1, None).ravel(),
                   (_take(k, d, 1, -1) / h2).ravel())
            first, last = _take(idx, d, 0, 1).ravel(), _take(idx, d, -1, None).ravel()
            for kind, cell, other, w in ((self.bc[d][0], first, last, _take(k, d, 0, 1).ravel() / h2),
                                         (self.bc[d][1], last, first, _take(k, d, -1, None).ravel() / h2)):
                if kind == "periodic":
                    rows.extend([cell, cell])
                    cols.extend([cell, other])
                    vals.extend([-w, w])
                elif kind == "odd":
                    rows.append(cell)
                    cols.append(cell)
                    vals.append(-2.0 * w)
        return sparse.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                                 shape=(n, n))

    def restrict(self, axes):
        """Operator keeping only the given axes (others get zero coefficients)."""
        faces = [k if d in axes else np.zeros_like(k) for d, k in enumerate(self.k_faces)]
        return DiffusionOperator(faces, self.c, self.dx, self.bc)


def spectral_bound(op: DiffusionOperator, axes=None):
    """Gershgorin bound on the spectral radius of ``-L``.

    Each row of ``L`` has diagonal magnitude and off-diagonal sum both bounded
    by ``sum_d (k_+ + k_-) / (c dx_d^2)``, giving
    ``lambda_max = max_i 2 sum_d (k_{i+1/2} + k_{i-1/2}) / (c_i dx_d^2)``.
    """
    s = np.zeros(op.c.shape)
    for d in (range(op.ndim) if axes is None else axes):
        k = op.k_faces[d]
        s += (_take(k, d, 0, -1) + _take(k, d, 1, None)) / op.dx[d] ** 2
    return float(np.max(2.0 * s / op.c)) if s.size else 0.0


@dataclass
class LimSchedule:
    P: int
    b: np.ndarray
    lam: float


def stencil_count(dt, lam):
    return max(1, math.ceil(math.pi / 4.0 * math.sqrt(dt * lam + 1.0)))


def lim_schedule(dt, lam, P=None) -> LimSchedule:
    """Chebyshev parameters ``b = (a_P..a_2, a_P..a_1)`` for ``2P - 1`` iterations.

    ``P = ceil(pi/4 sqrt(dt lam + 1))``, ``beta_m = cos((2m-1) pi / (2P))`` and
    ``a_m = lam (beta_1 - beta_m) / (1 + beta_1)``.
    """
    if dt <= 0 or lam < 0:
        raise ConfigError("lim_schedule needs dt > 0 and lam >= 0")
    if P is None:
        P = stencil_count(dt, lam)
    m = np.arange(1, P + 1)
    beta = np.cos((2 * m - 1) * np.pi / (2 * P))
    a = lam * (beta[0] - beta) / (1.0 + beta[0])
    a[0] = 0.0
    b = np.concatenate([a[1:][::-1], a[::-1]])
    return LimSchedule(P, b, lam)


@dataclass
class ParabolicSolution:
    """Final field plus ``(dt_j, predictor_j)`` for each explicit sub-step.

    For the implicit solver there is one entry whose predictor is the
    final field itself.
    """

    v: np.ndarray
    stages: List[Tuple[float, np.ndarray]] = field(default_factory=list)
    iterations: int = 0


def lim_solve(v_n, op: DiffusionOperator, f, dt, schedule: LimSchedule = None, axes=None):
    """One LIM cycle; returns ``(v_predicted, v_final)``.

    ``v_predicted`` is the ``2P - 2``-th iterate (``v_n`` itself when
    ``P = 1``, where the method is forward Euler).
    """
    v_n = np.asarray(v_n, dtype=float)
    if schedule is None:
        schedule = lim_schedule(dt, spectral_bound(op, axes))
    rhs_f = 0.0 if f is None else np.asarray(f, dtype=float) / op.c
    v = v_n
    pred = v_n
    nb = len(schedule.b)
    for j, bm in enumerate(schedule.b):
        if j == nb - 1:
            pred = v
        v = (v_n + dt * bm * v + dt * (op.apply(v, axes) + rhs_f)) / (1.0 + dt * bm)
    if not np.all(np.isfinite(v)):
        raise DivergenceError("LIM produced non-finite values")
    return pred, v


def lim_step(v_n, op: DiffusionOperator, f, dt, max_stencil=DEFAULT_MAX_STENCIL, axes=None,
             bounds=None):
    """LIM over ``dt`` split into equal sub-steps whose stencil count stays ``<= max_stencil``.

    Long Chebyshev cycles lose their stability to floating-point round-off,
    so very stiff steps are covered by several shorter cycles.  ``bounds``
    (a dict keyed by ``axes``) keeps the largest spectral bound seen so far;
    an outer nonlinear iteration passes the same dict every time so that the
    schedule cannot flip between two stencil counts from one iterate to the next.
    """
    lam = spectral_bound(op, axes)
    if bounds is not None:
        lam = max(lam, bounds.get(axes, 0.0))
        bounds[axes] = lam
    nsub = 1
    if stencil_count(dt, lam) > max_stencil:
        # largest dt*lam giving P <= max_stencil
        cap = (max_stencil * 4.0 / math.pi) ** 2 - 1.0
        nsub = math.ceil(dt * lam / cap)
        while stencil_count(dt / nsub, lam) > max_stencil:
            nsub += 1
    h = dt / nsub
    sched = lim_schedule(h, lam)
    v = np.asarray(v_n, dtype=float)
    stages = []
    for _ in range(nsub):
        pred, v = lim_solve(v, op, f, h, sched, axes)
        stages.append((h, pred))
    return ParabolicSolution(v, stages, nsub * len(sched.b))


def lim_step_split(v_n, op: DiffusionOperator, f, dt, max_stencil=DEFAULT_MAX_STENCIL, bounds=None):
    """Dimension-split LIM: Strang ordering ``X(dt/2) Y(dt) X(dt/2)`` in 2D."""
    if op.ndim == 1:
        return lim_step(v_n, op, f, dt, max_stencil, bounds=bounds)
    half_f = None if f is None else 0.5 * np.asarray(f, dtype=float)
    s1 = lim_step(v_n, op, half_f, 0.5 * dt, max_stencil, axes=(0,), bounds=bounds)
    s2 = lim_step(s1.v, op, half_f, dt, max_stencil, axes=(1,), bounds=bounds)
    s3 = lim_step(s2.v, op, half_f, 0.5 * dt, max_stencil, axes=(0,), bounds=bounds)
    return ParabolicSolution(s3.v, s1.stages + s2.stages + s3.stages,
                             s1.iterations + s2.iterations + s3.iterations)


def pcg(apply_A, b, diag, x0, rtol=1e-12, max_iter=None):
    """Jacobi-preconditioned conjugate gradients for an SPD operator.

    Converged when ``||b - A x|| <= rtol ||b||``.  Returns ``(x, residuals)``.
    """
    if max_iter is None:
        max_iter = max(1000, 10 * b.size)
    x = np.array(x0, dtype=float)
    r = b - apply_A(x)
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        bnorm = 1.0
    inv = 1.0 / diag
    z = inv * r
    p = z.copy()
    rz = np.vdot(r, z)
    hist = [np.linalg.norm(r) / bnorm]
    for _ in range(max_iter):
        if hist[-1] <= rtol:
            return x, hist
        Ap = apply_A(p)
        alpha = rz / np.vdot(p, Ap)
        x += alpha * p
        r -= alpha * Ap
        hist.append(np.linalg.norm(r) / bnorm)
        z = inv * r
        rz_new = np.vdot(r, z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    if hist[-1] <= rtol:
        return x, hist
    raise ConvergenceError(f"PCG did not reach rtol={rtol:g} in {max_iter} iterations", hist)


def implicit_solve(v_n, op: DiffusionOperator, f, dt, rtol=1e-12, max_iter=None):
    """Backward Euler ``(C/dt - K) v = C v_n / dt + f`` by Jacobi-PCG."""
    v_n = np.asarray(v_n, dtype=float)
    cdt = op.c / dt
    b = cdt * v_n
    if f is not None:
        b = b + f
    A = sparse.diags(cdt.ravel()) - op.matrix()
    diag = A.diagonal()
    v, hist = pcg(A.dot, b.ravel(), diag, v_n.ravel(), rtol, max_iter)
    return v.reshape(v_n.shape), hist


def inner_solve(kind, v_n, op, f, dt, max_stencil=DEFAULT_MAX_STENCIL, rtol=1e-12, bounds=None):
    """Dispatch to the ``lim`` or ``implicit`` solver; returns :class:`ParabolicSolution`."""
    if kind == "lim":
        return lim_step_split(v_n, op, f, dt, max_stencil, bounds)
    if kind == "implicit":
        v, hist = implicit_solve(v_n, op, f, dt, rtol)
        return ParabolicSolution(v, [(dt, v)], len(hist) - 1)
    raise ConfigError(f"unknown parabolic solver {kind!r}; use 'lim' or 'implicit'")


@dataclass
class PicardResult:
    v: np.ndarray
    iterations: int
    residuals: List[float]
    solution: ParabolicSolution
    op: DiffusionOperator = None


def _same(a, b):
    if a is None or b is None:
        return a is b
    return np.array_equal(a, b)


def _ops_equal(o1, o2):
    return (np.array_equal(o1.c, o2.c)
            and all(np.array_equal(k1, k2) for k1, k2 in zip(o1.k_faces, o2.k_faces)))


def picard_outer(v_n, assemble: Callable, dt, inner="lim", tol=1e-8, max_iter=20,
                 max_stencil=DEFAULT_MAX_STENCIL, rtol=1e-12):
    """Fixed-point iteration with coefficients lagged at the previous iterate.

    ``assemble(v)`` returns ``(DiffusionOperator, f)``.  Stops when
    ``max|v^(s+1) - v^(s)| <= tol max|v^(s+1)|``; a problem whose assembled
    coefficients do not change with ``v`` is recognised as linear and
    returns after one iteration.
    """
    v_n = np.asarray(v_n, dtype=float)
    v = v_n
    op, f = assemble(v)
    residuals = []
    bounds = {}
    for s in range(1, max_iter + 1):
        sol = inner_solve(inner, v_n, op, f, dt, max_stencil, rtol, bounds)
        v_new = sol.v
        change = float(np.max(np.abs(v_new - v))) / max(float(np.max(np.abs(v_new))), 1e-300)
        residuals.append(change)
        op_new, f_new = assemble(v_new)
        if change <= tol or (_ops_equal(op, op_new) and _same(f, f_new)):
            return PicardResult(v_new, s, residuals, sol, op)
        v, op, f = v_new, op_new, f_new
    raise ConvergenceError(f"Picard iteration did not converge in {max_iter} iterations", residuals)
