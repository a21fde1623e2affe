"""Stiffened-gas thermodynamics and the mixture closures built on it.

Every ``sg_*`` function accepts either a single :class:`MaterialParams`
(constants broadcast as scalars) or a :class:`Materials` set, in which case the
leading axis of the array arguments indexes the phase.
"""

import numpy as np

from .errors import ClosureError, ThermodynamicError
from .materials import MaterialParams, Materials, as_materials

SATURATION_TOL = 1e-14
MAX_ROOT_ITER = 100


def _consts(mat, like):
    if isinstance(mat, MaterialParams):
        return mat.gamma, mat.p_inf, mat.cv, mat.w
    mats = as_materials(mat)
    nd = max(np.ndim(like) - 1, 0)
    return mats.col("gamma", nd), mats.col("p_inf", nd), mats.col("cv", nd), mats.col("w", nd)


def _check_positive(x, what):
    bad = ~(np.asarray(x) > 0.0)
    if np.any(bad):
        raise ThermodynamicError(f"{what} must be positive; {int(np.count_nonzero(bad))} violation(s), "
                                 f"min value {np.nanmin(x):.6g}")


def sg_pressure(rho, e, mat):
    """Pressure from density and specific internal energy."""
    g, pinf, _, w = _consts(mat, rho)
    p = (g - 1.0) * np.asarray(rho) * (np.asarray(e) - w) - g * pinf
    _check_positive(p + pinf, "p + p_inf")
    return p


def sg_energy(rho, p, mat):
    """Specific internal energy from density and pressure."""
    g, pinf, _, w = _consts(mat, rho)
    _check_positive(np.asarray(p) + pinf, "p + p_inf")
    return (np.asarray(p) + g * pinf) / ((g - 1.0) * np.asarray(rho)) + w


def sg_temperature(rho, p, mat):
    g, pinf, cv, _ = _consts(mat, rho)
    _check_positive(np.asarray(p) + pinf, "p + p_inf")
    return (np.asarray(p) + pinf) / ((g - 1.0) * np.asarray(rho) * cv)


def sg_sound_speed(rho, p, mat):
    g, pinf, _, _ = _consts(mat, rho)
    _check_positive(np.asarray(p) + pinf, "p + p_inf")
    return np.sqrt(g * (np.asarray(p) + pinf) / np.asarray(rho))


def sg_density(p, T, mat):
    """Density at given pressure and temperature (inverse of :func:`sg_temperature`)."""
    g, pinf, cv, _ = _consts(mat, T)
    _check_positive(np.asarray(p) + pinf, "p + p_inf")
    _check_positive(T, "temperature")
    return (np.asarray(p) + pinf) / ((g - 1.0) * cv * np.asarray(T))


def sg_entropy(rho, p, mat):
    """Phase entropy ``cv ln((p + p_inf) / rho**gamma)`` with zero additive constant."""
    g, pinf, cv, _ = _consts(mat, rho)
    return cv * (np.log(np.asarray(p) + pinf) - g * np.log(np.asarray(rho)))


def mixture_pressure_allaire(m, rho_e, alpha, mats, check=True):
    """Isobaric closure of the mixture internal energy.

    Solves ``sum_k alpha_k rho_k e_k(rho_k, p) = rho_e`` for the common
    pressure, which for stiffened gases is explicit:

    ``p = (rho_e - sum alpha_k gamma_k p_inf_k / (gamma_k - 1) - sum m_k w_k)
    / sum alpha_k / (gamma_k - 1)``
    """
    mats = as_materials(mats)
    m = np.asarray(m, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    nd = m.ndim - 1
    g, pinf, w = mats.col("gamma", nd), mats.col("p_inf", nd), mats.col("w", nd)
    num = rho_e - np.sum(alpha * g * pinf / (g - 1.0), axis=0) - np.sum(m * w, axis=0)
    den = np.sum(alpha / (g - 1.0), axis=0)
    p = num / den
    if check:
        ok = np.all(p + pinf > 0.0, axis=0) & np.isfinite(p)
        if not np.all(ok):
            bad = np.flatnonzero(~ok)
            raise ClosureError("mixture pressure violates p + p_inf > 0", bad,
                               {"p": np.ravel(p)[bad[:8]]})
    return p


def solve_saturation(c, d, tol=SATURATION_TOL, max_iter=MAX_ROOT_ITER):
    """Root ``p`` of ``sum_k c_k / (p + d_k) = 1`` with ``p > -min_k d_k``.

    The left side falls strictly from ``+inf`` to zero on the admissible
    interval, so the root is unique.  It is bracketed by
    ``[max(max_k (c_k - d_k), sum c - max d), sum c - min d]`` and found with
    Newton's method started from the left end, where convexity makes the
    iterates increase monotonically; a bisection step replaces any Newton
    step that leaves the bracket.
    """
    c = np.asarray(c, dtype=float)
    d = np.broadcast_to(np.asarray(d, dtype=float), c.shape)
    if np.any(~(c > 0.0)):
        bad = np.flatnonzero(~np.all(c > 0.0, axis=0))
        raise ClosureError("saturation solve needs positive coefficients", bad)
    if c.shape[0] == 1:
        return c[0] - d[0]
    csum = c.sum(axis=0)
    lo = np.maximum(np.max(c - d, axis=0), csum - d.max(axis=0))
    hi = csum - d.min(axis=0)
    d_min = d.min(axis=0)
    p = lo.copy()
    active = np.ones(p.shape, dtype=bool)
    for _ in range(max_iter):
        x = p + d
        f = np.sum(c / x, axis=0) - 1.0
        df = -np.sum(c / (x * x), axis=0)
        lo = np.where(f > 0.0, p, lo)
        hi = np.where(f < 0.0, p, hi)
        step = -f / df
        trial = p + step
        outside = ~((trial > lo) & (trial < hi))
        trial = np.where(outside, 0.5 * (lo + hi), trial)
        # relative change of the smallest denominator bounds the error of every alpha_k;
        # near the pole p ~ -d_min that can be finer than the spacing of p itself
        resolution = np.maximum(tol * (p + d_min), 4.0 * np.spacing(np.abs(p)))
        # a residual at the rounding level of the sum cannot be reduced further
        noise = 2.0 * c.shape[0] * np.finfo(float).eps
        done = (np.abs(step) <= resolution) | (np.abs(f) <= noise)
        active = ~done
        p = np.where(active, trial, p)
        if not np.any(active):
            break
    else:
        bad = np.flatnonzero(active)
        raise ClosureError("saturation root did not converge", bad)
    return p


def solve_pressure_volume_fractions(m, e_phase, mats):
    """Common pressure and volume fractions from partial densities and phase energies.

    Each phase satisfies ``p_k(m_k / alpha_k, e_k) = p``, i.e.
    ``alpha_k(p) = (gamma_k - 1) m_k (e_k - w_k) / (p + gamma_k p_inf_k)``,
    and ``p`` is chosen so that the volume fractions sum to one.

    Returns ``(p, alpha)`` with ``alpha`` of shape ``(N, ...)``.
    """
    mats = as_materials(mats)
    m = np.asarray(m, dtype=float)
    e_phase = np.asarray(e_phase, dtype=float)
    nd = m.ndim - 1
    g, pinf, w = mats.col("gamma", nd), mats.col("p_inf", nd), mats.col("w", nd)
    c = (g - 1.0) * m * (e_phase - w)
    if np.any(~(c > 0.0)):
        bad = np.flatnonzero(~np.all(c > 0.0, axis=0))
        raise ClosureError("phase energy below its stiffened-gas floor (e_k - w_k <= 0)", bad)
    d = g * pinf * np.ones_like(c)
    p = solve_saturation(c, d)
    alpha = c / (p + d)
    return p, alpha


def mixture_wood_modulus(alpha, rho_k, a_k):
    """Harmonic volume-fraction mean ``1/A = sum alpha_k / (rho_k a_k^2)``."""
    alpha = np.asarray(alpha, dtype=float)
    return 1.0 / np.sum(alpha / (np.asarray(rho_k) * np.asarray(a_k) ** 2), axis=0)


def phase_moduli(p, mats, ndim):
    """``A_k = rho_k a_k^2 = gamma_k (p + p_inf_k)``, shaped ``(N, *cells)``."""
    mats = as_materials(mats)
    return mats.col("gamma", ndim) * (np.asarray(p) + mats.col("p_inf", ndim))


def mixture_entropy(W, mats):
    """Specific mixture entropy ``s = sum_k y_k s_k`` of a primitive state.

    Phase entropies are ``cv_k ln((p + p_inf_k) / rho_k**gamma_k)``; the
    additive constants are zero, so only differences are meaningful.
    """
    mats = as_materials(mats)
    rho_k = np.asarray(W.rho)
    m = W.alpha * rho_k
    s_k = sg_entropy(rho_k, W.p, mats)
    return np.sum(m * s_k, axis=0) / np.sum(m, axis=0)


def entropy_density(m, rho_k, p, mats):
    """``rho s = sum_k m_k s_k`` from partial densities, phase densities and pressure."""
    return np.sum(np.asarray(m) * sg_entropy(rho_k, p, as_materials(mats)), axis=0)
