"""Exact Riemann solver for two stiffened-gas fluids meeting at a contact.

With ``P = p + p_inf`` each stiffened gas behaves like an ideal gas in ``P``,
so the classical pressure-function machinery applies side by side, with the
two sides possibly carrying different ``(gamma, p_inf)``.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import ConvergenceError, VacuumError
from .materials import MaterialParams


@dataclass(frozen=True)
class RiemannSolution:
    p_star: float
    u_star: float
    rho_star_L: float
    rho_star_R: float
    wave_L: str
    wave_R: str
    # (head, tail) for rarefactions, (shock, shock) for shocks
    speeds_L: Tuple[float, float]
    speeds_R: Tuple[float, float]
    left: Tuple[float, float, float]
    right: Tuple[float, float, float]
    mat_L: MaterialParams
    mat_R: MaterialParams

    @property
    def wave_speeds(self):
        """Left wave, contact and right wave speeds (fan heads for rarefactions)."""
        return self.speeds_L[0], self.u_star, self.speeds_R[0]


@dataclass
class RiemannSample:
    """Pure-fluid profile sampled from a :class:`RiemannSolution`.

    ``side`` is 0 left of the contact (left material) and 1 to its right.
    """

    rho: np.ndarray
    u: np.ndarray
    p: np.ndarray
    side: np.ndarray
    T: np.ndarray
    e: np.ndarray


def _branch(P, rho_k, P_k, g):
    """Pressure function ``f_K`` and its derivative at ``P = p + p_inf_K``."""
    a_k = np.sqrt(g * P_k / rho_k)
    if P > P_k:
        A = 2.0 / ((g + 1.0) * rho_k)
        B = (g - 1.0) / (g + 1.0) * P_k
        q = np.sqrt(A / (P + B))
        return (P - P_k) * q, q * (1.0 - 0.5 * (P - P_k) / (P + B))
    r = P / P_k
    f = 2.0 * a_k / (g - 1.0) * (r ** ((g - 1.0) / (2.0 * g)) - 1.0)
    df = 1.0 / (rho_k * a_k) * r ** (-(g + 1.0) / (2.0 * g))
    return f, df


def exact_riemann(WL, WR, matL: MaterialParams, matR: MaterialParams, tol=1e-14, max_iter=200):
    """Solve the Riemann problem between pure states ``WL=(rho, u, p)`` and ``WR``.

    Newton's method on ``f_L(p) + f_R(p) + u_R - u_L = 0``, kept inside a
    bracket that is widened by doubling; the first guess is the
    two-rarefaction pressure with the sides' own exponents.
    """
    rL, uL, pL = (float(v) for v in WL)
    rR, uR, pR = (float(v) for v in WR)
    gL, gR = matL.gamma, matR.gamma
    qL, qR = matL.p_inf, matR.p_inf
    PL, PR = pL + qL, pR + qR
    if min(rL, rR) <= 0 or min(PL, PR) <= 0:
        raise ValueError("Riemann data must have rho > 0 and p + p_inf > 0")
    aL, aR = np.sqrt(gL * PL / rL), np.sqrt(gR * PR / rR)
    du = uR - uL

    def F(p):
        fL, dL = _branch(p + qL, rL, PL, gL)
        fR, dR = _branch(p + qR, rR, PR, gR)
        return fL + fR + du, dL + dR

    p_min = -min(qL, qR)
    # limit p -> p_min: the side whose P vanishes contributes -2a/(gamma-1)
    fmin = 0.0
    for P_k, q, a, g, rho in ((PL, qL, aL, gL, rL), (PR, qR, aR, gR, rR)):
        Pm = p_min + q
        fmin += -2.0 * a / (g - 1.0) if Pm <= 0.0 else _branch(Pm, rho, P_k, g)[0]
    if fmin + du >= 0.0:
        raise VacuumError("Riemann data generate vacuum (no positive star pressure)")

    lo = p_min
    hi = max(pL, pR, 1.0 + p_min)
    while F(hi)[0] < 0.0:
        lo, hi = hi, hi + 2.0 * (hi - p_min) + 1.0

    # two-rarefaction guess in terms of P on each side, mapped back to p
    gm = 0.5 * (gL + gR)
    z = (gm - 1.0) / (2.0 * gm)
    num = aL + aR - 0.5 * (gm - 1.0) * du
    den = aL / PL ** z + aR / PR ** z
    p = (max(num, 1e-300) / den) ** (1.0 / z) - 0.5 * (qL + qR)
    if not lo < p < hi:
        p = 0.5 * (lo + hi)

    scale = max(abs(pL), abs(pR), qL, qR, 1e-300)
    for _ in range(max_iter):
        f, df = F(p)
        if f > 0.0:
            hi = p
        else:
            lo = p
        step = -f / df
        trial = p + step
        if not lo < trial < hi:
            trial = 0.5 * (lo + hi)
        if abs(trial - p) <= tol * max(scale, abs(p)) or f == 0.0:
            p = trial
            break
        p = trial
    else:
        raise ConvergenceError("exact Riemann pressure iteration did not converge", [abs(f)])

    fL, _ = _branch(p + qL, rL, PL, gL)
    fR, _ = _branch(p + qR, rR, PR, gR)
    u = 0.5 * (uL + uR) + 0.5 * (fR - fL)

    def star(rho_k, P_k, g, a_k, u_k, sgn):
        P = p + (qL if sgn < 0 else qR)
        if P > P_k:
            gr = (g - 1.0) / (g + 1.0)
            r = P / P_k
            rho_s = rho_k * (r + gr) / (gr * r + 1.0)
            S = u_k + sgn * a_k * np.sqrt((g + 1.0) / (2.0 * g) * r + (g - 1.0) / (2.0 * g))
            return rho_s, "shock", (S, S)
        rho_s = rho_k * (P / P_k) ** (1.0 / g)
        a_s = a_k * (P / P_k) ** ((g - 1.0) / (2.0 * g))
        return rho_s, "rarefaction", (u_k + sgn * a_k, u + sgn * a_s)

    rsL, wL, sL = star(rL, PL, gL, aL, uL, -1)
    rsR, wR, sR = star(rR, PR, gR, aR, uR, +1)
    return RiemannSolution(p, u, rsL, rsR, wL, wR, sL, sR, (rL, uL, pL), (rR, uR, pR), matL, matR)


def sample_solution(sol: RiemannSolution, xi) -> RiemannSample:
    """Evaluate the self-similar solution at ``xi = x / t`` (array)."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    rho = np.empty_like(xi)
    u = np.empty_like(xi)
    p = np.empty_like(xi)
    side = (xi > sol.u_star).astype(int)

    for s, sgn in ((0, -1.0), (1, 1.0)):
        mat = sol.mat_L if s == 0 else sol.mat_R
        rk, uk, pk = sol.left if s == 0 else sol.right
        g, q = mat.gamma, mat.p_inf
        Pk = pk + q
        ak = np.sqrt(g * Pk / rk)
        rho_s = sol.rho_star_L if s == 0 else sol.rho_star_R
        wave = sol.wave_L if s == 0 else sol.wave_R
        head, tail = sol.speeds_L if s == 0 else sol.speeds_R
        sel = side == s
        x = xi[sel]
        # sgn * (x - speed) > 0 means outside (beyond) the wave
        r_out = np.full(x.shape, rk)
        u_out = np.full(x.shape, uk)
        p_out = np.full(x.shape, pk)
        beyond = sgn * (x - head) >= 0.0
        if wave == "shock":
            inner = ~beyond
            r_out[inner], u_out[inner], p_out[inner] = rho_s, sol.u_star, sol.p_star
        else:
            inner = sgn * (x - tail) < 0.0
            fan = ~beyond & ~inner
            r_out[inner], u_out[inner], p_out[inner] = rho_s, sol.u_star, sol.p_star
            c = 2.0 / (g + 1.0) * (ak - sgn * 0.5 * (g - 1.0) * (uk - x[fan]))
            uf = 2.0 / (g + 1.0) * (-sgn * ak + 0.5 * (g - 1.0) * uk + x[fan])
            r_out[fan] = rk * (c / ak) ** (2.0 / (g - 1.0))
            u_out[fan] = uf
            p_out[fan] = Pk * (c / ak) ** (2.0 * g / (g - 1.0)) - q
        rho[sel], u[sel], p[sel] = r_out, u_out, p_out

    T = np.empty_like(xi)
    e = np.empty_like(xi)
    for s in (0, 1):
        mat = sol.mat_L if s == 0 else sol.mat_R
        sel = side == s
        T[sel] = (p[sel] + mat.p_inf) / ((mat.gamma - 1.0) * rho[sel] * mat.cv)
        e[sel] = (p[sel] + mat.gamma * mat.p_inf) / ((mat.gamma - 1.0) * rho[sel]) + mat.w
    return RiemannSample(rho, u, p, side, T, e)


def sample_profile(sol: RiemannSolution, x, t, x0=0.0) -> RiemannSample:
    """Profile at positions ``x`` and time ``t > 0`` for a jump initially at ``x0``."""
    return sample_solution(sol, (np.asarray(x, dtype=float) - x0) / t)
