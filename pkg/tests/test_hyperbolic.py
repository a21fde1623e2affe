import numpy as np
import pytest

from diffmix import eos
from diffmix.errors import ConfigError
from diffmix.hyperbolic import (LIMITERS, HydroConfig, coupled_fraction_slopes, compute_dt_cfl,
                                domain_totals, hllc_flux, hydro_rhs, hydro_step, limited_slopes,
                                muscl_reconstruct, nonconservative_alpha_update, wood_sound_speed)
from diffmix.materials import MaterialParams, Materials
from diffmix.riemann import exact_riemann, sample_profile
from diffmix.state import (ConservedState, Grid, PrimitiveState, conserved_from_primitive,
                           primitive_from_conserved, primitive_from_pt)
from diffmix.cases import case_pvt_advection
from diffmix.config import initial_state


def test_minmod_ramp():
    q = np.array([[0.0, 0.0, 1.0, 2.0, 3.0, 0.0, 0.0]])
    q[0, :2] = [-1.0, 0.0]
    q[0, 5:] = [4.0, 5.0]
    # interior cells (1, 2, 3) with two linear ghosts on each side
    qL, qR = muscl_reconstruct(q, 0, 3, 2, "minmod")
    np.testing.assert_allclose(qL[0], [0.5, 1.5, 2.5, 3.5])
    np.testing.assert_allclose(qR[0], [0.5, 1.5, 2.5, 3.5])


@pytest.mark.parametrize("name", sorted(LIMITERS))
def test_limiters_tvd_region(name, rng):
    dm, dp = rng.normal(size=200), rng.normal(size=200)
    s = limited_slopes(dm, dp, name)
    # no new extrema: zero at sign changes, at most twice the smaller difference
    assert np.all(s[dm * dp <= 0] == 0.0)
    same = dm * dp > 0
    assert np.all(np.abs(s[same]) <= 2.0 * np.minimum(np.abs(dm), np.abs(dp))[same] + 1e-15)


def test_unknown_limiter():
    with pytest.raises(ConfigError):
        limited_slopes(np.ones(2), np.ones(2), "vanleer2")
    with pytest.raises(ConfigError):
        HydroConfig(cfl=1.5)


@pytest.mark.parametrize("limiter", ["minmod", "overbee"])
def test_coupled_slopes_preserve_saturation(limiter, rng):
    a = rng.uniform(0.01, 1, (3, 40))
    a /= a.sum(axis=0)
    dm = np.diff(a, axis=1)[:, :-1]
    dp = np.diff(a, axis=1)[:, 1:]
    s = coupled_fraction_slopes(dm, dp, limiter)
    np.testing.assert_allclose(s.sum(axis=0), 0.0, atol=1e-15)
    mid = a[:, 1:-1]
    for face in (mid + 0.5 * s, mid - 0.5 * s):
        assert np.all(face > 0.0) and np.all(face < 1.0)


def test_hllc_consistency(water_air):
    W = primitive_from_pt(np.array([2e5, 3e7]), np.array([300.0, 350.0]), [[10.0, -20.0]],
                          np.array([[0.2, 0.9], [0.8, 0.1]]), water_air)
    hb = hllc_flux(W, W, water_air)
    m = W.m
    rho = m.sum(axis=0)
    E = np.sum(m * W.e, axis=0) + 0.5 * rho * W.u[0] ** 2
    u = W.u[0]
    np.testing.assert_allclose(hb.flux[:2], m * u, rtol=1e-13)
    np.testing.assert_allclose(hb.flux[2], rho * u * u + W.p, rtol=1e-13)
    np.testing.assert_allclose(hb.flux[3], (E + W.p) * u, rtol=1e-13)
    np.testing.assert_allclose(hb.u_face, u, rtol=1e-14)


def test_sod_star_pressure_within_two_percent():
    gas = Materials((MaterialParams(1.4, 0.0, 1.0),))
    n = 400
    grid = Grid((n,), (0.0,), (1.0,))
    x = grid.centers(0)
    left = x < 0.5
    rho = np.where(left, 1.0, 0.125)[None]
    p = np.where(left, 1.0, 0.1)
    W = PrimitiveState(rho, np.zeros((1, n)), p, np.ones((1, n)), eos.sg_temperature(rho, p, gas),
                       eos.sg_energy(rho, p, gas))
    U = conserved_from_primitive(W)
    t = 0.0
    while t < 0.2:
        Wc = primitive_from_conserved(U, gas)
        dt = min(compute_dt_cfl(Wc, grid, gas, 0.5), 0.2 - t)
        U = hydro_step(U, grid, gas, dt, W=Wc).U
        t += dt
    sol = exact_riemann((1.0, 0.0, 1.0), (0.125, 0.0, 0.1), gas[0], gas[0])
    Wn = primitive_from_conserved(U, gas)
    # between the contact and the shock
    star = (x > 0.5 + 0.2 * sol.u_star + 0.03) & (x < 0.5 + 0.2 * sol.speeds_R[0] - 0.03)
    assert np.all(np.abs(Wn.p[star] / sol.p_star - 1.0) < 0.02)
    ref = sample_profile(sol, x, 0.2, 0.5)
    assert np.sum(np.abs(Wn.density - ref.rho)) / n < 0.01


def test_nonconservative_term_by_hand():
    alpha = np.array([[0.3, 0.4, 0.5]])
    ratio = np.array([[2.0, 0.5, 1.0]])
    uf = np.array([0.0, 1.0, 3.0, 6.0])
    out = nonconservative_alpha_update(alpha, ratio, uf, 0.5)
    np.testing.assert_allclose(out, [[0.3 * 2.0 * 2.0, 0.4 * 0.5 * 4.0, 0.5 * 1.0 * 6.0]])


def test_uniform_compression_fraction_rate(water_air):
    """alpha_1' = alpha_1 (1 - A/A_1) under u = -x with uniform p, T, alpha."""
    n = 40
    grid = Grid((n,), (-1.0,), (1.0,))
    x = grid.centers(0)
    alpha = np.array([np.full(n, 0.4), np.full(n, 0.6)])
    W = primitive_from_pt(np.full(n, 1e6), 300.0, -x[None], alpha, water_air)
    U = conserved_from_primitive(W)
    dt = 1e-9
    U1 = hydro_step(U, grid, water_air, dt).U
    Ak = eos.phase_moduli(W.p, water_air, 1)
    A = 1.0 / np.sum(W.alpha / Ak, axis=0)
    rate = 0.4 * (1.0 - A / Ak[0])
    inner = slice(3, -3)
    da = U1.alpha_stored[0] - U.alpha_stored[0]
    np.testing.assert_allclose(da[inner], dt * rate[inner], rtol=1e-6, atol=1e-10 * 0.4)


def test_cfl_by_hand():
    case = case_pvt_advection(cells=200)
    W = initial_state(case)
    mats = case.materials
    # Wood speed in each cell from the phase moduli
    a = []
    for i in (0, -1):
        Ak = mats.gamma * (1e5 + mats.p_inf)
        A = 1.0 / np.sum(W.alpha[:, i] / Ak)
        a.append(np.sqrt(A / np.sum(W.alpha[:, i] * W.rho[:, i])))
    dt = 0.5 * (1.0 / 200) / (100.0 + max(a))
    assert compute_dt_cfl(W, case.grid, mats, 0.5) == pytest.approx(dt, rel=1e-13)
    np.testing.assert_allclose(wood_sound_speed(W, mats)[[0, -1]], a, rtol=1e-13)


def test_pvt_single_step():
    case = case_pvt_advection(cells=100)
    U = conserved_from_primitive(initial_state(case))
    W = primitive_from_conserved(U, case.materials)
    dt = compute_dt_cfl(W, case.grid, case.materials, 0.5)
    W1 = primitive_from_conserved(hydro_step(U, case.grid, case.materials, dt).U, case.materials)
    assert np.max(np.abs(W1.p / 1e5 - 1)) < 1e-12
    assert np.max(np.abs(W1.u / 100 - 1)) < 1e-12


@pytest.mark.parametrize("nd", [1, 2])
def test_periodic_conservation(three_gases, rng, nd):
    shape = (32,) if nd == 1 else (16, 12)
    grid = Grid(shape, (0.0,) * nd, (1.0,) * nd, "periodic")
    a = rng.uniform(0.05, 1.0, (3,) + shape)
    a /= a.sum(axis=0)
    W = primitive_from_pt(rng.uniform(0.5, 2.0, shape), rng.uniform(0.5, 2.0, shape),
                          rng.normal(0, 0.3, (nd,) + shape), a, three_gases)
    U = conserved_from_primitive(W)
    before = domain_totals(U, grid)
    dt = compute_dt_cfl(W, grid, three_gases, 0.4)
    res = hydro_step(U, grid, three_gases, dt, HydroConfig(alpha_limiter="overbee"))
    after = domain_totals(res.U, grid)
    rows = slice(0, 3 + nd + 1)
    np.testing.assert_allclose(after[rows], before[rows], rtol=1e-12, atol=1e-12 * np.abs(before[rows]).max())
    np.testing.assert_allclose(res.boundary_delta, 0.0, atol=1e-14)


def test_boundary_flux_accounting(water_air):
    """With open boundaries the domain change equals the accumulated boundary flux."""
    case = case_pvt_advection(cells=50)
    U = conserved_from_primitive(initial_state(case))
    W = primitive_from_conserved(U, case.materials)
    dt = compute_dt_cfl(W, case.grid, case.materials, 0.5)
    res = hydro_step(U, case.grid, case.materials, dt)
    change = domain_totals(res.U, case.grid) - domain_totals(U, case.grid)
    np.testing.assert_allclose(change[:4], res.boundary_delta[:4], rtol=1e-10,
                               atol=1e-13 * np.abs(domain_totals(U, case.grid)[:4]).max())
