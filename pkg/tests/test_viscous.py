import numpy as np
import pytest

from diffmix.closures import ConstantModel
from diffmix.errors import ConfigError
from diffmix.hyperbolic import domain_totals
from diffmix.materials import MaterialParams, Materials
from diffmix.state import (Grid, conserved_from_primitive, primitive_from_conserved, primitive_from_pt,
                           reconstruct_phase_energies)
from diffmix.viscous import ViscousConfig, mixture_viscosity, viscous_step


def test_mixture_viscosity_examples():
    assert mixture_viscosity([[1.0]], [[3e-5]])[0] == 3e-5
    assert mixture_viscosity([0.5, 0.5], [2e-5, 0.0]) == pytest.approx(1e-5)
    a = np.array([[0.2, 0.7], [0.8, 0.3]])
    np.testing.assert_allclose(mixture_viscosity(a, np.full((2, 2), 4e-3)), 4e-3)


def test_config_validation():
    with pytest.raises(ConfigError):
        ViscousConfig(mu_bulk=-1.0)
    with pytest.raises(ConfigError):
        ViscousConfig(solver="adi")


def setup(mu, n=64, nd=1, u_fn=None, rng=None):
    mats = Materials((MaterialParams(1.4, 0.0, 1.0, viscosity=ConstantModel(mu[0])),
                      MaterialParams(1.6, 0.0, 2.0, viscosity=ConstantModel(mu[1]))))
    shape = (n,) * nd
    grid = Grid(shape, (0.0,) * nd, (1.0,) * nd, "periodic")
    X = grid.mesh()
    alpha = np.stack([np.full(shape, 0.5), np.full(shape, 0.5)])
    if rng is not None:
        a = rng.uniform(0.1, 0.9, shape)
        alpha = np.stack([a, 1 - a])
    u = u_fn(X)
    W = primitive_from_pt(np.full(shape, 1e3), np.full(shape, 1.0), u, alpha, mats)
    return mats, grid, W


@pytest.mark.parametrize("solver", ["lim", "implicit"])
def test_shear_decay_rate(solver):
    mu = 1e-3
    mats, grid, W = setup((mu, mu), u_fn=lambda X: np.sin(2 * np.pi * X[0])[None])
    U = conserved_from_primitive(W)
    rho = U.rho
    nsteps, dt = 40, 0.25
    for _ in range(nsteps):
        Wc = primitive_from_conserved(U, mats)
        U = viscous_step(U, reconstruct_phase_energies(Wc), Wc, grid, mats, dt,
                         ViscousConfig(solver=solver)).U
    u = (U.mom / U.rho)[0]
    x = grid.centers(0)
    amp = 2 * np.sum(u * np.sin(2 * np.pi * x)) / x.size
    nu = 4.0 / 3.0 * mu / rho.mean()
    expected = np.exp(-nu * (2 * np.pi) ** 2 * nsteps * dt)
    # O(dt) + O(dx^2): a few per mille here
    assert amp == pytest.approx(expected, rel=5e-3)


@pytest.mark.parametrize("nd", [1, 2])
def test_conserves_momentum_energy_and_mass(nd, rng):
    fn = (lambda X: np.stack([np.sin(2 * np.pi * X[0]) + 0.1 * np.cos(2 * np.pi * X[-1])
                              for _ in range(nd)]))
    mats, grid, W = setup((2e-3, 5e-4), n=24 if nd == 2 else 64, nd=nd, u_fn=fn, rng=rng)
    U = conserved_from_primitive(W)
    Wc = primitive_from_conserved(U, mats)
    res = viscous_step(U, reconstruct_phase_energies(Wc), Wc, grid, mats, 0.1)
    before, after = domain_totals(U, grid), domain_totals(res.U, grid)
    n = 2 + nd + 1
    np.testing.assert_allclose(after[:n], before[:n], rtol=1e-12, atol=1e-12 * np.abs(before[:n]).max())
    np.testing.assert_array_equal(res.U.m, U.m)
    np.testing.assert_allclose(res.phase_energy.sum(axis=0), res.U.E, rtol=1e-13)
    # kinetic energy only decreases: viscous dissipation heats the fluid
    ke = lambda V: np.sum(0.5 * np.sum(V.mom ** 2, axis=0) / V.rho)
    assert ke(res.U) < ke(U)
    np.testing.assert_allclose(res.alpha.sum(axis=0), 1.0, atol=1e-14)


def test_disabled_or_inviscid_is_identity(rng):
    mats, grid, W = setup((0.0, 0.0), u_fn=lambda X: np.sin(2 * np.pi * X[0])[None])
    U = conserved_from_primitive(W)
    Wc = primitive_from_conserved(U, mats)
    res = viscous_step(U, reconstruct_phase_energies(Wc), Wc, grid, mats, 1.0)
    np.testing.assert_allclose(res.U.data, U.data, rtol=1e-12)
    mats, grid, W = setup((1.0, 1.0), u_fn=lambda X: np.sin(2 * np.pi * X[0])[None])
    U = conserved_from_primitive(W)
    Wc = primitive_from_conserved(U, mats)
    res = viscous_step(U, reconstruct_phase_energies(Wc), Wc, grid, mats, 1.0, ViscousConfig(enabled=False))
    np.testing.assert_allclose(res.U.data, U.data, rtol=1e-12)


def test_reflective_wall_keeps_zero_normal_velocity():
    mats = Materials((MaterialParams(1.4, 0.0, 1.0, viscosity=ConstantModel(1e-2)),))
    grid = Grid((32,), (0.0,), (1.0,), "reflective")
    x = grid.centers(0)
    W = primitive_from_pt(np.full(32, 1.0), 1.0, np.sin(np.pi * x)[None], np.ones((1, 32)), mats)
    U = conserved_from_primitive(W)
    Wc = primitive_from_conserved(U, mats)
    res = viscous_step(U, reconstruct_phase_energies(Wc), Wc, grid, mats, 1.0)
    u = res.U.mom[0] / res.U.rho
    # velocity of the first cell decays more than mid-domain (odd reflection at the wall)
    assert u[0] / np.sin(np.pi * x[0]) < u[16] / np.sin(np.pi * x[16])
