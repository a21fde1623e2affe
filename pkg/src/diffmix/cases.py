"""Built-in problem setups.

Each builder returns a :class:`~diffmix.config.CaseConfig` that the driver can
run unchanged; all keyword arguments have the reference values as defaults.
``CASES`` maps the command-line names to the builders.
"""

import numpy as np

from .closures import (CH, BraginskiiModel, ConstantModel, HeliumFitModel, LaserSpec,
                       PrandtlModel, SpitzerHarmModel, SutherlandModel)
from .config import CaseConfig, OutputPlan, Physics, Region, SolverOptions
from .errors import ConfigError
from .materials import MaterialParams, Materials
from .state import Grid
from .units import CGS_US_MK, SI


def _two_phase(a_first, eps):
    """Fractions with phase 0 dominant (``a_first=True``) or phase 1 dominant."""
    return [1.0 - eps, eps] if a_first else [eps, 1.0 - eps]


def case_pvt_advection(cells=200, eps=1e-6, t_end=5e-6, interface=0.2):
    """A liquid/gas interface advected at uniform ``p``, ``u`` and ``T``.

    Liquid (4.4, 6e6, 58.82) on the left of ``interface``, ideal gas
    (1.4, 0, 125) on the right; ``p = 1e5 Pa``, ``T = 3000 K``, ``u = 100 m/s``.
    Every stage is switched on; the transport coefficients are zero so the
    diffusion stages must leave the uniform state untouched.
    """
    mats = Materials((MaterialParams(4.4, 6.0e6, 58.82, name="liquid"),
                      MaterialParams(1.4, 0.0, 125.0, name="gas")))
    grid = Grid((cells,), (0.0,), (1.0,), "extrapolation")
    state = dict(u=[100.0], p=1.0e5, T=3000.0)
    regions = [Region({"kind": "all"}, _two_phase(True, eps), **state),
               Region({"kind": "box", "lower": [interface], "upper": [None]},
                      _two_phase(False, eps), **state)]
    return CaseConfig("pvt_advection", grid, mats, regions, t_end, eps,
                      physics=Physics(hydro=True, viscous=True, relax=True, conduct=True),
                      notes={"p": 1.0e5, "T": 3000.0, "u": 100.0, "interface": interface})


def case_conducting_shock_tube(cells=100, eps=1e-6, t_end=1.5e-4, diffusion=True, interface=0.7):
    """Liquid/gas shock tube with phase conductivities ``(1e4, 1e6) W/(m K)``.

    ``diffusion=False`` gives the inviscid, non-conducting, unrelaxed variant
    that the exact Riemann solution describes.
    """
    cond = (ConstantModel(1.0e4), ConstantModel(1.0e6)) if diffusion else (None, None)
    mats = Materials((MaterialParams(4.4, 6.0e6, 1606.0, conductivity=cond[0], name="liquid"),
                      MaterialParams(1.4, 0.0, 714.0, conductivity=cond[1], name="gas")))
    grid = Grid((cells,), (0.0,), (1.0,), "extrapolation")
    left = dict(p=1.0e9, T=293.02)
    right = dict(p=1.0e5, T=7.02)
    regions = [Region({"kind": "all"}, _two_phase(True, eps), [0.0], **left),
               Region({"kind": "box", "lower": [interface], "upper": [None]},
                      _two_phase(False, eps), [0.0], **right)]
    physics = Physics(hydro=True, viscous=False, relax=diffusion, conduct=diffusion)
    name = "conducting_shock_tube" if diffusion else "shock_tube_no_diffusion"
    return CaseConfig(name, grid, mats, regions, t_end, eps, physics=physics,
                      notes={"interface": interface, "left": left, "right": right,
                             "diffusion": diffusion})


def shock_tube_no_diffusion(cells=100, eps=1e-6, t_end=1.5e-4):
    return case_conducting_shock_tube(cells, eps, t_end, diffusion=False)


def case_laser_ablation_1d(cells=720, eps=5e-4, t_end=2.49e-3, solver="implicit",
                           x1=450e-4, xI=460e-4, x2=475e-4, x3=485e-4,
                           lower=425e-4, upper=785e-4, T0=3e-4, rho_vac=1e-5):
    """Two-layer plastic target heated by a laser from the right.

    Solver units are ``cm, us, g, MK``.  Layer 1 (``rho = 1.5``, ``gamma = 2``)
    occupies ``[x1, xI]``, layer 2 (``rho = 1``, ``gamma = 5/3``) ``[xI, x2]``
    and falls exponentially to the vacuum density on ``[x2, x3]``.  Vacuum on
    both sides is layer-2 material at ``rho_vac``.  Everything starts at the
    uniform temperature ``T0``; the two layers are then not in pressure
    equilibrium, which the stated material constants cannot provide.
    """
    units = CGS_US_MK
    visc = BraginskiiModel(CH, units)
    cond = SpitzerHarmModel(CH, units)
    mats = Materials((MaterialParams(2.0, 0.0, 86.34, viscosity=visc, conductivity=cond, name="CH1"),
                      MaterialParams(5.0 / 3.0, 0.0, 86.34, viscosity=visc, conductivity=cond, name="CH2")))
    grid = Grid((cells,), (lower,), (upper,), "extrapolation")
    a1, a2 = _two_phase(True, eps), _two_phase(False, eps)
    ramp = {"kind": "exp", "axis": 0, "lower": x2, "upper": x3, "start": 1.0, "end": rho_vac}
    regions = [
        Region({"kind": "all"}, a2, [0.0], T=T0, rho=rho_vac),
        Region({"kind": "box", "lower": [x1], "upper": [xI]}, a1, [0.0], T=T0, rho=1.5),
        Region({"kind": "box", "lower": [xI], "upper": [x2]}, a2, [0.0], T=T0, rho=1.0),
        Region({"kind": "box", "lower": [x2], "upper": [x3]}, a2, [0.0], T=T0, rho=ramp),
    ]
    return CaseConfig("laser_ablation_1d", grid, mats, regions, t_end, eps, units=units,
                      physics=Physics(hydro=True, viscous=True, relax=True, conduct=True, laser=True),
                      # Spitzer conduction (~T^5/2) needs more, looser Picard sweeps
                      solver=SolverOptions(parabolic=solver, picard_tol=1e-6, picard_max_iter=40),
                      laser=LaserSpec(intensity=1.0e3, depth=20e-4, rho_crit=1.22e-2),
                      notes={"x1": x1, "xI": xI, "x2": x2, "x3": x3})


TRIPLE_POINT_VARIANTS = {
    "H": Physics(hydro=True, viscous=False, relax=False, conduct=False),
    "H+V": Physics(hydro=True, viscous=True, relax=False, conduct=False),
    "H+TR": Physics(hydro=True, viscous=False, relax=True, conduct=False),
    "H+TR+HC": Physics(hydro=True, viscous=False, relax=True, conduct=True),
}


def case_triple_point(nx=280, ny=120, variant="H", eps=1e-6, t_end=5.0):
    """Three-gas triple-point problem on ``[0, 7] x [0, 3]``.

    ``variant`` selects the physics switches: ``H`` (hydrodynamics only),
    ``H+V`` (with viscosity), ``H+TR`` (with temperature relaxation) or
    ``H+TR+HC`` (relaxation and heat conduction).  The heat capacities make
    ``(gamma - 1) cv`` equal for all gases, so each region is in temperature
    equilibrium.
    """
    if variant not in TRIPLE_POINT_VARIANTS:
        raise ConfigError(f"unknown triple-point variant {variant!r}; use one of {list(TRIPLE_POINT_VARIANTS)}")
    params = [(1.5, 40.0, 0.10, 0.5), (1.4, 50.0, 0.20, 1.0), (2.0, 20.0, 0.05, 2.0)]
    mats = Materials(tuple(MaterialParams(g, 0.0, cv, viscosity=ConstantModel(mu),
                                          conductivity=ConstantModel(lam), name=f"gas{k + 1}")
                           for k, (g, cv, mu, lam) in enumerate(params)))
    grid = Grid((nx, ny), (0.0, 0.0), (7.0, 3.0), "extrapolation")
    h = eps / 2.0
    regions = [
        Region({"kind": "all"}, [1.0 - eps, h, h], [0.0, 0.0], p=1.0, rho=1.0),
        Region({"kind": "box", "lower": [1.0, 0.0], "upper": [None, 1.5]}, [h, 1.0 - eps, h],
               [0.0, 0.0], p=0.1, rho=1.0),
        Region({"kind": "box", "lower": [1.0, 1.5], "upper": [None, None]}, [h, h, 1.0 - eps],
               [0.0, 0.0], p=0.1, rho=0.125),
    ]
    return CaseConfig(f"triple_point[{variant}]", grid, mats, regions, t_end, eps,
                      physics=TRIPLE_POINT_VARIANTS[variant],
                      solver=SolverOptions(alpha_limiter="overbee"),
                      notes={"variant": variant})


AIR = dict(gamma=1.4, cv=717.5)
HELIUM = dict(gamma=1.6451, cv=2430.35)


def case_shock_bubble(nx=300, ny=120, eps=1e-6, t_after_contact=245e-6):
    """Mach 1.22 shock in air (moving left) hitting a helium bubble.

    Domain ``0.2225 x 0.089 m``; bubble of diameter 0.05 m centred at
    ``(0.138, 0.0445)``; shock initially at ``x = 0.168``.  Air viscosity is
    Sutherland with conductivity at ``Pr = 0.7``; helium uses its own
    Sutherland constants and the polynomial conductivity fit.  ``t_after_contact``
    is measured from the moment the shock reaches the bubble.
    """
    air_mu = SutherlandModel(1.716e-5, 273.0, 130.0)
    he_mu = SutherlandModel(1.870e-5, 273.0, 65.0)
    mats = Materials((MaterialParams(AIR["gamma"], 0.0, AIR["cv"], viscosity=air_mu,
                                     conductivity=PrandtlModel(air_mu, 0.7), name="air"),
                      MaterialParams(HELIUM["gamma"], 0.0, HELIUM["cv"], viscosity=he_mu,
                                     conductivity=HeliumFitModel(SI), name="helium")))
    grid = Grid((nx, ny), (0.0, 0.0), (0.2225, 0.089),
                (("extrapolation", "extrapolation"), ("periodic", "periodic")))
    xs, xc, yc, D = 0.168, 0.138, 0.0445, 0.05
    air = _two_phase(True, eps)
    regions = [
        Region({"kind": "all"}, air, [0.0, 0.0], p=101325.0, rho=1.2062),
        Region({"kind": "box", "lower": [xs, None], "upper": [None, None]}, air, [-114.0, 0.0],
               p=159080.98, rho=1.66),
        Region({"kind": "circle", "center": [xc, yc], "radius": D / 2}, _two_phase(False, eps),
               [0.0, 0.0], p=101325.0, rho=0.2204),
    ]
    c0 = np.sqrt(AIR["gamma"] * 101325.0 / 1.2062)
    t_contact = (xs - (xc + D / 2)) / (1.22 * c0)
    return CaseConfig("shock_bubble", grid, mats, regions, t_contact + t_after_contact, eps,
                      physics=Physics(hydro=True, viscous=True, relax=True, conduct=True),
                      temperature_equilibrium=True,
                      notes={"t_contact": t_contact, "bubble": [xc, yc, D / 2], "shock_x": xs})


def case_smooth_advection(cells=64, limiter="minmod", t_end=1.0, amplitude=0.4):
    """Smooth two-gas mixture advected once around a periodic unit interval.

    ``alpha_1 = 1/2 + amplitude sin(2 pi x)`` at uniform ``p = 1``, ``T = 1``,
    ``u = 1``; the exact solution at ``t = 1`` equals the initial state.
    """
    mats = Materials((MaterialParams(1.4, 0.0, 2.5, name="a"), MaterialParams(1.6, 0.0, 0.5, name="b")))
    grid = Grid((cells,), (0.0,), (1.0,), "periodic")
    regions = []
    x = grid.centers(0)
    # one region per cell keeps the configuration purely declarative
    for i, xi in enumerate(x):
        a = 0.5 + amplitude * np.sin(2.0 * np.pi * xi)
        lo = grid.faces(0)[i]
        hi = grid.faces(0)[i + 1]
        regions.append(Region({"kind": "box", "lower": [float(lo)], "upper": [float(hi) if i < cells - 1 else None]},
                              [float(a), float(1.0 - a)], [1.0], p=1.0, T=1.0))
    return CaseConfig("smooth_advection", grid, mats, regions, t_end, 1e-3,
                      physics=Physics(hydro=True, viscous=False, relax=False, conduct=False),
                      solver=SolverOptions(limiter=limiter, cfl=0.4), notes={"exact": "initial"})


CASES = {
    "pvt_advection": case_pvt_advection,
    "conducting_shock_tube": case_conducting_shock_tube,
    "shock_tube_no_diffusion": shock_tube_no_diffusion,
    "laser_ablation_1d": case_laser_ablation_1d,
    "triple_point": case_triple_point,
    "shock_bubble": case_shock_bubble,
    "smooth_advection": case_smooth_advection,
}


def builtin_case(name, **kwargs) -> CaseConfig:
    """Look up a built-in case; ``triple_point:H+V`` selects a variant."""
    base, _, variant = name.partition(":")
    if base not in CASES:
        raise ConfigError(f"unknown case {name!r}; available: {sorted(CASES)}")
    if variant:
        if base != "triple_point":
            raise ConfigError(f"case {base!r} has no variants")
        kwargs["variant"] = variant
    return CASES[base](**kwargs)
