"""Case description, validation, initial-state construction and YAML I/O.

A case file is YAML with the sections ``domain``, ``units``, ``materials``,
``regions``, ``physics``, ``solver``, ``output`` and optionally ``laser``::

    name: my_case
    units: {length: 1.0, time: 1.0, mass: 1.0, temperature: 1.0}
    domain:
      cells: [200]
      lower: [0.0]
      upper: [1.0]
      boundaries: [[extrapolation, extrapolation]]
    materials:
      - {name: water, gamma: 4.4, p_inf: 6.0e6, cv: 1606.0, w: 0.0,
         viscosity: null, conductivity: {model: constant, value: 1.0e4}}
    regions:                      # later regions overwrite earlier ones
      - shape: {kind: all}
        alpha: [0.999999, 1.0e-6]
        u: [0.0]
        p: 1.0e5
        T: 300.0                  # exactly two of p, T, rho
    physics: {hydro: true, viscous: false, relax: true, conduct: true, laser: false}
    solver: {cfl: 0.5, limiter: minmod, alpha_limiter: null, parabolic: lim,
             picard_tol: 1.0e-8, picard_max_iter: 20, max_stencil: 12,
             relax_method: exact, max_heating: 0.5, max_retries: 6}
    time: {end: 1.0e-4}
    output: {snapshots: [], diagnostics_every: 1}

All values are in the declared solver units.  ``rho`` is the density of the
dominant phase of the region (largest ``alpha``); the other phases are put at
the same pressure and temperature.  ``rho`` may also be an exponential ramp
``{kind: exp, axis: 0, lower: a, upper: b, start: rho_a, end: rho_b}``.
"""

from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, List, Optional

import numpy as np
import yaml

from . import eos
from .closures import LaserSpec, model_from_dict
from .errors import ConfigError
from .materials import MaterialParams, Materials
from .state import Grid, PrimitiveState, conserved_from_primitive, primitive_from_conserved
from .units import SI, UnitSystem, unit_system


@dataclass
class Region:
    shape: Dict[str, Any]
    alpha: List[float]
    u: List[float]
    p: Optional[float] = None
    T: Optional[float] = None
    rho: Any = None

    def __post_init__(self):
        given = sum(v is not None for v in (self.p, self.T, self.rho))
        if given != 2:
            raise ConfigError("a region needs exactly two of p, T, rho")
        a = np.asarray(self.alpha, dtype=float)
        if np.any(a <= 0.0) or (a.size > 1 and np.any(a >= 1.0)):
            raise ConfigError(f"region volume fractions must lie in (0, 1): {self.alpha}")
        if abs(a.sum() - 1.0) > 1e-12:
            raise ConfigError(f"region volume fractions must sum to 1: {self.alpha}")

    def mask(self, grid: Grid):
        X = grid.mesh()
        kind = self.shape.get("kind", "all")
        if kind == "all":
            return np.ones(grid.shape, dtype=bool)
        if kind == "box":
            lo = self.shape.get("lower", [-np.inf] * grid.ndim)
            hi = self.shape.get("upper", [np.inf] * grid.ndim)
            m = np.ones(grid.shape, dtype=bool)
            for d in range(grid.ndim):
                l = -np.inf if lo[d] is None else lo[d]
                h = np.inf if hi[d] is None else hi[d]
                m &= (X[d] >= l) & (X[d] < h)
            return m
        if kind == "circle":
            c = self.shape["center"]
            r2 = sum((X[d] - c[d]) ** 2 for d in range(grid.ndim))
            return r2 <= self.shape["radius"] ** 2
        raise ConfigError(f"unknown region shape {kind!r}")

    def density(self, grid: Grid):
        if isinstance(self.rho, dict):
            spec = self.rho
            if spec.get("kind") != "exp":
                raise ConfigError(f"unknown density profile {spec.get('kind')!r}")
            x = grid.mesh()[int(spec.get("axis", 0))]
            s = np.clip((x - spec["lower"]) / (spec["upper"] - spec["lower"]), 0.0, 1.0)
            return spec["start"] * (spec["end"] / spec["start"]) ** s
        return np.full(grid.shape, float(self.rho))


@dataclass
class Physics:
    hydro: bool = True
    viscous: bool = False
    relax: bool = True
    conduct: bool = False
    laser: bool = False

    def validate(self):
        if (self.conduct or self.laser) and not self.relax:
            raise ConfigError("heat conduction and laser heating require temperature relaxation")


@dataclass
class SolverOptions:
    cfl: float = 0.5
    limiter: str = "minmod"
    alpha_limiter: Optional[str] = None
    parabolic: str = "lim"
    picard_tol: float = 1e-8
    picard_max_iter: int = 20
    max_stencil: int = 12
    relax_method: str = "exact"
    # largest fraction of a cell's thermal energy the laser may add in one step
    max_heating: float = 0.5
    # halvings of dt allowed when a diffusion or relaxation stage fails
    max_retries: int = 6

    def validate(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigError(f"cfl must lie in (0, 1], got {self.cfl}")
        if self.parabolic not in ("lim", "implicit"):
            raise ConfigError(f"parabolic solver must be 'lim' or 'implicit', got {self.parabolic!r}")
        if not self.picard_tol > 0:
            raise ConfigError("picard_tol must be positive")
        if not self.max_heating > 0:
            raise ConfigError("max_heating must be positive")
        if self.max_retries < 0:
            raise ConfigError("max_retries must be non-negative")
        if self.picard_max_iter < 1 or self.max_stencil < 1:
            raise ConfigError("iteration limits must be positive")
        from .hyperbolic import LIMITERS
        for lim in (self.limiter, self.alpha_limiter):
            if lim is not None and lim not in LIMITERS:
                raise ConfigError(f"unknown limiter {lim!r}; choose from {sorted(LIMITERS)}")
        if self.relax_method not in ("exact", "linearized"):
            raise ConfigError(f"relax_method must be 'exact' or 'linearized', got {self.relax_method!r}")


@dataclass
class OutputPlan:
    snapshots: List[float] = field(default_factory=list)
    diagnostics_every: int = 1


@dataclass
class CaseConfig:
    name: str
    grid: Grid
    materials: Materials
    regions: List[Region]
    t_end: float
    eps: float = 1e-6
    units: UnitSystem = SI
    physics: Physics = field(default_factory=Physics)
    solver: SolverOptions = field(default_factory=SolverOptions)
    laser: Optional[LaserSpec] = None
    output: OutputPlan = field(default_factory=OutputPlan)
    temperature_equilibrium: bool = True
    notes: Dict[str, Any] = field(default_factory=dict)

    def validate(self):
        if not 0.0 < self.eps <= 1e-3:
            raise ConfigError(f"eps must lie in (0, 1e-3], got {self.eps}")
        if self.t_end < 0:
            raise ConfigError("end time must be non-negative")
        self.physics.validate()
        self.solver.validate()
        if self.physics.laser:
            if self.laser is None:
                raise ConfigError("laser heating enabled without a laser specification")
            if self.grid.ndim != 1:
                raise ConfigError("laser deposition is implemented for 1D cases only")
        N = len(self.materials)
        covered = np.zeros(self.grid.shape, dtype=bool)
        for r in self.regions:
            if len(r.alpha) != N:
                raise ConfigError(f"region has {len(r.alpha)} fractions for {N} materials")
            if len(r.u) != self.grid.ndim:
                raise ConfigError("region velocity must have one entry per dimension")
            covered |= r.mask(self.grid)
        if not covered.all():
            raise ConfigError(f"regions leave {int((~covered).sum())} cells uncovered")
        for t in self.output.snapshots:
            if not 0.0 <= t <= self.t_end:
                raise ConfigError(f"snapshot time {t} outside [0, {self.t_end}]")
        W = initial_state(self)
        primitive_from_conserved(conserved_from_primitive(W), self.materials)
        if self.temperature_equilibrium:
            spread = np.max(np.abs(W.T / W.T[0] - 1.0))
            if spread > 1e-10:
                raise ConfigError(f"initial phase temperatures differ by {spread:.3g} (relative)")
        return W

    def with_cells(self, cells):
        """Same case on a different grid resolution."""
        return replace(self, grid=self.grid.with_cells(cells))


def initial_state(case: CaseConfig) -> PrimitiveState:
    """Paint the regions onto the grid and close every cell at common ``p, T``."""
    grid, mats = case.grid, case.materials
    N, d = len(mats), grid.ndim
    alpha = np.zeros((N,) + grid.shape)
    u = np.zeros((d,) + grid.shape)
    p = np.full(grid.shape, np.nan)
    T = np.full(grid.shape, np.nan)
    rho_dom = np.full(grid.shape, np.nan)
    for r in case.regions:
        msk = r.mask(grid)
        alpha[:, msk] = np.asarray(r.alpha, dtype=float)[:, None]
        u[:, msk] = np.asarray(r.u, dtype=float)[:, None]
        p[msk] = np.nan if r.p is None else r.p
        T[msk] = np.nan if r.T is None else r.T
        rho_dom[msk] = np.nan if r.rho is None else r.density(grid)[msk]
    k = np.argmax(alpha, axis=0)
    g, pinf, cv = mats.gamma[k], mats.p_inf[k], mats.cv[k]
    need_p = np.isnan(p)
    need_T = np.isnan(T)
    p = np.where(need_p, (g - 1.0) * rho_dom * cv * T - pinf, p)
    T = np.where(need_T, (p + pinf) / ((g - 1.0) * rho_dom * cv), T)
    Tk = np.broadcast_to(T, alpha.shape).copy()
    rho = eos.sg_density(p, Tk, mats)
    e = eos.sg_energy(rho, p, mats)
    return PrimitiveState(rho=rho, u=u, p=p, alpha=alpha, T=Tk, e=e)


# ---------------------------------------------------------------- YAML

def _material_dict(mat: MaterialParams):
    return {"name": mat.name, "gamma": mat.gamma, "p_inf": mat.p_inf, "cv": mat.cv, "w": mat.w,
            "viscosity": None if mat.viscosity is None else mat.viscosity.as_dict(),
            "conductivity": None if mat.conductivity is None else mat.conductivity.as_dict()}


def _plain(x):
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    return x


def case_to_dict(case: CaseConfig):
    g = case.grid
    out = {
        "name": case.name,
        "units": {k: v for k, v in case.units.as_dict().items()},
        "domain": {"cells": list(g.shape), "lower": list(g.lower), "upper": list(g.upper),
                   "boundaries": [list(b) for b in g.bc]},
        "materials": [_material_dict(m) for m in case.materials],
        "regions": [{k: v for k, v in asdict(r).items() if v is not None} for r in case.regions],
        "physics": asdict(case.physics),
        "solver": asdict(case.solver),
        "time": {"end": case.t_end},
        "eps": case.eps,
        "output": asdict(case.output),
        "temperature_equilibrium": case.temperature_equilibrium,
    }
    if case.laser is not None:
        out["laser"] = {"intensity": case.laser.intensity, "depth": case.laser.depth,
                        "rho_crit": case.laser.rho_crit}
    if case.notes:
        out["notes"] = case.notes
    return _plain(out)


def case_from_dict(data) -> CaseConfig:
    try:
        units = unit_system(data.get("units"))
        dom = data["domain"]
        grid = Grid(tuple(dom["cells"]), tuple(dom["lower"]), tuple(dom["upper"]),
                    tuple(tuple(b) for b in dom["boundaries"]) if "boundaries" in dom else None)
        mats = []
        for md in data["materials"]:
            md = dict(md)
            visc = model_from_dict(md.pop("viscosity", None), units)
            cond = model_from_dict(md.pop("conductivity", None), units)
            mats.append(MaterialParams(gamma=float(md["gamma"]), p_inf=float(md.get("p_inf", 0.0)),
                                       cv=float(md.get("cv", 1.0)), w=float(md.get("w", 0.0)),
                                       viscosity=visc, conductivity=cond, name=str(md.get("name", ""))))
        regions = [Region(**r) for r in data["regions"]]
        laser = LaserSpec(**data["laser"]) if data.get("laser") else None
        case = CaseConfig(
            name=data.get("name", "case"),
            grid=grid,
            materials=Materials(tuple(mats)),
            regions=regions,
            t_end=float(data["time"]["end"]),
            eps=float(data.get("eps", 1e-6)),
            units=units,
            physics=Physics(**data.get("physics", {})),
            solver=SolverOptions(**data.get("solver", {})),
            laser=laser,
            output=OutputPlan(**data.get("output", {})),
            temperature_equilibrium=bool(data.get("temperature_equilibrium", True)),
            notes=dict(data.get("notes", {})),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed case description: {exc!r}") from exc
    return case


def dump_case(case: CaseConfig, path):
    with open(path, "w") as fh:
        yaml.safe_dump(case_to_dict(case), fh, sort_keys=False)


def load_case(path) -> CaseConfig:
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} does not contain a mapping")
    return case_from_dict(data)
