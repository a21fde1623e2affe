"""Fractional-step time loop, snapshots, diagnostics and convergence studies.

One step of length ``dt`` applies, in order,

1. hydrodynamics (SSP-RK3 with HLLC fluxes),
2. viscous momentum diffusion and viscous work,
3. instantaneous temperature relaxation,
4. heat conduction with the optional laser source,

each stage skipped entirely when its switch is off.  ``dt`` follows the CFL
condition and is shortened so snapshot and end times are hit exactly.
"""

import csv
import logging
import time as _time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, List, Optional

import numpy as np

from . import eos
from .closures import laser_deposition_profile
from .config import CaseConfig, initial_state, load_case
from .errors import ClosureError, ConfigError, DiffmixError, StageError
from .hyperbolic import HydroConfig, compute_dt_cfl, domain_totals, hydro_step
from .riemann import exact_riemann, sample_profile
from .state import (ConservedState, PrimitiveState, conserved_from_primitive, mixture_temperature,
                    primitive_from_conserved, reconstruct_phase_energies)
from .thermal import ThermalConfig, heat_conduction_step, relax_temperatures
from .viscous import ViscousConfig, viscous_step

log = logging.getLogger(__name__)

STAGES = ("hydro", "viscous", "relax", "conduct")
# temperature floor, as a fraction of the hottest cell, of the heating step controller
HEAT_FLOOR = 0.1


# ---------------------------------------------------------------- plan

@dataclass
class RunPlan:
    """What to run and where to put the results.

    Exactly one of ``case`` (a built-in name such as ``"triple_point:H"``)
    and ``config`` (a YAML path) is used; ``case_config`` short-cuts both
    with an already built :class:`CaseConfig`.  Overrides left at ``None``
    keep the case's own values.
    """

    case: Optional[str] = None
    config: Optional[str] = None
    case_config: Optional[CaseConfig] = None
    cells: Optional[tuple] = None
    t_end: Optional[float] = None
    viscous: Optional[bool] = None
    relax: Optional[bool] = None
    conduct: Optional[bool] = None
    solver: Optional[str] = None
    cfl: Optional[float] = None
    picard_tol: Optional[float] = None
    out_dir: Optional[str] = None
    snapshots: Optional[List[float]] = None
    diagnostics_every: Optional[int] = None
    max_steps: Optional[int] = None
    on_step: Optional[Callable] = None

    def resolve(self) -> CaseConfig:
        if self.case_config is not None:
            case = self.case_config
        elif self.config is not None:
            case = load_case(self.config)
        elif self.case is not None:
            from .cases import builtin_case
            case = builtin_case(self.case)
        else:
            raise ConfigError("a run needs a built-in case name or a config file")
        if self.cells is not None:
            cells = tuple(int(c) for c in np.atleast_1d(self.cells))
            if len(cells) != case.grid.ndim:
                raise ConfigError(f"--cells needs {case.grid.ndim} value(s) for case {case.name!r}")
            case = case.with_cells(cells)
        if self.t_end is not None:
            case = replace(case, t_end=float(self.t_end))
        phys = case.physics
        for name in ("viscous", "relax", "conduct"):
            v = getattr(self, name)
            if v is not None:
                phys = replace(phys, **{name: bool(v)})
        solver = case.solver
        if self.solver is not None:
            solver = replace(solver, parabolic=self.solver)
        if self.cfl is not None:
            solver = replace(solver, cfl=float(self.cfl))
        if self.picard_tol is not None:
            solver = replace(solver, picard_tol=float(self.picard_tol))
        output = case.output
        if self.snapshots is not None:
            output = replace(output, snapshots=[float(t) for t in self.snapshots])
        if self.diagnostics_every is not None:
            output = replace(output, diagnostics_every=int(self.diagnostics_every))
        case = replace(case, physics=phys, solver=solver, output=output)
        case.validate()
        if self.out_dir is not None:
            out = Path(self.out_dir)
            try:
                out.mkdir(parents=True, exist_ok=True)
                probe = out / ".write_probe"
                probe.write_text("")
                probe.unlink()
            except OSError as exc:
                raise ConfigError(f"output directory {out} is not writable: {exc}") from exc
        return case


@dataclass
class DiagnosticsRecord:
    step: int
    time: float
    dt: float
    totals: np.ndarray
    boundary: np.ndarray
    p_min: float
    p_max: float
    T_min: float
    T_max: float
    alpha_min: float
    alpha_max: float
    saturation_error: float
    entropy: float
    wall: dict = field(default_factory=dict)

    def row(self, n_phases, ndim):
        names = ([f"m{k + 1}" for k in range(n_phases)] + [f"mom{d + 1}" for d in range(ndim)] + ["E"])
        out = {"step": self.step, "time": self.time, "dt": self.dt}
        for i, n in enumerate(names):
            out[f"total_{n}"] = self.totals[i]
            out[f"boundary_{n}"] = self.boundary[i]
        out.update(p_min=self.p_min, p_max=self.p_max, T_min=self.T_min, T_max=self.T_max,
                   alpha_min=self.alpha_min, alpha_max=self.alpha_max,
                   saturation_error=self.saturation_error, entropy=self.entropy)
        for s in STAGES:
            out[f"wall_{s}"] = self.wall.get(s, 0.0)
        return out


# ---------------------------------------------------------------- simulation

class Simulation:
    """Owns the conserved state of one case and advances it step by step."""

    def __init__(self, case: CaseConfig, W0: PrimitiveState = None):
        self.case = case
        self.grid = case.grid
        self.mats = case.materials
        W0 = initial_state(case) if W0 is None else W0
        self.U = conserved_from_primitive(W0)
        self.W = primitive_from_conserved(self.U, self.mats)
        self.t = 0.0
        self.step_index = 0
        self.boundary = np.zeros(self.U.data.shape[0])
        self.dt_heat = None
        s = case.solver
        self.hydro_cfg = HydroConfig(s.limiter, s.alpha_limiter, s.cfl)
        self.visc_cfg = ViscousConfig(enabled=case.physics.viscous, tol=s.picard_tol,
                                      max_iter=s.picard_max_iter, solver=s.parabolic,
                                      max_stencil=s.max_stencil)
        self.thermal_cfg = ThermalConfig(relax=case.physics.relax, conduct=case.physics.conduct,
                                         solver=s.parabolic, tol=s.picard_tol,
                                         max_iter=s.picard_max_iter, max_stencil=s.max_stencil,
                                         relax_method=s.relax_method)

    # -- helpers
    def _coords(self, exc):
        cells = getattr(exc, "cells", None)
        if cells is None or not np.size(cells):
            return None
        X = self.grid.mesh()
        n = int(np.prod(self.grid.shape))
        flat = [int(c) for c in np.atleast_1d(cells)[:8] if 0 <= c < n]
        return [tuple(float(x.ravel()[c]) for x in X) for c in flat]

    def _guard(self, stage, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except DiffmixError as exc:
            raise StageError(stage, self.t, self.step_index, exc, self._coords(exc)) from exc
        except FloatingPointError as exc:  # pragma: no cover - only with np.seterr(raise)
            raise StageError(stage, self.t, self.step_index, exc) from exc

    def stable_dt(self):
        """CFL step, further limited by the heating controller when the laser is on.

        The first heated step uses :meth:`heating_dt`; afterwards the limit
        follows the largest relative temperature change ``r`` of the previous
        heat stage, ``dt_next = dt min(2, max_heating / r)``, where changes are
        measured against ``T + HEAT_FLOOR max(T)``.
        """
        dt = self._guard("hydro", compute_dt_cfl, self.W, self.grid, self.mats, self.case.solver.cfl)
        if self.case.physics.laser:
            if self.dt_heat is None:
                self.dt_heat = self.heating_dt()
            dt = min(dt, self.dt_heat)
        return dt

    def heating_dt(self):
        """``max_heating * min (sum m_k cv_k T_k) / I`` over the heated cells."""
        src = self.laser_source(self.U.rho)
        hot = src > 0.0
        if not np.any(hot):
            return np.inf
        thermal = np.sum(self.U.m * self.mats.col("cv", self.grid.ndim) * self.W.T, axis=0)
        return self.case.solver.max_heating * float(np.min(thermal[hot] / src[hot]))

    def laser_source(self, rho):
        laser = self.case.laser
        return laser_deposition_profile(rho, self.grid.faces(0), laser)

    # -- one step
    def advance(self, dt) -> dict:
        """Apply the stage pipeline over ``dt``; returns wall-clock seconds per stage.

        The state is only replaced once every stage has succeeded, so a
        failed call leaves the simulation untouched.
        """
        phys = self.case.physics
        grid, mats = self.grid, self.mats
        wall = {}
        U, W = self.U, self.W
        boundary = self.boundary

        t0 = _time.perf_counter()
        if phys.hydro:
            res = self._guard("hydro", hydro_step, U, grid, mats, dt, self.hydro_cfg, W)
            U = res.U
            boundary = boundary + res.boundary_delta
            W = self._guard("hydro", primitive_from_conserved, U, mats)
        wall["hydro"] = _time.perf_counter() - t0

        t0 = _time.perf_counter()
        if phys.viscous:
            Ek = reconstruct_phase_energies(W)
            vres = self._guard("viscous", viscous_step, U, Ek, W, grid, mats, dt, self.visc_cfg)
            U = vres.U
            W = self._guard("viscous", primitive_from_conserved, U, mats)
        wall["viscous"] = _time.perf_counter() - t0

        t0 = _time.perf_counter()
        eq = None
        if phys.relax:
            m = U.m
            rho = m.sum(axis=0)
            E_int = U.E - 0.5 * np.sum(U.mom * U.mom, axis=0) / rho
            eq = self._guard("relax", relax_temperatures, m, E_int, mats,
                             T_guess=mixture_temperature(W, mats),
                             method=self.thermal_cfg.relax_method, phase_T=W.T)
        wall["relax"] = _time.perf_counter() - t0

        t0 = _time.perf_counter()
        if eq is not None and (phys.conduct or phys.laser):
            src = self.laser_source(U.rho) if phys.laser else None
            cres = self._guard("conduct", heat_conduction_step, U.m, eq, grid, mats, dt, src,
                               self.thermal_cfg)
            if phys.laser:
                # cold cells reached by a heat front would otherwise dominate
                scale = eq.T + HEAT_FLOOR * eq.T.max()
                change = float(np.max(np.abs(cres.state.T - eq.T) / scale))
                heat_next = dt * min(2.0, self.case.solver.max_heating / max(change, 1e-300))
            eq = cres.state
        if eq is not None:
            W = eq.primitive(W.u)
            U = conserved_from_primitive(W)
            W = self._guard("conduct" if phys.conduct else "relax", primitive_from_conserved, U, mats)
        wall["conduct"] = _time.perf_counter() - t0

        self.U, self.W, self.boundary = U, W, boundary
        if phys.laser and eq is not None:
            self.dt_heat = heat_next
        self.t += dt
        self.step_index += 1
        return wall

    def diagnostics(self, dt=0.0, wall=None) -> DiagnosticsRecord:
        W, U, mats = self.W, self.U, self.mats
        T = mixture_temperature(W, mats)
        alpha = U.alpha
        S = eos.entropy_density(U.m, W.rho, W.p, mats).sum() * self.grid.cell_volume
        return DiagnosticsRecord(
            step=self.step_index, time=self.t, dt=dt,
            totals=domain_totals(U, self.grid)[: U.data.shape[0] - (U.n_phases - 1)],
            boundary=self.boundary[: U.data.shape[0] - (U.n_phases - 1)].copy(),
            p_min=float(W.p.min()), p_max=float(W.p.max()),
            T_min=float(T.min()), T_max=float(T.max()),
            alpha_min=float(alpha.min()), alpha_max=float(alpha.max()),
            saturation_error=float(np.max(np.abs(alpha.sum(axis=0) - 1.0))),
            entropy=float(S), wall=dict(wall or {}))


# ---------------------------------------------------------------- writers

def csv_columns(n_phases):
    return (["x", "rho", "u", "p", "T"] + [f"rho_{k + 1}" for k in range(n_phases)]
            + [f"alpha_{k + 1}" for k in range(n_phases)] + [f"T_{k + 1}" for k in range(n_phases)])


def write_csv_1d(path, grid, W: PrimitiveState, mats):
    """One row per cell: ``x, rho, u, p, T, rho_k.., alpha_k.., T_k..`` at 17 digits."""
    if grid.ndim != 1:
        raise ConfigError("CSV snapshots are for 1D grids")
    cols = [grid.centers(0), W.density, W.u[0], W.p, mixture_temperature(W, mats),
            *W.rho, *W.alpha, *W.T]
    table = np.column_stack(cols)
    np.savetxt(path, table, fmt="%.17g", delimiter=",", header=",".join(csv_columns(W.n_phases)),
               comments="")
    return Path(path)


def read_csv_1d(path):
    """Columns of a CSV snapshot as a name -> array mapping."""
    with open(path) as fh:
        names = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {n: data[:, i] for i, n in enumerate(names)}


def schlieren(rho, dx, k=10.0):
    """``exp(-k |grad rho| / max |grad rho|)``; identically 1 for uniform density."""
    g = np.gradient(rho, *dx)
    mag = np.sqrt(sum(gi * gi for gi in g))
    top = mag.max()
    if top <= 0.0:
        return np.ones_like(rho)
    return np.exp(-k * mag / top)


def vtk_fields(grid, W: PrimitiveState, mats):
    speed = np.sqrt(np.sum(W.u * W.u, axis=0))
    scalars = {"rho": W.density, "p": W.p, "T": mixture_temperature(W, mats), "speed": speed}
    for k in range(W.n_phases):
        scalars[f"alpha_{k + 1}"] = W.alpha[k]
    scalars["schlieren"] = schlieren(W.density, grid.dx)
    return scalars, {"velocity": W.u}


def _vtk_values(a):
    # x varies fastest in structured points
    return "\n".join("%.17g" % v for v in np.asarray(a).T.ravel())


def write_vtk_2d(path, grid, W: PrimitiveState, mats, title="diffmix snapshot"):
    """Legacy ASCII ``STRUCTURED_POINTS`` file with cell data."""
    if grid.ndim != 2:
        raise ConfigError("VTK snapshots are for 2D grids")
    nx, ny = grid.shape
    scalars, vectors = vtk_fields(grid, W, mats)
    lines = ["# vtk DataFile Version 3.0", title[:255], "ASCII", "DATASET STRUCTURED_POINTS",
             f"DIMENSIONS {nx + 1} {ny + 1} 1",
             f"ORIGIN {grid.lower[0]:.17g} {grid.lower[1]:.17g} 0",
             f"SPACING {grid.dx[0]:.17g} {grid.dx[1]:.17g} 1",
             f"CELL_DATA {nx * ny}"]
    for name, a in scalars.items():
        lines += [f"SCALARS {name} double 1", "LOOKUP_TABLE default", _vtk_values(a)]
    for name, v in vectors.items():
        comps = np.stack([v[0], v[1], np.zeros_like(v[0])], axis=-1)   # (nx, ny, 3)
        rows = comps.transpose(1, 0, 2).reshape(-1, 3)
        lines += [f"VECTORS {name} double",
                  "\n".join("%.17g %.17g %.17g" % tuple(r) for r in rows)]
    Path(path).write_text("\n".join(lines) + "\n")
    return Path(path)


def read_vtk_2d(path):
    """Parse a file written by :func:`write_vtk_2d` into ``(header, fields)``.

    Scalars come back shaped ``(nx, ny)``, vectors ``(3, nx, ny)``.
    """
    tok = Path(path).read_text().split("\n")
    if not tok[0].startswith("# vtk DataFile"):
        raise ValueError("not a legacy VTK file")
    header, fields = {}, {}
    i = 2
    nx = ny = None
    while i < len(tok):
        line = tok[i].strip()
        i += 1
        if not line:
            continue
        key, *rest = line.split()
        if key in ("ASCII", "DATASET"):
            header[key] = rest
        elif key in ("DIMENSIONS", "ORIGIN", "SPACING"):
            header[key] = [float(r) for r in rest]
            if key == "DIMENSIONS":
                nx, ny = int(rest[0]) - 1, int(rest[1]) - 1
        elif key == "CELL_DATA":
            header[key] = int(rest[0])
        elif key == "SCALARS":
            i += 1  # LOOKUP_TABLE
            vals = np.array([float(v) for v in tok[i:i + nx * ny]])
            i += nx * ny
            fields[rest[0]] = vals.reshape(ny, nx).T
        elif key == "VECTORS":
            vals = np.array([[float(v) for v in r.split()] for r in tok[i:i + nx * ny]])
            i += nx * ny
            fields[rest[0]] = vals.reshape(ny, nx, 3).transpose(2, 1, 0)
        else:
            raise ValueError(f"unexpected VTK line {line!r}")
    return header, fields


def write_snapshot(out_dir, case, sim: Simulation, index, tag=None):
    stem = f"{_safe(case.name)}_{index:04d}" if tag is None else f"{_safe(case.name)}_{tag}"
    if case.grid.ndim == 1:
        return write_csv_1d(Path(out_dir) / f"{stem}.csv", case.grid, sim.W, case.materials)
    return write_vtk_2d(Path(out_dir) / f"{stem}.vtk", case.grid, sim.W, case.materials,
                        title=f"{case.name} t={sim.t:.17g}")


def _safe(name):
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in name)


def write_diagnostics(path, records: List[DiagnosticsRecord], n_phases, ndim):
    if not records:
        return None
    rows = [r.row(n_phases, ndim) for r in records]
    with open(path, "w", newline="") as fh:
        wr = csv.DictWriter(fh, fieldnames=list(rows[0]))
        wr.writeheader()
        for r in rows:
            wr.writerow({k: (repr(float(v)) if isinstance(v, (float, np.floating)) else v)
                         for k, v in r.items()})
    return Path(path)


# ---------------------------------------------------------------- run

@dataclass
class RunResult:
    status: int
    case: CaseConfig
    simulation: Simulation
    diagnostics: List[DiagnosticsRecord]
    files: List[Path]
    error: Optional[StageError] = None

    @property
    def state(self) -> PrimitiveState:
        return self.simulation.W

    @property
    def time(self):
        return self.simulation.t


def _next_stop(t, stops):
    for s in stops:
        if s > t:
            return s
    return None


def run(plan: RunPlan, raise_on_error=False) -> RunResult:
    """Execute a plan.  ``status`` is 0 on success and 3 on a numerical failure.

    Configuration problems raise :class:`ConfigError` before any step is
    taken.  A failing stage writes ``<case>_failure`` (the state at the start
    of the failing step) to the output directory and, unless
    ``raise_on_error`` is set, returns status 3 with the error attached.
    """
    case = plan.resolve()
    sim = Simulation(case)
    out = Path(plan.out_dir) if plan.out_dir is not None else None
    files = []
    records = [sim.diagnostics()]
    snaps = sorted(set(case.output.snapshots) | {case.t_end})
    stops = [s for s in snaps if s > 0.0]
    if out is not None:
        files.append(write_snapshot(out, case, sim, 0))
    every = max(int(case.output.diagnostics_every), 1)
    error = None
    snap_index = 1
    t_end = case.t_end
    while sim.t < t_end:
        if plan.max_steps is not None and sim.step_index >= plan.max_steps:
            break
        try:
            dt = sim.stable_dt()
            stop = _next_stop(sim.t, stops)
            hit = sim.t + dt >= stop * (1.0 - 1e-12)
            if hit:
                dt = stop - sim.t
            for attempt in range(case.solver.max_retries + 1):
                try:
                    wall = sim.advance(dt)
                    break
                except StageError as exc:
                    if attempt == case.solver.max_retries:
                        raise
                    log.warning("%s; retrying with dt=%.6g", exc, 0.5 * dt)
                    dt *= 0.5
                    hit = False
            if hit:
                sim.t = stop
        except StageError as exc:
            error = exc
            log.error("%s", exc)
            if out is not None:
                files.append(write_snapshot(out, case, sim, 0, tag="failure"))
            if raise_on_error:
                raise
            break
        rec = sim.diagnostics(dt, wall) if (sim.step_index % every == 0 or hit) else None
        if rec is not None:
            records.append(rec)
        if plan.on_step is not None:
            plan.on_step(sim, rec)
        if hit and out is not None:
            files.append(write_snapshot(out, case, sim, snap_index))
        if hit:
            snap_index += 1
    if out is not None:
        d = write_diagnostics(out / f"{_safe(case.name)}_diagnostics.csv", records,
                              len(case.materials), case.grid.ndim)
        if d is not None:
            files.append(d)
    return RunResult(0 if error is None else 3, case, sim, records, files, error)


# ---------------------------------------------------------------- oracles and convergence

def riemann_reference(case: CaseConfig, x, t):
    """Exact pure-fluid solution for a two-state shock-tube case at time ``t``."""
    notes = case.notes
    if "left" not in notes or "right" not in notes:
        raise ConfigError(f"case {case.name!r} has no two-state Riemann description")
    mL, mR = case.materials[0], case.materials[1]
    L, R = notes["left"], notes["right"]
    rL = float(eos.sg_density(L["p"], L["T"], mL))
    rR = float(eos.sg_density(R["p"], R["T"], mR))
    sol = exact_riemann((rL, L.get("u", 0.0), L["p"]), (rR, R.get("u", 0.0), R["p"]), mL, mR)
    return sol, sample_profile(sol, np.asarray(x), t, notes["interface"])


def _fields(W: PrimitiveState):
    return {"rho": W.density, "u": W.u[0], "p": W.p}


def _restrict(a, factor):
    return a.reshape(-1, factor).mean(axis=1)


@dataclass
class ConvergenceTable:
    case: str
    reference: str
    rows: list

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            wr = csv.DictWriter(fh, fieldnames=["cells", "variable", "L1", "L2", "Linf",
                                                "order_L1", "order_L2", "order_Linf"])
            wr.writeheader()
            for r in self.rows:
                wr.writerow({k: (repr(float(v)) if isinstance(v, float) else v) for k, v in r.items()})
        return Path(path)

    def summary(self):
        lines = [f"convergence of {self.case} against {self.reference}",
                 f"{'cells':>8} {'var':>5} {'L1':>12} {'L2':>12} {'Linf':>12} {'p(L1)':>7}"]
        for r in self.rows:
            o = r["order_L1"]
            lines.append(f"{r['cells']:>8} {r['variable']:>5} {r['L1']:12.4e} {r['L2']:12.4e} "
                         f"{r['Linf']:12.4e} {'' if o is None or np.isnan(o) else f'{o:7.3f}':>7}")
        return "\n".join(lines)

    def errors(self, variable, norm="L1"):
        return [r[norm] for r in self.rows if r["variable"] == variable]

    def orders(self, variable, norm="L1"):
        return [r[f"order_{norm}"] for r in self.rows if r["variable"] == variable][1:]


def convergence_report(case_factory, resolutions, reference="oracle", variables=("rho", "u", "p"),
                       **run_kwargs) -> ConvergenceTable:
    """Errors and observed orders of a 1D case over a list of resolutions.

    ``case_factory(cells)`` builds the case at a resolution.  With
    ``reference="oracle"`` the exact solution is used: the initial state for
    cases that return to it (``notes["exact"] == "initial"``) or the exact
    Riemann solution for two-state shock tubes.  With ``"finest"`` the finest
    run, averaged onto each coarser grid, is the reference (resolutions must
    then divide the finest one).
    """
    resolutions = [int(n) for n in resolutions]
    if reference not in ("oracle", "finest"):
        raise ConfigError("reference must be 'oracle' or 'finest'")
    results = {}
    for n in sorted(set(resolutions)):
        case = case_factory(n)
        if case.grid.ndim != 1:
            raise ConfigError("convergence reports are implemented for 1D cases")
        res = run(RunPlan(case_config=case, **run_kwargs), raise_on_error=True)
        results[n] = (case, res.state)
    if reference == "finest":
        nf = max(resolutions)
        ref_fields = _fields(results[nf][1])
        if any(nf % n for n in resolutions):
            raise ConfigError("with reference='finest' every resolution must divide the finest")
    rows = []
    prev = {}
    for n in resolutions:
        case, W = results[n]
        got = _fields(W)
        x = case.grid.centers(0)
        if reference == "finest":
            ref = {k: _restrict(v, nf // n) for k, v in ref_fields.items()}
        elif case.notes.get("exact") == "initial":
            ref = _fields(initial_state(case))
        else:
            _, smp = riemann_reference(case, x, case.t_end)
            ref = {"rho": smp.rho, "u": smp.u, "p": smp.p}
        h = case.grid.dx[0]
        for v in variables:
            e = got[v] - ref[v]
            err = {"L1": float(np.sum(np.abs(e)) * h), "L2": float(np.sqrt(np.sum(e * e) * h)),
                   "Linf": float(np.max(np.abs(e)))}
            row = {"cells": n, "variable": v, **err}
            for norm in ("L1", "L2", "Linf"):
                o = None
                if v in prev:
                    n0, e0 = prev[v]
                    if n0 != n and e0[norm] > 0 and err[norm] > 0:
                        o = float(np.log(e0[norm] / err[norm]) / np.log(n / n0))
                row[f"order_{norm}"] = o
            rows.append(row)
            prev[v] = (n, err)
    return ConvergenceTable(case_factory(resolutions[0]).name, reference, rows)
