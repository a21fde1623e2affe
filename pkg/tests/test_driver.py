from dataclasses import replace

import numpy as np
import pytest

import diffmix.driver as drv
from diffmix.cases import case_conducting_shock_tube, case_pvt_advection, case_shock_bubble, case_smooth_advection
from diffmix.config import Physics, initial_state
from diffmix.driver import (RunPlan, Simulation, convergence_report, csv_columns, read_csv_1d, read_vtk_2d, run,
                            schlieren, write_csv_1d, write_vtk_2d)
from diffmix.state import conserved_from_primitive
from diffmix.errors import ClosureError, ConfigError, StageError


def test_csv_round_trip(tmp_path):
    case = case_pvt_advection(cells=16)
    W = initial_state(case)
    path = write_csv_1d(tmp_path / "s.csv", case.grid, W, case.materials)
    cols = read_csv_1d(path)
    assert list(cols) == csv_columns(2) and len(cols) == 5 + 3 * 2
    np.testing.assert_array_equal(cols["x"], case.grid.centers(0))
    np.testing.assert_array_equal(cols["p"], W.p)
    np.testing.assert_array_equal(cols["alpha_2"], W.alpha[1])
    np.testing.assert_array_equal(cols["rho_1"], W.rho[0])


def test_vtk_round_trip(tmp_path):
    case = case_shock_bubble(nx=2, ny=2)
    W = initial_state(case)
    W.u[0] = [[1.0, 2.0], [3.0, 4.0]]
    path = write_vtk_2d(tmp_path / "s.vtk", case.grid, W, case.materials)
    header, fields = read_vtk_2d(path)
    assert header["DIMENSIONS"] == [3, 3, 1] and header["CELL_DATA"] == 4
    np.testing.assert_array_equal(fields["p"], W.p)
    np.testing.assert_array_equal(fields["velocity"][0], W.u[0])
    assert fields["velocity"].shape == (3, 2, 2) and np.all(fields["velocity"][2] == 0)
    with pytest.raises(ConfigError):
        write_csv_1d(tmp_path / "x.csv", case.grid, W, case.materials)


def test_schlieren():
    np.testing.assert_array_equal(schlieren(np.full((5, 4), 2.0), (0.1, 0.1)), 1.0)
    s = schlieren(np.add.outer(np.arange(5.0) ** 2, np.zeros(4)), (1.0, 1.0))
    assert s.min() == pytest.approx(np.exp(-10.0)) and s.max() <= 1.0


def test_zero_step_run(tmp_path):
    case = replace(case_pvt_advection(cells=20), t_end=0.0)
    res = run(RunPlan(case_config=case, out_dir=str(tmp_path)))
    assert res.status == 0 and res.simulation.step_index == 0
    np.testing.assert_array_equal(res.simulation.U.data, conserved_from_primitive(initial_state(case)).data)
    assert res.time == 0.0
    assert len(res.diagnostics) == 1


def test_deterministic():
    case = case_conducting_shock_tube(cells=40, t_end=2e-5)
    a = run(RunPlan(case_config=case)).simulation.U.data
    b = run(RunPlan(case_config=case)).simulation.U.data
    np.testing.assert_array_equal(a, b)


def test_disabled_stages_are_identity():
    case = replace(case_pvt_advection(cells=20),
                   physics=Physics(hydro=False, viscous=False, relax=False, conduct=False))
    sim = Simulation(case)
    U0 = sim.U.data.copy()
    sim.advance(1e-7)
    np.testing.assert_array_equal(sim.U.data, U0)
    assert sim.t == 1e-7


def test_relax_keeps_equilibrium():
    case = replace(case_pvt_advection(cells=20), physics=Physics(hydro=False))
    sim = Simulation(case)
    U0 = sim.U.data.copy()
    sim.advance(1e-7)
    np.testing.assert_allclose(sim.U.data, U0, rtol=1e-12, atol=1e-12 * np.abs(U0).max())


def test_snapshots_at_exact_times(tmp_path):
    case = case_pvt_advection(cells=40, t_end=2e-6)
    times = []
    res = run(RunPlan(case_config=case, out_dir=str(tmp_path), snapshots=[5e-7, 1.25e-6],
                      on_step=lambda sim, rec: times.append(sim.t)))
    assert res.status == 0
    assert 5e-7 in times and 1.25e-6 in times and times[-1] == 2e-6
    names = sorted(p.name for p in res.files)
    assert [n for n in names if n.endswith(".csv") and "diag" not in n] == \
        [f"pvt_advection_{i:04d}.csv" for i in range(4)]
    diag = read_csv_1d(tmp_path / "pvt_advection_diagnostics.csv")
    assert diag["step"][0] == 0 and diag["time"][-1] == 2e-6
    assert np.all(diag["saturation_error"] < 1e-12)


def test_failure_writes_snapshot_and_status(tmp_path, monkeypatch):
    calls = []

    def broken(U, *a, **k):
        calls.append(1)
        raise ClosureError("negative pressure", cells=np.array([3]))

    monkeypatch.setattr(drv, "hydro_step", broken)
    case = case_pvt_advection(cells=20)
    res = run(RunPlan(case_config=case, out_dir=str(tmp_path)))
    assert res.status == 3 and isinstance(res.error, StageError)
    assert res.error.stage == "hydro" and res.error.coords[0][0] == pytest.approx(case.grid.centers(0)[3])
    assert len(calls) == case.solver.max_retries + 1
    assert (tmp_path / "pvt_advection_failure.csv").exists()
    with pytest.raises(StageError):
        run(RunPlan(case_config=case), raise_on_error=True)


def test_retry_halves_dt(monkeypatch):
    real = drv.hydro_step
    dts = []

    def flaky(U, grid, mats, dt, *a, **k):
        dts.append(dt)
        if len(dts) == 1:
            raise ClosureError("transient")
        return real(U, grid, mats, dt, *a, **k)

    monkeypatch.setattr(drv, "hydro_step", flaky)
    res = run(RunPlan(case_config=case_pvt_advection(cells=20), max_steps=1))
    assert res.status == 0 and dts[1] == pytest.approx(0.5 * dts[0], rel=1e-15)
    assert res.time == pytest.approx(dts[1], rel=1e-15)


def test_plan_validation(tmp_path):
    with pytest.raises(ConfigError):
        RunPlan().resolve()
    with pytest.raises(ConfigError):
        RunPlan(case="pvt_advection", cells=(10, 10)).resolve()
    with pytest.raises(ConfigError):
        RunPlan(case="nope").resolve()
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(ConfigError):
        RunPlan(case="pvt_advection", out_dir=str(blocker / "sub")).resolve()
    case = RunPlan(case="shock_bubble", cells=(20, 8), conduct=False, solver="implicit").resolve()
    assert case.grid.shape == (20, 8) and case.solver.parabolic == "implicit"


def test_convergence_orders():
    tab = convergence_report(lambda n: case_smooth_advection(n, limiter="minmod"), [32, 64, 128],
                             variables=("rho",))
    assert tab.orders("rho")[-1] > 1.5
    assert "cells" in tab.summary()


def test_convergence_finest_identical():
    tab = convergence_report(lambda n: case_pvt_advection(n, t_end=1e-7), [40, 40], reference="finest")
    assert all(e == 0.0 for e in tab.errors("p"))
    with pytest.raises(ConfigError):
        convergence_report(lambda n: case_pvt_advection(n, t_end=1e-7), [30, 40], reference="finest")
