import numpy as np
import pytest

import diffmix.driver as drv
from diffmix.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main
from diffmix.config import load_case
from diffmix.driver import read_csv_1d
from diffmix.errors import ClosureError


def test_list_cases(capsys):
    assert main(["list-cases"]) == EXIT_OK
    out = capsys.readouterr().out
    for name in ("pvt_advection", "laser_ablation_1d", "triple_point:H+TR+HC", "shock_bubble"):
        assert name in out


def test_run_writes_files(tmp_path, capsys):
    code = main(["run", "--case", "pvt_advection", "--cells", "20", "--tend", "1e-7", "--out", str(tmp_path)])
    assert code == EXIT_OK
    assert (tmp_path / "pvt_advection_0001.csv").exists()
    assert "steps" in capsys.readouterr().out


def test_dump_config_round_trip(tmp_path):
    path = tmp_path / "case.yaml"
    assert main(["run", "--case", "conducting_shock_tube", "--cells", "30", "--solver", "implicit",
                 "--dump-config", str(path)]) == EXIT_OK
    case = load_case(path)
    assert case.grid.shape == (30,) and case.solver.parabolic == "implicit"
    assert main(["run", "--config", str(path), "--tend", "1e-6"]) == EXIT_OK


@pytest.mark.parametrize("argv", [
    ["run", "--case", "no_such_case"],
    ["run"],
    ["run", "--case", "pvt_advection", "--cells", "10", "10"],
    ["run", "--case", "pvt_advection", "--cfl", "2"],
    ["run", "--config", "/nonexistent/case.yaml"],
    ["riemann", "--case", "pvt_advection"],
    ["riemann", "--case", "shock_bubble", "--cells", "10", "4"],
    ["converge", "--case", "shock_bubble", "--cells", "10"],
])
def test_config_errors_exit_2(argv, capsys):
    assert main(argv) == EXIT_CONFIG
    assert "config error" in capsys.readouterr().err


def test_numerical_failure_exit_3(tmp_path, monkeypatch, capsys):
    def broken(*a, **k):
        raise ClosureError("negative squared sound speed")

    monkeypatch.setattr(drv, "hydro_step", broken)
    assert main(["run", "--case", "pvt_advection", "--cells", "10", "--out", str(tmp_path)]) == EXIT_NUMERICAL
    assert (tmp_path / "pvt_advection_failure.csv").exists()
    assert "stage 'hydro'" in capsys.readouterr().err


def test_riemann_csv(tmp_path, capsys):
    out = tmp_path / "exact.csv"
    assert main(["riemann", "--case", "shock_tube_no_diffusion", "--cells", "200", "--out", str(out)]) == EXIT_OK
    cols = read_csv_1d(out)
    assert list(cols) == ["x", "rho", "u", "p", "T", "side"] and cols["x"].size == 200
    assert "p* = 61440502.89" in capsys.readouterr().err
    # far field untouched
    assert cols["p"][0] == pytest.approx(1e9) and cols["p"][-1] == pytest.approx(1e5)


def test_converge_table(tmp_path, capsys):
    out = tmp_path / "conv.csv"
    code = main(["converge", "--case", "shock_tube_no_diffusion", "--cells", "50", "100", "--tend", "5e-5",
                 "--out", str(out)])
    assert code == EXIT_OK and out.exists()
    assert "convergence of" in capsys.readouterr().out
