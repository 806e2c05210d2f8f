"""End-to-end CLI runs in a temp directory: artifacts, exit codes, round-trip."""

import csv
import json

import numpy as np
import pytest

from parkerstab.cli import RunConfig, config_echo, main, parse_config

pytestmark = pytest.mark.filterwarnings("ignore::UserWarning")


def run_cli(*argv):
    return main(list(argv))


def test_equilibrium_artifacts(tmp_path):
    out = tmp_path / "eq"
    assert run_cli("equilibrium", "--preset", "uniform-g0", "--n", "32",
                   "--outdir", str(out)) == 0
    rep = json.loads((out / "equilibrium.json").read_text())
    assert rep["residual"] <= rep["tolerance"]
    assert rep["min_m2"] > 0
    with open(out / "profile.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:3] == ["z", "rho", "drho"]
    assert len(rows) == 33
    assert (out / "profile.png").exists()
    assert (out / "config-echo.ini").exists()


def test_criteria_artifacts(tmp_path):
    out = tmp_path / "cr"
    assert run_cli("criteria", "--preset", "schwarzschild-exp", "--n", "48",
                   "--outdir", str(out), "--format", "json") == 0
    rep = json.loads((out / "criteria.json").read_text())
    assert rep["schwarzschild_holds"] is True
    assert rep["tserkovnikov_holds"] is False
    assert rep["xi3d"] > 0
    margins = json.loads((out / "margins.json").read_text())
    assert len(margins) == 48
    assert set(margins[0]) == {"z", "schwarzschild", "buoyancy",
                               "tserkovnikov", "rt", "weight"}


def test_growth_both_methods_agree(tmp_path):
    out = tmp_path / "gr"
    assert run_cli("growth", "--preset", "schwarzschild-exp", "--n", "48",
                   "--xi1", "0.25", "--xi2", "1.0", "--no-plots",
                   "--outdir", str(out)) == 0
    rep = json.loads((out / "growth.json").read_text())
    assert rep["qep"]["re"] > 0
    assert rep["agreement"] < 1e-6
    assert (out / "eigenfunction.csv").exists()
    assert not (out / "growth.png").exists()


def test_scan_artifacts(tmp_path):
    out = tmp_path / "sc"
    assert run_cli("scan", "--preset", "schwarzschild-exp", "--n", "32",
                   "--kmax", "3", "--outdir", str(out)) == 0
    rep = json.loads((out / "scan.json").read_text())
    assert rep["max_growth"] > 0
    assert rep["flagged_rows"] == 0
    with open(out / "dispersion.csv") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 1 + 4 * 4
    assert (out / "dispersion.png").exists()


def test_evolve_eigen_agreement(tmp_path):
    out = tmp_path / "ev"
    assert run_cli("evolve", "--preset", "tserkovnikov-layer", "--n", "48",
                   "--xi1", "0", "--xi2", "1.0", "--t-end", "6",
                   "--no-plots", "--outdir", str(out)) == 0
    rep = json.loads((out / "evolve.json").read_text())
    assert rep["sigma"] > 0
    assert rep["div_drift"] <= 1e-8
    assert rep["agreement"] < 0.2            # coarse grid, loose bound
    t = np.loadtxt(out / "trajectory.csv", delimiter=",", skiprows=1)
    assert t.shape[1] == 2


def test_evolve_random_requires_t_end(tmp_path, capsys):
    code = run_cli("evolve", "--preset", "uniform-g0", "--init", "random",
                   "--outdir", str(tmp_path / "x"))
    assert code == 1
    assert "t-end" in capsys.readouterr().err


def test_evolve_eigen_rejects_stable_preset(tmp_path):
    assert run_cli("evolve", "--preset", "uniform-g0", "--n", "32",
                   "--xi1", "1", "--xi2", "1",
                   "--outdir", str(tmp_path / "x")) == 1


def test_verdict_consistent(tmp_path):
    out = tmp_path / "vd"
    assert run_cli("verdict", "--preset", "strong-field", "--n", "32",
                   "--kmax", "3", "--outdir", str(out)) == 0
    rep = json.loads((out / "verdict.json").read_text())
    assert rep["theorem_2_5"] is True
    assert rep["consistent"] is True


def test_validation_exit_codes(tmp_path, capsys):
    assert run_cli("growth", "--preset", "nope") == 1
    assert run_cli("growth") == 1
    assert run_cli("growth", "--preset", "uniform-g0", "--n", "4") == 1
    assert run_cli("growth", "--preset", "uniform-g0",
                   "--profile-file", "x.dat") == 1
    with pytest.raises(SystemExit):
        run_cli("not-a-command")
    capsys.readouterr()


def test_config_round_trip(tmp_path):
    out = tmp_path / "a"
    assert run_cli("growth", "--preset", "schwarzschild-exp", "--n", "32",
                   "--xi1", "0.5", "--mu1", "0.07", "--no-plots",
                   "--outdir", str(out)) == 0
    cfg = parse_config(["growth", "--config", str(out / "config-echo.ini"),
                        "--outdir", str(tmp_path / "b")])
    assert cfg.params.mu1 == 0.07
    assert cfg.xi1 == 0.5
    assert cfg.n == 32
    assert cfg.preset == "schwarzschild-exp"
    assert cfg.plots is False
    # echoing the parsed config reproduces the file except for outdir
    text = config_echo(cfg)
    orig = (out / "config-echo.ini").read_text()
    strip = lambda s: [ln for ln in s.splitlines() if not ln.startswith("outdir")]
    assert strip(text) == strip(orig)


def test_cli_flag_beats_config(tmp_path):
    out = tmp_path / "a"
    run_cli("growth", "--preset", "schwarzschild-exp", "--n", "32",
            "--no-plots", "--outdir", str(out))
    cfg = parse_config(["growth", "--config", str(out / "config-echo.ini"),
                        "--n", "64", "--outdir", str(tmp_path / "b")])
    assert cfg.n == 64


def test_profile_file_input(tmp_path):
    x = np.linspace(-1, 1, 31)
    table = tmp_path / "dens.dat"
    table.write_text("\n".join(f"{a} {np.exp(-a)}" for a in x) + "\n")
    out = tmp_path / "eq"
    assert run_cli("equilibrium", "--profile-file", str(table),
                   "--gravity", "1.0", "--gamma", "1.0", "--margin", "0.5",
                   "--n", "32", "--no-plots", "--outdir", str(out)) == 0
    rep = json.loads((out / "equilibrium.json").read_text())
    assert rep["residual"] <= rep["tolerance"]
