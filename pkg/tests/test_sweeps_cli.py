import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from anirabi import ModelParams, Parity
from anirabi import exceptional
from anirabi.errors import ConfigError
from anirabi.sweeps import (
    EXCEPTIONAL_COLUMNS,
    SPECTRUM_COLUMNS,
    SweepConfig,
    run_exceptional_scan,
    run_phase_diagram,
    run_spectrum_sweep,
    run_validate,
    solve_spectrum,
    write_table,
)


def test_config_validation():
    with pytest.raises(ConfigError):
        SweepConfig(delta=1.0, r=0.5, g_min=1.0, g_max=1.0, g_steps=10)
    with pytest.raises(ConfigError):
        SweepConfig(delta=1.0, r=0.5, g_min=0.0, g_max=1.0, g_steps=1)
    with pytest.raises(ConfigError):
        SweepConfig(delta=1.0, r=0.5, g_min=0.0, g_max=1.0, g_steps=10, levels=0)
    with pytest.raises(ConfigError):
        SweepConfig(delta=1.0, r=0.5, g_min=0.0, g_max=1.0, g_steps=10, n_pole_cap=13)
    with pytest.raises(ConfigError):
        SweepConfig(delta=1.0, r=0.5, g_min=0.0, g_max=1.0, g_steps=10, format="xml")
    with pytest.raises(ConfigError):
        SweepConfig(delta=-1.0, r=0.5, g_min=0.0, g_max=1.0, g_steps=10)


def test_solve_spectrum_dispatch():
    # decoupled
    pts = solve_spectrum(ModelParams(0.5, 0.0, 0.7), 4)
    assert [q.energy for q in pts] == pytest.approx([-0.25, 0.25, 0.75, 1.25])
    # rotating-wave limit
    pts = solve_spectrum(ModelParams(1.0, 0.5, 0.0), 4)
    assert pts[0].energy == pytest.approx(-0.5, abs=1e-14)
    assert pts[0].parity is Parity.EVEN
    # small-r fallback uses the oracle
    pts = solve_spectrum(ModelParams(1.0, 0.5, 5e-4), 4)
    assert pts[0].parity is Parity.EVEN
    assert pts[0].energy == pytest.approx(-0.5, abs=0.01)


def test_spectrum_rows_schema_and_order(tmp_path):
    cfg = SweepConfig(delta=0.5, r=0.2, g_min=0.0, g_max=0.6, g_steps=4, levels=3)
    rows = run_spectrum_sweep(cfg)
    assert len(rows) == 12
    assert all(tuple(row.keys()) == tuple(SPECTRUM_COLUMNS) for row in rows)
    key = [(row["g"], row["level"]) for row in rows]
    assert key == sorted(key)
    for row in rows:
        assert row["energy_plus_lambda"] == pytest.approx(row["x"], abs=1e-12)
    path = str(tmp_path / "spectrum.csv")
    write_table(rows, SPECTRUM_COLUMNS, path, "csv")
    header = open(path).readline().strip()
    assert header == ",".join(SPECTRUM_COLUMNS)


def test_level_continuity_along_sweep():
    cfg = SweepConfig(delta=0.8, r=0.5, g_min=0.1, g_max=0.9, g_steps=17, levels=5)
    rows = run_spectrum_sweep(cfg)
    by_level = {}
    for row in rows:
        by_level.setdefault(row["level"], []).append(row["energy"])
    for level, energies in by_level.items():
        steps = np.abs(np.diff(energies))
        slope = max(float(np.median(steps)), 1e-6)
        assert float(np.max(steps)) < 10.0 * slope, f"jump in level {level}"


def test_workers_env_determinism(monkeypatch):
    cfg = SweepConfig(delta=0.5, r=0.2, g_min=0.0, g_max=1.0, g_steps=5, levels=4)
    monkeypatch.setenv("WORKERS", "1")
    serial = run_spectrum_sweep(cfg)
    monkeypatch.setenv("WORKERS", "4")
    parallel = run_spectrum_sweep(cfg)
    assert serial == parallel
    monkeypatch.setenv("WORKERS", "zero")
    with pytest.raises(ConfigError):
        run_spectrum_sweep(cfg)


def test_exceptional_scan_isotropic_routing(monkeypatch):
    # at r = 1 the Gamma-based condition must never be evaluated
    def boom(*a, **k):
        raise AssertionError("gamma_coeff called on the isotropic branch")

    monkeypatch.setattr(exceptional, "gamma_coeff", boom)
    cfg = SweepConfig(
        delta=1.0, r=1.0, g_min=0.0, g_max=2.0, g_steps=5, levels=3, n_pole_cap=2
    )
    rows = run_exceptional_scan(cfg)
    degs = [row for row in rows if row["kind"] == "degenerate"]
    assert degs
    assert all(row["parity"] == "undefined" for row in degs)
    assert all(row["is_gs_crossing"] == "false" for row in degs)


def test_exceptional_scan_rows():
    cfg = SweepConfig(
        delta=0.5, r=0.2, g_min=0.0, g_max=1.5, g_steps=5, levels=3, n_pole_cap=1
    )
    rows = run_exceptional_scan(cfg)
    assert all(tuple(row.keys()) == tuple(EXCEPTIONAL_COLUMNS) for row in rows)
    deg0 = [row for row in rows if row["kind"] == "degenerate" and row["n"] == 0]
    assert len(deg0) == 1
    assert deg0[0]["g"] == pytest.approx(math.sqrt(0.5 / 0.96), abs=1e-9)
    assert deg0[0]["is_gs_crossing"] == "true"


def test_phase_diagram_lowest_boundary():
    rows = run_phase_diagram(1.0, 0.5, 0.6, 2, g_hi=2.0, n_pole_cap=0)
    by_r = {}
    for row in rows:
        by_r.setdefault(row["r"], []).append(row)
    for r, rws in by_r.items():
        assert rws[0]["g_c"] == pytest.approx(
            math.sqrt(1.0 / (1.0 - r * r)), abs=1e-6
        )
        assert rws[0]["gs_parity_below"] == "+1"
        assert rws[0]["gs_parity_above"] == "-1"
        assert rws[0]["status"] == "ok"


def test_phase_diagram_parity_alternation():
    rows = run_phase_diagram(1.0, 0.4, 0.4001, 2, g_hi=4.0, n_pole_cap=2)
    mine = [row for row in rows if row["r"] == 0.4]
    assert len(mine) >= 2
    parity = "+1"
    for row in mine:
        assert row["gs_parity_below"] == parity
        assert row["gs_parity_above"] != parity
        parity = row["gs_parity_above"]
        assert row["status"] == "ok"


def test_phase_diagram_guard_band_and_jc_edge():
    rows = run_phase_diagram(1.0, 0.9995, 1.0005, 3, g_hi=2.0, n_pole_cap=0)
    assert rows == []  # every grid point inside the isotropy guard
    rows = run_phase_diagram(1.0, 0.0, 0.001, 2, g_hi=2.0, n_pole_cap=0)
    for row in rows:
        assert row["g_c"] == pytest.approx(1.0, abs=1e-3)


def test_validate_pass_and_failure_paths():
    cfg = SweepConfig(delta=0.5, r=0.2, g_min=0.05, g_max=1.0, g_steps=4, levels=6)
    rows, summary = run_validate(cfg)
    assert summary["passed"]
    assert summary["worst_abs_dev"] < 1e-8
    bad = SweepConfig(
        delta=0.5, r=0.2, g_min=0.05, g_max=1.0, g_steps=3, levels=6, trunc=20
    )
    rows, summary = run_validate(bad)
    assert not summary["passed"]
    assert any(row["status"] == "not-converged" for row in rows)


def _run_cli(args, env_extra=None, cwd=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "anirabi.cli", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=cwd,
    )


def test_cli_spectrum_and_config_file(tmp_path):
    conf = tmp_path / "run.conf"
    conf.write_text(
        "delta = 0.5\nr = 0.2\ng-min = 0\ng-max = 0.6\ng-steps = 4\nlevels = 3\n"
    )
    out1 = tmp_path / "a"
    res = _run_cli(
        ["spectrum", "--config", str(conf), "--out", str(out1)],
        env_extra={"WORKERS": "1"},
    )
    assert res.returncode == 0, res.stderr
    # flag overrides config
    out2 = tmp_path / "b"
    res = _run_cli(
        ["spectrum", "--config", str(conf), "--levels", "2", "--out", str(out2)],
        env_extra={"WORKERS": "1"},
    )
    assert res.returncode == 0
    lines1 = (out1 / "spectrum.csv").read_text().splitlines()
    lines2 = (out2 / "spectrum.csv").read_text().splitlines()
    assert len(lines1) == 1 + 4 * 3
    assert len(lines2) == 1 + 4 * 2


def test_cli_config_errors_exit_2(tmp_path):
    res = _run_cli(["spectrum", "--g-min", "1.0", "--g-max", "1.0"])
    assert res.returncode == 2
    assert "configuration error" in res.stderr
    conf = tmp_path / "bad.conf"
    conf.write_text("nonsense = 12\n")
    res = _run_cli(["spectrum", "--config", str(conf)])
    assert res.returncode == 2


def test_cli_validate_exit_codes(tmp_path):
    res = _run_cli(
        [
            "validate", "--delta", "0.5", "--r", "0.2", "--g-min", "0.1",
            "--g-max", "0.9", "--g-steps", "3", "--levels", "5",
            "--out", str(tmp_path / "ok"),
        ]
    )
    assert res.returncode == 0, res.stderr
    res = _run_cli(
        [
            "validate", "--delta", "0.5", "--r", "0.2", "--g-min", "0.1",
            "--g-max", "0.9", "--g-steps", "3", "--levels", "5",
            "--trunc", "20", "--out", str(tmp_path / "bad"),
        ]
    )
    assert res.returncode == 1


def test_cli_json_format(tmp_path):
    res = _run_cli(
        [
            "ed", "--delta", "1.0", "--r", "0.5", "--g-min", "0.2",
            "--g-max", "0.4", "--g-steps", "2", "--levels", "3",
            "--format", "json", "--out", str(tmp_path),
        ]
    )
    assert res.returncode == 0, res.stderr
    rows = json.loads((tmp_path / "ed.json").read_text())
    assert len(rows) == 6
    assert {"delta", "r", "g", "level", "energy", "parity"} <= set(rows[0])
