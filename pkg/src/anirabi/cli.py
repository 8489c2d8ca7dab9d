"""Command-line driver.

Subcommands
    spectrum        parameter sweep of the lowest levels over a g grid
    exceptional     degenerate + non-degenerate exceptional points
    phase-diagram   ground-state parity boundaries in the r/g plane
    validate        solver-vs-oracle comparison, nonzero exit on failure
    ed              oracle energies over a g grid

Flags can also be supplied through a plain key=value config file
(--config); explicit flags win.  Sweeps honor the WORKERS environment
variable.  Exit codes: 0 ok, 1 validation failure, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import AnirabiError, ConfigError
from .kernels import BACKEND
from .sweeps import (
    ED_COLUMNS,
    EXCEPTIONAL_COLUMNS,
    PHASE_COLUMNS,
    SPECTRUM_COLUMNS,
    VALIDATE_COLUMNS,
    SweepConfig,
    run_ed_sweep,
    run_exceptional_scan,
    run_phase_diagram,
    run_spectrum_sweep,
    run_validate,
    write_table,
)

_DEFAULTS = {
    "delta": 1.0,
    "r": 0.5,
    "g_min": 0.0,
    "g_max": 1.5,
    "g_steps": 151,
    "levels": 6,
    "n_pole_cap": 6,
    "trunc": None,
    "out": ".",
    "format": "csv",
    "r_min": 0.0,
    "r_max": 3.0,
    "r_steps": 61,
    "g_hi": 6.0,
}

_TYPES = {
    "delta": float, "r": float, "g_min": float, "g_max": float,
    "g_steps": int, "levels": int, "n_pole_cap": int, "trunc": int,
    "out": str, "format": str,
    "r_min": float, "r_max": float, "r_steps": int, "g_hi": float,
}


def _load_config(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for ln, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{ln}: expected key=value, got {line!r}")
            key, _, raw = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _TYPES:
                raise ConfigError(f"{path}:{ln}: unknown key {key!r}")
            try:
                values[key] = _TYPES[key](raw.strip())
            except ValueError as exc:
                raise ConfigError(f"{path}:{ln}: bad value for {key}: {raw!r}") from exc
    return values


def _add_common(sp: argparse.ArgumentParser, keys) -> None:
    for key in keys:
        flag = "--" + key.replace("_", "-")
        sp.add_argument(flag, type=_TYPES[key], default=None)
    sp.add_argument("--config", default=None, help="key=value file; flags override")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="anirabi",
        description="Anisotropic quantum Rabi model spectra from G-functions, "
        "with a built-in exact-diagonalization oracle.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    point_keys = (
        "delta", "r", "g_min", "g_max", "g_steps", "levels",
        "n_pole_cap", "trunc", "out", "format",
    )
    for name in ("spectrum", "exceptional", "validate", "ed"):
        _add_common(sub.add_parser(name), point_keys)
    phase = sub.add_parser("phase-diagram")
    _add_common(
        phase,
        ("delta", "r_min", "r_max", "r_steps", "g_hi", "n_pole_cap", "out", "format"),
    )
    return ap


def _resolve(args: argparse.Namespace) -> dict:
    values = dict(_DEFAULTS)
    if args.config:
        values.update(_load_config(args.config))
    for key in _TYPES:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return values


def _sweep_config(v: dict) -> SweepConfig:
    return SweepConfig(
        delta=v["delta"],
        r=v["r"],
        g_min=v["g_min"],
        g_max=v["g_max"],
        g_steps=v["g_steps"],
        levels=v["levels"],
        n_pole_cap=v["n_pole_cap"],
        trunc=v["trunc"],
        out_dir=v["out"],
        format=v["format"],
    )


def _out_path(v: dict, stem: str) -> str:
    os.makedirs(v["out"], exist_ok=True)
    return os.path.join(v["out"], f"{stem}.{v['format']}")


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        v = _resolve(args)
        if args.command == "spectrum":
            cfg = _sweep_config(v)
            rows = run_spectrum_sweep(cfg)
            path = _out_path(v, "spectrum")
            write_table(rows, SPECTRUM_COLUMNS, path, cfg.format)
            print(f"spectrum: {len(rows)} rows -> {path} [{BACKEND} kernels]")
        elif args.command == "exceptional":
            cfg = _sweep_config(v)
            rows = run_exceptional_scan(cfg)
            path = _out_path(v, "exceptional")
            write_table(rows, EXCEPTIONAL_COLUMNS, path, cfg.format)
            print(f"exceptional: {len(rows)} points -> {path}")
        elif args.command == "phase-diagram":
            rows = run_phase_diagram(
                v["delta"], v["r_min"], v["r_max"], v["r_steps"],
                g_hi=v["g_hi"], n_pole_cap=v["n_pole_cap"],
            )
            path = _out_path(v, "phase_diagram")
            write_table(rows, PHASE_COLUMNS, path, v["format"])
            meta = {
                "delta": v["delta"],
                "r_min": v["r_min"], "r_max": v["r_max"], "r_steps": v["r_steps"],
                "g_hi": v["g_hi"], "n_pole_cap": v["n_pole_cap"],
                "isotropy_guard": 1e-3,
            }
            meta_path = os.path.join(v["out"], "phase_diagram_meta.json")
            with open(meta_path, "w") as fh:
                json.dump(meta, fh, indent=1, sort_keys=True)
                fh.write("\n")
            print(f"phase-diagram: {len(rows)} boundaries -> {path}")
        elif args.command == "validate":
            cfg = _sweep_config(v)
            rows, summary = run_validate(cfg)
            path = _out_path(v, "validate")
            write_table(rows, VALIDATE_COLUMNS, path, cfg.format)
            print(
                "validate: worst |dE| = {worst_abs_dev:.3e} over {points} points "
                "(tol {tolerance:g}) -> {passed}".format(**summary)
            )
            if not summary["passed"]:
                return 1
        elif args.command == "ed":
            cfg = _sweep_config(v)
            rows = run_ed_sweep(cfg)
            path = _out_path(v, "ed")
            write_table(rows, ED_COLUMNS, path, cfg.format)
            print(f"ed: {len(rows)} rows -> {path}")
        return 0
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except AnirabiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
