"""Parameter sweeps and validation runs behind the CLI.

All sweep results are plain row dictionaries with a fixed column order,
so the CSV/JSON emitters are trivial and byte-stable.  Sweeps
parallelize over coupling (or anisotropy) grid points with an ordered
reducer; the worker count comes from the WORKERS environment variable
and a single worker runs everything in-process.
"""

from __future__ import annotations

import json
import math
import multiprocessing
import os
from dataclasses import dataclass, replace

import numpy as np

from . import ed, exceptional, gfunction
from .errors import ConfigError
from .params import (
    DEGENERATE,
    G_DECOUPLED,
    NONDEGENERATE,
    R_MIN_GFUNCTION,
    REGULAR,
    ModelParams,
    Parity,
    SpectralPoint,
    derive_params,
)

#: any G-vs-ED deviation beyond this fails a validation run
VALIDATE_TOL = 1e-7

SPECTRUM_COLUMNS = (
    "delta", "r", "g", "x", "energy", "energy_plus_lambda",
    "parity", "level", "class", "status",
)
EXCEPTIONAL_COLUMNS = (
    "delta", "r", "n", "g", "kind", "parity", "energy",
    "is_gs_crossing", "status",
)
PHASE_COLUMNS = (
    "delta", "r", "n", "g_c", "gs_parity_below", "gs_parity_above", "status",
)
VALIDATE_COLUMNS = (
    "delta", "r", "g", "levels", "max_abs_dev", "parity_agree", "status",
)
ED_COLUMNS = ("delta", "r", "g", "level", "energy", "parity", "n_trunc", "status")


@dataclass(frozen=True)
class SweepConfig:
    delta: float
    r: float
    g_min: float
    g_max: float
    g_steps: int
    levels: int = 6
    n_pole_cap: int = 6
    trunc: int | None = None
    out_dir: str = "."
    format: str = "csv"

    def __post_init__(self) -> None:
        if not (self.g_min >= 0 and self.g_min < self.g_max):
            raise ConfigError(
                f"need 0 <= g_min < g_max, got [{self.g_min}, {self.g_max}]"
            )
        if self.g_steps < 2:
            raise ConfigError(f"g_steps must be at least 2, got {self.g_steps}")
        if self.levels < 1:
            raise ConfigError(f"levels must be at least 1, got {self.levels}")
        if not (0 <= self.n_pole_cap <= 12):
            raise ConfigError(f"n_pole_cap must be in [0, 12], got {self.n_pole_cap}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.delta <= 0:
            raise ConfigError(f"delta must be positive, got {self.delta}")
        if self.r < 0:
            raise ConfigError(f"r must be nonnegative, got {self.r}")

    def g_grid(self) -> np.ndarray:
        return np.linspace(self.g_min, self.g_max, self.g_steps)


# ---------------------------------------------------------------------------
# per-point spectrum assembly


def solve_spectrum(
    p: ModelParams,
    n_levels: int,
    x_lo: float | None = None,
    x_hi: float | None = None,
    opts: gfunction.ScanOptions = gfunction.ScanOptions(),
    trunc: int | None = None,
) -> list[SpectralPoint]:
    """Lowest eigenvalues with parity and classification at one point.

    Routes by regime: exactly decoupled below G_DECOUPLED, closed-form
    rotating-wave at r = 0, ED fallback for 0 < r < R_MIN_GFUNCTION
    (where the displaced basis degenerates), and the G-function scan
    otherwise.  In the scan path, pole lines whose sign structure shows
    a lifted pole contribute exceptional points: lifted in both
    G-functions means a degenerate crossing (two levels, no parity),
    lifted in one a non-degenerate exceptional state.
    """
    if p.g < G_DECOUPLED:
        return gfunction.decoupled_spectrum(p, n_levels)
    if p.r < R_MIN_GFUNCTION:
        if p.r == 0.0:
            return _jc_points(p, n_levels)
        return _ed_points(p, n_levels, trunc)

    dp = derive_params(p)
    if x_lo is None:
        x_lo = -max(1.0, p.delta)
    if x_hi is None:
        x_hi = float(n_levels + 1)

    for _ in range(4):
        points = gfunction.scan_regular_spectrum(p, x_lo, x_hi, opts)
        points.extend(_pole_line_points(p, dp, x_lo, x_hi, opts.pole_guard))
        if len(points) >= n_levels:
            break
        x_hi += 2.0  # window too short for the requested level count
    points.sort(key=lambda q: (q.energy, q.parity if q.parity is not None else 0))
    return [replace(q, level_index=i) for i, q in enumerate(points[:n_levels])]


def _jc_points(p: ModelParams, n_levels: int) -> list[SpectralPoint]:
    dp = derive_params(p)
    out = []
    for i, (energy, n_exc) in enumerate(ed.jc_spectrum(p.delta, p.g, n_levels)):
        out.append(
            SpectralPoint(
                g=p.g,
                x=energy + dp.lambda_plus,
                energy=energy,
                parity=Parity((-1) ** n_exc),
                level_index=i,
                classification=REGULAR,
            )
        )
    return out


def _ed_points(
    p: ModelParams, n_levels: int, trunc: int | None
) -> list[SpectralPoint]:
    dp = derive_params(p)
    res = ed.diagonalize(p, n_trunc=trunc, k=n_levels)
    return [
        SpectralPoint(
            g=p.g,
            x=float(e) + dp.lambda_plus,
            energy=float(e),
            parity=par,
            level_index=i,
            classification=REGULAR,
            converged=res.converged,
        )
        for i, (e, par) in enumerate(zip(res.energies, res.parities))
    ]


def _pole_line_points(p, dp, x_lo, x_hi, guard) -> list[SpectralPoint]:
    """Exceptional eigenvalues sitting on pole lines inside the window.

    Across an ordinary pole both G-functions flip sign (simple pole); a
    branch that keeps its sign has either a lifted pole or a zero
    hiding inside the guard band, and in both cases an eigenvalue lies
    at x = n to within the guard width.
    """
    out = []
    for n in range(max(0, math.ceil(x_lo + guard)), math.floor(x_hi - guard) + 1):
        lo = gfunction.eval_G(p, n - guard, dp)
        hi = gfunction.eval_G(p, n + guard, dp)
        conv = lo.converged and hi.converged
        lifted = [
            branch
            for branch in ("plus", "minus")
            if lo.branch(branch) * hi.branch(branch) >= 0.0
        ]
        if len(lifted) == 2:
            for _ in range(2):
                out.append(
                    SpectralPoint(
                        g=p.g,
                        x=float(n),
                        energy=n - dp.lambda_plus,
                        parity=None,
                        level_index=0,
                        classification=DEGENERATE,
                        converged=conv,
                    )
                )
        elif len(lifted) == 1:
            out.append(
                SpectralPoint(
                    g=p.g,
                    x=float(n),
                    energy=n - dp.lambda_plus,
                    parity=gfunction.BRANCH_PARITY[lifted[0]],
                    level_index=0,
                    classification=NONDEGENERATE,
                    converged=conv,
                )
            )
    return out


# ---------------------------------------------------------------------------
# sweeps


def _parity_str(parity: Parity | None) -> str:
    if parity is None:
        return "undefined"
    return "+1" if parity == Parity.EVEN else "-1"


def _spectrum_rows_at(cfg: SweepConfig, g: float) -> list[dict]:
    p = ModelParams(cfg.delta, float(g), cfg.r)
    dp = derive_params(p)
    rows = []
    for q in solve_spectrum(p, cfg.levels, trunc=cfg.trunc):
        rows.append(
            {
                "delta": cfg.delta,
                "r": cfg.r,
                "g": float(g),
                "x": q.x,
                "energy": q.energy,
                "energy_plus_lambda": q.energy + dp.lambda_plus,
                "parity": _parity_str(q.parity),
                "level": q.level_index,
                "class": q.classification,
                "status": "ok" if q.converged else "not-converged",
            }
        )
    return rows


def worker_count() -> int:
    env = os.environ.get("WORKERS", "").strip()
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise ConfigError(f"WORKERS must be an integer, got {env!r}") from exc
        if n < 1:
            raise ConfigError(f"WORKERS must be positive, got {n}")
        return n
    return os.cpu_count() or 1


def _ordered_map(fn, items):
    """Map preserving order, fanning out to WORKERS processes if > 1."""
    n = worker_count()
    items = list(items)
    if n <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with multiprocessing.Pool(min(n, len(items))) as pool:
        return pool.map(fn, items, chunksize=1)


class _SpectrumJob:
    def __init__(self, cfg: SweepConfig):
        self.cfg = cfg

    def __call__(self, g: float) -> list[dict]:
        return _spectrum_rows_at(self.cfg, g)


def run_spectrum_sweep(cfg: SweepConfig) -> list[dict]:
    """Spectrum table over the g grid, row order (g, level)."""
    chunks = _ordered_map(_SpectrumJob(cfg), cfg.g_grid())
    return [row for chunk in chunks for row in chunk]


def run_exceptional_scan(cfg: SweepConfig) -> list[dict]:
    """All exceptional points with pole index up to n_pole_cap.

    The isotropic point routes the degenerate branch to the r = 1
    crossing condition; a near-isotropic band is evaluated with the
    general formula but flagged low-confidence.
    """
    g_window = (max(cfg.g_min, 1e-6), cfg.g_max)
    points: list[exceptional.ExceptionalPoint] = []
    for n in range(cfg.n_pole_cap + 1):
        if abs(cfg.r - 1.0) < 1e-12:
            points.extend(
                exceptional.find_isotropic_judd_points(n, cfg.delta, g_window)
            )
        else:
            points.extend(
                exceptional.find_degenerate_points(
                    n, ModelParams(cfg.delta, 1.0, cfg.r), g_window
                )
            )
        if cfg.r >= R_MIN_GFUNCTION:
            points.extend(
                exceptional.find_nondegenerate_points(
                    n, ModelParams(cfg.delta, 1.0, cfg.r), g_window
                )
            )
    points.sort(key=lambda q: (q.n, q.g, q.kind))
    rows = []
    for q in points:
        rows.append(
            {
                "delta": cfg.delta,
                "r": cfg.r,
                "n": q.n,
                "g": q.g,
                "kind": q.kind,
                "parity": _parity_str(q.parity),
                "energy": q.energy,
                "is_gs_crossing": "true" if q.is_gs_crossing else "false",
                "status": "low-confidence" if q.low_confidence else "ok",
            }
        )
    return rows


class _PhaseJob:
    def __init__(self, delta: float, g_hi: float, n_pole_cap: int):
        self.delta = delta
        self.g_hi = g_hi
        self.n_pole_cap = n_pole_cap

    def __call__(self, r: float) -> list[dict]:
        return _phase_rows_at(self.delta, float(r), self.g_hi, self.n_pole_cap)


def _phase_rows_at(delta: float, r: float, g_hi: float, n_pole_cap: int):
    p_base = ModelParams(delta, 1.0, r)
    boundaries = []
    for n in range(n_pole_cap + 1):
        if r == 0.0:
            # rotating-wave limit: crossing of excitation sectors n/n+1
            zeros = [_jc_boundary(delta, n)]
            zeros = [z for z in zeros if z is not None and z <= g_hi]
        else:
            pts = exceptional.find_degenerate_points(n, p_base, (1e-6, g_hi))
            zeros = [pts[-1].g] if pts else []
        if zeros:
            boundaries.append((zeros[-1], n))
    boundaries.sort()
    rows = []
    parity = Parity.EVEN  # continuously connected to g = 0
    for g_c, n in boundaries:
        if r == 0.0:
            confirmed = True
        else:
            gap, conv = _ed_gap(ModelParams(delta, g_c, r))
            confirmed = conv and gap < exceptional.GAP_TOL
        below = parity
        above = below.flipped() if confirmed else below
        rows.append(
            {
                "delta": delta,
                "r": r,
                "n": n,
                "g_c": g_c,
                "gs_parity_below": _parity_str(below),
                "gs_parity_above": _parity_str(above),
                "status": "ok" if confirmed else "unconfirmed",
            }
        )
        parity = above
    return rows


def _jc_boundary(delta: float, n: int) -> float | None:
    """Coupling where rotating-wave sectors n and n+1 swap the ground role."""
    lo, hi = 1e-9, 1.0

    def gap(g: float) -> float:
        spec = ed.jc_spectrum(delta, g, k=2 * n + 4)
        e_n = min(e for e, nn in spec if nn == n)
        e_n1 = min(e for e, nn in spec if nn == n + 1)
        return e_n - e_n1

    if gap(lo) > 0:
        return None
    while gap(hi) < 0:
        hi *= 2.0
        if hi > 1e6:
            return None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _ed_gap(p: ModelParams):
    res = ed.diagonalize(p, k=2)
    return float(res.energies[1] - res.energies[0]), res.converged


def run_phase_diagram(
    delta: float,
    r_min: float,
    r_max: float,
    r_steps: int,
    g_hi: float = 6.0,
    n_pole_cap: int = 6,
) -> list[dict]:
    """Ground-state parity boundaries g_c^(n)(r) over an anisotropy grid.

    Grid points inside the isotropy guard band |r - 1| < 1e-3 are
    skipped: no ground-state crossing exists there.  Boundaries are the
    largest crossing coupling per pole line, each checked against the
    oracle's lowest gap; the ground parity starts even at g = 0 and
    flips at every confirmed boundary.
    """
    if not (0 <= r_min < r_max):
        raise ConfigError(f"need 0 <= r_min < r_max, got [{r_min}, {r_max}]")
    if r_steps < 2:
        raise ConfigError(f"r_steps must be at least 2, got {r_steps}")
    if delta <= 0:
        raise ConfigError(f"delta must be positive, got {delta}")
    grid = [
        float(r)
        for r in np.linspace(r_min, r_max, r_steps)
        if abs(r - 1.0) >= 1e-3
    ]
    chunks = _ordered_map(_PhaseJob(delta, g_hi, n_pole_cap), grid)
    return [row for chunk in chunks for row in chunk]


class _ValidateJob:
    def __init__(self, cfg: SweepConfig):
        self.cfg = cfg

    def __call__(self, g: float) -> dict:
        return _validate_at(self.cfg, float(g))


def _validate_at(cfg: SweepConfig, g: float) -> dict:
    p = ModelParams(cfg.delta, g, cfg.r)
    pts = solve_spectrum(p, cfg.levels, trunc=cfg.trunc)
    res = ed.diagonalize(p, n_trunc=cfg.trunc, k=cfg.levels)
    k = min(len(pts), cfg.levels)
    dev = max(
        (abs(pts[i].energy - float(res.energies[i])) for i in range(k)),
        default=math.inf,
    )
    if k < cfg.levels:
        dev = math.inf  # solver lost levels: that is a failure, not a pass
    parity_ok = all(
        pts[i].parity is None or pts[i].parity == res.parities[i] for i in range(k)
    )
    converged = res.converged and all(q.converged for q in pts[:k])
    return {
        "delta": cfg.delta,
        "r": cfg.r,
        "g": g,
        "levels": k,
        "max_abs_dev": dev,
        "parity_agree": "true" if parity_ok else "false",
        "status": "ok" if converged else "not-converged",
    }


def run_validate(cfg: SweepConfig) -> tuple[list[dict], dict]:
    """Compare solver energies against the oracle over the g grid.

    Returns (rows, summary); the summary carries the worst deviation
    and a pass flag at VALIDATE_TOL.
    """
    rows = _ordered_map(_ValidateJob(cfg), cfg.g_grid())
    worst = max(row["max_abs_dev"] for row in rows)
    ok = worst < VALIDATE_TOL and all(row["status"] == "ok" for row in rows)
    summary = {
        "worst_abs_dev": worst,
        "tolerance": VALIDATE_TOL,
        "points": len(rows),
        "passed": ok,
    }
    return rows, summary


class _EDJob:
    def __init__(self, cfg: SweepConfig):
        self.cfg = cfg

    def __call__(self, g: float) -> list[dict]:
        cfg = self.cfg
        res = ed.diagonalize(
            ModelParams(cfg.delta, float(g), cfg.r), n_trunc=cfg.trunc, k=cfg.levels
        )
        return [
            {
                "delta": cfg.delta,
                "r": cfg.r,
                "g": float(g),
                "level": i,
                "energy": float(e),
                "parity": _parity_str(par),
                "n_trunc": res.n_trunc,
                "status": "ok" if res.converged else "not-converged",
            }
            for i, (e, par) in enumerate(zip(res.energies, res.parities))
        ]


def run_ed_sweep(cfg: SweepConfig) -> list[dict]:
    chunks = _ordered_map(_EDJob(cfg), cfg.g_grid())
    return [row for chunk in chunks for row in chunk]


# ---------------------------------------------------------------------------
# emitters


def format_value(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_table(rows: list[dict], columns: tuple[str, ...], path: str, fmt: str):
    """Write rows to CSV (17 significant digits) or JSON, byte-stably."""
    if fmt == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(format_value(row[c]) for c in columns))
        body = "\n".join(lines) + "\n"
        with open(path, "w", newline="") as fh:
            fh.write(body)
    elif fmt == "json":
        with open(path, "w") as fh:
            json.dump(rows, fh, indent=1, sort_keys=True)
            fh.write("\n")
    else:
        raise ConfigError(f"unknown format {fmt!r}")
