"""Exceptional spectrum: level crossings and lifted poles on x = n.

An eigenvalue can sit exactly on a pole line in two ways.

* Degenerate: the pole is lifted in both G-functions and two states of
  opposite parity cross.  The couplings where this happens on line n
  are the zeros of

      F_n(g) = sum_{i=0}^n Gamma_i(n) f_i,

      Gamma_i(n) = ((lambda_plus/beta - beta)^(n-i) / (n-i)!)
                   * [ ((n-i)/(lambda_plus - beta^2) - 1) lambda_minus
                       + delta/2 ]

  with the f_i from the regular seed at x = n.  Closed forms exist for
  n = 0 (a square root, r < 1 only) and n = 1 (a cubic in g^2).

* Non-degenerate: the pole is lifted in exactly one G-function and the
  state keeps a parity.  These are zeros in g of the special functions

      G_m^pm = +-beta^m + sum_{n>m} (f_n +- e_n) beta^n

  built on the pole-line seed e_m = 1, f_m = 0.  A zero of G_m^minus
  marks an even state, a zero of G_m^plus an odd one (same vacuum-
  projection argument as for the regular spectrum).

The isotropic point r = 1 makes Gamma_i singular; degeneracies there
are the zeros of f_m(x = m) instead and never involve the ground state.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import ed, kernels
from .errors import IsotropicSingular, NotDegenerate
from .gfunction import GValue
from .params import (
    DerivedParams,
    ModelParams,
    Parity,
    derive_params,
)
from .recurrence import quasi_exact_coeffs, raw_coeffs_at_pole

#: pole_gap below this is treated as isotropic (Gamma formula singular)
ISO_GAP_TOL = 1e-14
#: |r - 1| below this is evaluated but flagged low-confidence
ISO_BAND = 1e-4
#: g-resolution of located exceptional couplings
G_TOL = 1e-11
#: scan density for zero searches in g
SCAN_STEPS = 400
#: ED gap that counts as a confirmed degeneracy
GAP_TOL = 1e-6
#: both special functions below this (relative) means actually degenerate
BOTH_VANISH_TOL = 1e-8


@dataclass(frozen=True)
class ExceptionalPoint:
    n: int
    g: float
    kind: str  # "degenerate" | "nondegenerate"
    parity: Parity | None
    energy: float
    is_gs_crossing: bool = False
    low_confidence: bool = False


def gamma_coeff(n: int, i: int, dp: DerivedParams, delta: float) -> float:
    """Gamma_i(n); requires r != 1 so that pole_gap > 0."""
    if not 0 <= i <= n:
        raise ValueError(f"need 0 <= i <= n, got i={i}, n={n}")
    if dp.pole_gap < ISO_GAP_TOL:
        raise IsotropicSingular(
            "pole_gap vanishes at r = 1; use isotropic_judd_condition"
        )
    k = n - i
    t = dp.pole_gap / dp.beta
    return (t**k / math.factorial(k)) * (
        (k / dp.pole_gap - 1.0) * dp.lambda_minus + 0.5 * delta
    )


def eval_F(n: int, p: ModelParams) -> float:
    """Degeneracy indicator of pole line n; its zeros in g are crossings."""
    dp = derive_params(p)
    if dp.pole_gap < ISO_GAP_TOL:
        raise IsotropicSingular(
            "F_n is singular at r = 1; use isotropic_judd_condition"
        )
    _, f = raw_coeffs_at_pole(dp, p.delta, n)
    return sum(gamma_coeff(n, i, dp, p.delta) * f[i] for i in range(n + 1))


def closed_form_g0(delta: float, r: float) -> float | None:
    """Unique crossing coupling on pole line 0: sqrt(delta / (1 - r^2)).

    Real only for r < 1; None otherwise (the lowest pair never crosses
    the first pole line when the counter-rotating coupling dominates).
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if r >= 1.0:
        return None
    return math.sqrt(delta / (1.0 - r * r))


def solve_pole1_cubic(delta: float, r: float) -> list[float]:
    """All crossing couplings on pole line 1, from the cleared cubic in y = g^2.

    Clearing the resonant denominator of the line-1 condition gives

        (c2^3/4) y^3 + (-2 c1 c2 - delta c2^2/4) y^2
        + (2 c1 delta + 3 c2 - delta^2 c2 / 4) y + delta (delta^2 - 4)/4

    with c1 = 1 + r^2, c2 = 1 - r^2.  Roots that sit on the cleared
    factor delta - y c2 = 0 would be spurious and are discarded.
    """
    c1 = 1.0 + r * r
    c2 = 1.0 - r * r
    coeffs = [
        c2**3 / 4.0,
        -2.0 * c1 * c2 - delta * c2 * c2 / 4.0,
        2.0 * c1 * delta + 3.0 * c2 - delta * delta * c2 / 4.0,
        delta * (delta * delta - 4.0) / 4.0,
    ]
    # drop leading zeros (r = 1 degenerates to lower order)
    while len(coeffs) > 1 and coeffs[0] == 0.0:
        coeffs = coeffs[1:]
    roots = np.roots(coeffs)
    out = []
    for z in roots:
        if abs(z.imag) > 1e-9 * max(1.0, abs(z.real)):
            continue
        y = float(z.real)
        if y <= 0.0:
            continue
        if abs(delta - y * c2) < 1e-12 * max(1.0, delta):
            continue  # cleared-factor artifact
        y = _polish_poly_root(coeffs, y)
        out.append(math.sqrt(y))
    return sorted(out)


def _polish_poly_root(coeffs, y: float) -> float:
    for _ in range(3):
        val = dval = 0.0
        for c in coeffs:
            dval = dval * y + val
            val = val * y + c
        if dval == 0.0:
            break
        step = val / dval
        y -= step
        if abs(step) < 1e-15 * max(1.0, abs(y)):
            break
    return y


def _scan_sign_zeros(fn, g_lo: float, g_hi: float, steps: int = SCAN_STEPS):
    """Sign-change zeros of fn on (g_lo, g_hi].

    Bisection runs until the bracket stops shrinking in floating point,
    comfortably below the G_TOL resolution contract.
    """
    gs = np.linspace(g_lo, g_hi, steps + 1)
    vals = [fn(float(g)) for g in gs]
    roots = []
    for i in range(steps):
        va, vb = vals[i], vals[i + 1]
        if va == 0.0:
            roots.append(float(gs[i]))
            continue
        if math.copysign(1.0, va) == math.copysign(1.0, vb):
            continue
        lo, hi, f_lo = float(gs[i]), float(gs[i + 1]), va
        while True:
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            fm = fn(mid)
            if fm == 0.0:
                lo = hi = mid
                break
            if math.copysign(1.0, fm) == math.copysign(1.0, f_lo):
                lo, f_lo = mid, fm
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    return roots


def _ed_gs_gap(p: ModelParams):
    res = ed.diagonalize(p, k=2)
    return float(res.energies[1] - res.energies[0]), res.converged


def find_degenerate_points(
    n: int, p_base: ModelParams, g_window: tuple[float, float]
) -> list[ExceptionalPoint]:
    """Zeros of g -> F_n within the window, as degenerate crossing points.

    The largest zero is additionally checked against the oracle: it is
    flagged a ground-state crossing when the two lowest levels touch
    (gap below GAP_TOL) there.
    """
    g_lo, g_hi = g_window
    g_lo = max(g_lo, g_hi / SCAN_STEPS * 1e-3, 1e-6)
    low_conf = abs(p_base.r - 1.0) < ISO_BAND

    zeros = _scan_sign_zeros(lambda g: eval_F(n, p_base.with_g(g)), g_lo, g_hi)
    out = []
    for k, g in enumerate(zeros):
        dp = derive_params(p_base.with_g(g))
        is_gs = False
        if k == len(zeros) - 1:
            gap, _ = _ed_gs_gap(p_base.with_g(g))
            is_gs = gap < GAP_TOL
        out.append(
            ExceptionalPoint(
                n=n,
                g=g,
                kind="degenerate",
                parity=None,
                energy=n - dp.lambda_plus,
                is_gs_crossing=is_gs,
                low_confidence=low_conf,
            )
        )
    return out


def eval_special_G(m: int, p: ModelParams, dp: DerivedParams | None = None):
    """(G_m^plus, G_m^minus) up to a shared positive scale.

    Same adaptive truncation as the regular series; the common factor
    beta^m of the pole-line seed is folded into log_scale.
    """
    if dp is None:
        dp = derive_params(p)
    gp, gm, log_scale, n_used, converged = kernels.g_series(
        p.delta,
        dp.beta * dp.beta,
        dp.lambda_plus,
        dp.lambda_minus,
        float(m),
        m0=m,
        f_seed=0.0,
        e_seed=1.0,
        e_seed_given=True,
    )
    return GValue(gp, gm, log_scale + m * math.log(dp.beta), n_used, converged)


def find_nondegenerate_points(
    m: int, p_base: ModelParams, g_window: tuple[float, float]
) -> list[ExceptionalPoint]:
    """Zeros in g of G_m^plus and G_m^minus, each a lifted-pole state.

    A located coupling where the partner function also (relatively)
    vanishes is reclassified as degenerate and reported with a warning.
    """
    g_lo, g_hi = g_window
    g_lo = max(g_lo, 1e-6)
    low_conf = abs(p_base.r - 1.0) < ISO_BAND
    out = []
    for branch, parity in (("plus", Parity.ODD), ("minus", Parity.EVEN)):
        other = "minus" if branch == "plus" else "plus"

        def f(g: float) -> float:
            return eval_special_G(m, p_base.with_g(g)).branch(branch)

        for g in _scan_sign_zeros(f, g_lo, g_hi):
            val = eval_special_G(m, p_base.with_g(g))
            scale = max(
                abs(eval_special_G(m, p_base.with_g(gg)).branch(other))
                for gg in (max(g_lo, g - g_hi / SCAN_STEPS), min(g_hi, g + g_hi / SCAN_STEPS))
            )
            dp = derive_params(p_base.with_g(g))
            if scale > 0 and abs(val.branch(other)) < BOTH_VANISH_TOL * scale:
                warnings.warn(
                    f"both special G-functions vanish at m={m}, g={g:.9f}; "
                    "reclassifying as degenerate",
                    stacklevel=2,
                )
                out.append(
                    ExceptionalPoint(
                        n=m,
                        g=g,
                        kind="degenerate",
                        parity=None,
                        energy=m - dp.lambda_plus,
                        low_confidence=low_conf,
                    )
                )
                continue
            out.append(
                ExceptionalPoint(
                    n=m,
                    g=g,
                    kind="nondegenerate",
                    parity=parity,
                    energy=m - dp.lambda_plus,
                    low_confidence=low_conf,
                )
            )
    out.sort(key=lambda q: q.g)
    return out


def isotropic_judd_condition(m: int, delta: float, g: float) -> float:
    """f_m at x = m for r = 1; zeros in g are the isotropic crossings.

    f_0 = 1 never vanishes, so the lowest pair never crosses line 0.
    """
    p = ModelParams(delta, g, 1.0)
    _, f = raw_coeffs_at_pole(derive_params(p), delta, m)
    return f[m]


def find_isotropic_judd_points(
    m: int, delta: float, g_window: tuple[float, float]
) -> list[ExceptionalPoint]:
    """Degenerate crossings on pole line m at r = 1."""
    g_lo, g_hi = g_window
    g_lo = max(g_lo, 1e-6)
    if m == 0:
        return []  # f_0 = 1 identically
    zeros = _scan_sign_zeros(
        lambda g: isotropic_judd_condition(m, delta, g), g_lo, g_hi
    )
    return [
        ExceptionalPoint(
            n=m,
            g=g,
            kind="degenerate",
            parity=None,
            energy=m - g * g,
        )
        for g in zeros
    ]


def build_quasi_exact_pair(m: int, p: ModelParams, n_trunc: int | None = None):
    """The two degenerate eigenstates on pole line m as finite expansions.

    Returns (plus_state, minus_state): the finite polynomial in the
    +beta displaced basis and its parity image in the -beta one.  Their
    Fock-space images are checked for genuine linear independence.
    """
    dp = derive_params(p)
    seq = quasi_exact_coeffs(dp, p.delta, m)  # raises NotDegenerate off-crossing
    beta_pow = np.array([dp.beta**n for n in range(m + 1)])
    e = np.asarray(seq.e[: m + 1]) / beta_pow
    f = np.asarray(seq.f[: m + 1]) / beta_pow
    root_fact = np.array([math.sqrt(math.factorial(n)) for n in range(m + 1)])
    signs = np.array([(-1.0) ** n for n in range(m + 1)])

    plus_state = ed.StateExpansion(
        displacement_sign=+1, upper=root_fact * e, lower=root_fact * f, params=p
    )
    minus_state = ed.StateExpansion(
        displacement_sign=-1,
        upper=signs * root_fact * f,
        lower=signs * root_fact * e,
        params=p,
    )

    if n_trunc is None:
        n_trunc = max(ed.default_trunc(p), m + int(10 * dp.beta * dp.beta) + 40)
    va = ed.ecs_to_fock(plus_state, n_trunc)
    vb = ed.ecs_to_fock(minus_state, n_trunc)
    pair = np.column_stack([va / np.linalg.norm(va), vb / np.linalg.norm(vb)])
    smin = np.linalg.svd(pair, compute_uv=False)[-1]
    if smin < 1e-8:
        raise NotDegenerate(
            f"constructed pair is linearly dependent (s_min={smin:.3e}); "
            "the state is a parity eigenstate, not a crossing"
        )
    return plus_state, minus_state
