"""Coefficient sequences of the displaced-basis expansion.

Three seeds are supported:

* regular        -- f_0 = 1 at generic x; everything else follows.
* exceptional(m) -- e_m = 1, f_m = 0 at x = m; the lower coefficients
                    vanish and the tail feeds the special G-functions.
* quasi_exact(m) -- at a degeneracy on pole line m the otherwise
                    undetermined e_m is closed so that the whole tail
                    beyond m vanishes and the state is a finite
                    polynomial in the displaced number states.

Sequences are stored pre-multiplied by beta^n (a shared positive
rescale recorded in ``log_scale``), which is the form the G-function
partial sums consume directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NotDegenerate, PoleProximity, Singular
from .params import DerivedParams

POLE_TOLERANCE = 1e-9
BETA_MIN = 1e-12
QUASI_EXACT_TAIL_TOL = 1e-10


@dataclass(frozen=True)
class CoeffSeq:
    """Scaled coefficient pair (et_n, ft_n) = (e_n, f_n) * beta^n / scale.

    ``log_scale`` is the log of the positive factor divided out; the true
    scaled coefficients are e * exp(log_scale).  ``kind`` is one of
    "regular", "exceptional", "quasi_exact"; ``m`` is the seed pole index
    for the latter two and None for the regular seed.
    """

    e: np.ndarray
    f: np.ndarray
    log_scale: float
    kind: str
    x: float
    m: int | None = None


def _check_beta(dp: DerivedParams) -> None:
    if dp.beta < BETA_MIN:
        raise Singular(f"beta={dp.beta} too small for the displaced-basis recurrence")


def regular_coeffs(
    dp: DerivedParams, delta: float, x: float, n_max: int
) -> CoeffSeq:
    """Scaled coefficients for the regular seed f_0 = 1 up to index n_max.

    x must stay clear of the pole lines: every integer in [0, n_max]
    is excluded within POLE_TOLERANCE.
    """
    _check_beta(dp)
    nearest = round(x)
    if 0 <= nearest <= n_max and abs(x - nearest) < POLE_TOLERANCE:
        raise PoleProximity(f"x={x} within {POLE_TOLERANCE} of pole line n={nearest}")
    et, ft, log_scale = kernels.pair_recurrence(
        delta, dp.beta * dp.beta, dp.lambda_plus, dp.lambda_minus, x, n_max
    )
    return CoeffSeq(
        e=np.asarray(et), f=np.asarray(ft), log_scale=log_scale, kind="regular", x=x
    )


def exceptional_seed_coeffs(
    dp: DerivedParams, delta: float, m: int, n_max: int
) -> CoeffSeq:
    """Scaled coefficients for the pole-line seed e_m = 1, f_m = 0 at x = m.

    The stored entry at m is 1; the seed's true scaled value beta^m is
    carried in log_scale, so downstream sums are up to a positive factor.
    """
    if m < 0:
        raise ValueError(f"pole index must be nonnegative, got {m}")
    if n_max <= m:
        raise ValueError(f"n_max={n_max} must exceed the seed index m={m}")
    _check_beta(dp)
    et, ft, log_scale = kernels.pair_recurrence(
        delta,
        dp.beta * dp.beta,
        dp.lambda_plus,
        dp.lambda_minus,
        float(m),
        n_max,
        m0=m,
        f_seed=0.0,
        e_seed=1.0,
        e_seed_given=True,
    )
    return CoeffSeq(
        e=np.asarray(et),
        f=np.asarray(ft),
        log_scale=log_scale + m * math.log(dp.beta),
        kind="exceptional",
        x=float(m),
        m=m,
    )


def raw_coeffs_at_pole(dp: DerivedParams, delta: float, m: int):
    """Unscaled regular-seed coefficients evaluated at x = m.

    Returns (e, f) with e[0..m-1] and f[0..m]; e_m itself is the 0/0
    entry and is never formed.  Safe without rescaling because the pole
    index is small (degeneracy searches cap at m <= 12).
    """
    _check_beta(dp)
    beta = dp.beta
    lam_p, lam_m = dp.lambda_plus, dp.lambda_minus
    half_d = 0.5 * delta
    e = [0.0] * (m + 1)
    f = [0.0] * (m + 1)
    f[0] = 1.0
    if m > 0:
        e[0] = (half_d - lam_m) * f[0] / (0.0 - m)
    for k in range(1, m + 1):
        e1 = e[k - 1]
        f1 = f[k - 1]
        e2 = e[k - 2] if k >= 2 else 0.0
        f2 = f[k - 2] if k >= 2 else 0.0
        f[k] = (
            -(half_d + lam_m) * e1
            + (lam_m / beta) * e2
            + (k - 1 + 2 * beta * beta + 2 * lam_p - m) * f1
            - (beta + lam_p / beta) * f2
        ) / (2.0 * beta * k)
        if k < m:
            e[k] = (
                (beta - lam_p / beta) * e1
                + (half_d - lam_m) * f[k]
                + (lam_m / beta) * f1
            ) / (k - m)
    return e[:m], f


def quasi_exact_coeffs(dp: DerivedParams, delta: float, m: int) -> CoeffSeq:
    """Finite coefficient table of the degenerate eigenstate on pole line m.

    The caller is responsible for sitting on a degeneracy; this is
    verified by recomputing the first two post-seed coefficient pairs,
    which all vanish exactly when the lifted-pole condition holds.  The
    returned arrays have length m+3 so the vanishing tail is visible.
    """
    _check_beta(dp)
    beta = dp.beta
    lam_p, lam_m = dp.lambda_plus, dp.lambda_minus
    half_d = 0.5 * delta
    closure_den = half_d + lam_m
    if abs(closure_den) < 1e-12:
        raise Singular(f"closure denominator delta/2 + lambda_minus = {closure_den}")

    e, f = raw_coeffs_at_pole(dp, delta, m)
    e_m1 = e[m - 1] if m >= 1 else 0.0
    f_m1 = f[m - 1] if m >= 1 else 0.0
    e_m = (
        (lam_m / beta) * e_m1
        + (2 * beta * beta + 2 * lam_p) * f[m]
        - (beta + lam_p / beta) * f_m1
    ) / closure_den

    e_full = e + [e_m]
    f_full = list(f)
    # diagnostic tail: recompute two post-seed pairs from the recurrence
    for k in (m + 1, m + 2):
        e1 = e_full[k - 1]
        f1 = f_full[k - 1]
        e2 = e_full[k - 2] if k >= 2 else 0.0
        f2 = f_full[k - 2] if k >= 2 else 0.0
        fk = (
            -(half_d + lam_m) * e1
            + (lam_m / beta) * e2
            + (k - 1 + 2 * beta * beta + 2 * lam_p - m) * f1
            - (beta + lam_p / beta) * f2
        ) / (2.0 * beta * k)
        ek = (
            (beta - lam_p / beta) * e1 + (half_d - lam_m) * fk + (lam_m / beta) * f1
        ) / (k - m)
        f_full.append(fk)
        e_full.append(ek)

    scale = np.array([beta**n for n in range(m + 3)])
    et = np.asarray(e_full) * scale
    ft = np.asarray(f_full) * scale
    ref = max(np.max(np.abs(et[: m + 1])), np.max(np.abs(ft[: m + 1])))
    tail = max(np.max(np.abs(et[m + 1 :])), np.max(np.abs(ft[m + 1 :])))
    if tail > QUASI_EXACT_TAIL_TOL * ref:
        raise NotDegenerate(
            f"post-seed coefficients do not vanish (relative tail {tail / ref:.3e}); "
            f"parameters are not on a degeneracy of pole line m={m}"
        )
    return CoeffSeq(e=et, f=ft, log_scale=0.0, kind="quasi_exact", x=float(m), m=m)
