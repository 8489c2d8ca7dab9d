"""Pure-Python recurrence kernels.

This is the fallback twin of the compiled module ``_kernels_cy``; both
expose the same two functions with identical semantics and operation
order, so results agree bit-for-bit.

The coefficient pair (e_n, f_n) of the displaced-basis expansion is
carried in the scaled form et_n = e_n beta^n, ft_n = f_n beta^n, in
which the recurrence has no 1/beta terms:

    et_m = [ (beta^2 - lam_p) et_{m-1} + (delta/2 - lam_m) ft_m
             + lam_m ft_{m-1} ] / (m - x)

    ft_m = [ -(delta/2 + lam_m) et_{m-1} + lam_m et_{m-2}
             + (m - 1 + 2 beta^2 + 2 lam_p - x) ft_{m-1}
             - (beta^2 + lam_p) ft_{m-2} ] / (2 m)

and the G-function partial sums are plain additions:
G_pm(x) = sum_n (ft_n +- et_n).  A shared positive rescale keeps the
magnitudes bounded; it moves every zero of G_pm nowhere.
"""

from __future__ import annotations

import math

RESCALE_THRESHOLD = 1e100


def pair_recurrence(
    delta: float,
    beta2: float,
    lam_p: float,
    lam_m: float,
    x: float,
    n_max: int,
    m0: int = 0,
    f_seed: float = 1.0,
    e_seed: float = 0.0,
    e_seed_given: bool = False,
    rescale_threshold: float = RESCALE_THRESHOLD,
):
    """Scaled coefficient arrays (et, ft, log_scale) up to index n_max.

    Entries below the seed index m0 are zero.  When ``e_seed_given`` is
    false the first e-coefficient is produced by the recurrence itself
    (regular seed); otherwise both seed values are taken as given
    (exceptional seed at a pole, where the e-recurrence is 0/0).
    """
    et = [0.0] * (n_max + 1)
    ft = [0.0] * (n_max + 1)
    log_scale = 0.0

    half_d = 0.5 * delta
    ce = beta2 - lam_p
    cf_diag = 2.0 * beta2 + 2.0 * lam_p - x
    cf_2 = beta2 + lam_p

    ft[m0] = f_seed
    if e_seed_given:
        et[m0] = e_seed
    else:
        et[m0] = (half_d - lam_m) * f_seed / (m0 - x)

    for m in range(m0 + 1, n_max + 1):
        e1 = et[m - 1]
        f1 = ft[m - 1]
        e2 = et[m - 2] if m - 2 >= m0 else 0.0
        f2 = ft[m - 2] if m - 2 >= m0 else 0.0
        fm = (
            -(half_d + lam_m) * e1
            + lam_m * e2
            + (m - 1 + cf_diag) * f1
            - cf_2 * f2
        ) / (2.0 * m)
        em = (ce * e1 + (half_d - lam_m) * fm + lam_m * f1) / (m - x)
        ft[m] = fm
        et[m] = em
        mag = max(abs(em), abs(fm))
        if mag > rescale_threshold:
            inv = 1.0 / mag
            for k in range(m0, m + 1):
                et[k] *= inv
                ft[k] *= inv
            log_scale += math.log(mag)

    return et, ft, log_scale


def g_series(
    delta: float,
    beta2: float,
    lam_p: float,
    lam_m: float,
    x: float,
    m0: int = 0,
    f_seed: float = 1.0,
    e_seed: float = 0.0,
    e_seed_given: bool = False,
    n_start: int = 64,
    n_cap: int = 2048,
    tol: float = 1e-12,
    tail_len: int = 5,
    rescale_threshold: float = RESCALE_THRESHOLD,
):
    """Adaptive partial sums of both G-functions at spectral parameter x.

    Returns (g_plus, g_minus, log_scale, n_used, converged).  The series
    is extended in doubling blocks starting at n_start terms; it counts
    as converged once each of the last ``tail_len`` terms contributed
    less than ``tol`` relative to the largest partial-sum magnitude seen
    so far.  Values are up to the common positive scale exp(log_scale).
    """
    half_d = 0.5 * delta
    ce = beta2 - lam_p
    cf_diag = 2.0 * beta2 + 2.0 * lam_p - x
    cf_2 = beta2 + lam_p

    # seed term
    f1 = f_seed
    if e_seed_given:
        e1 = e_seed
    else:
        e1 = (half_d - lam_m) * f_seed / (m0 - x)
    e2 = 0.0
    f2 = 0.0

    sum_f = f1
    sum_e = e1
    run_max = max(abs(sum_f + sum_e), abs(sum_f - sum_e))
    if run_max == 0.0:
        run_max = 1.0
    log_scale = 0.0

    tail = [math.inf] * tail_len
    tail[0] = max(abs(f1 + e1), abs(f1 - e1))
    tail_i = 1

    checkpoint = n_start
    n = m0
    converged = False
    while True:
        n += 1
        fm = (
            -(half_d + lam_m) * e1
            + lam_m * e2
            + (n - 1 + cf_diag) * f1
            - cf_2 * f2
        ) / (2.0 * n)
        em = (ce * e1 + (half_d - lam_m) * fm + lam_m * f1) / (n - x)
        e2, f2 = e1, f1
        e1, f1 = em, fm
        sum_f += fm
        sum_e += em

        t_plus = abs(fm + em)
        t_minus = abs(fm - em)
        tail[tail_i % tail_len] = t_plus if t_plus > t_minus else t_minus
        tail_i += 1

        m_plus = abs(sum_f + sum_e)
        m_minus = abs(sum_f - sum_e)
        if m_plus > run_max:
            run_max = m_plus
        if m_minus > run_max:
            run_max = m_minus

        mag = max(abs(em), abs(fm))
        if mag > rescale_threshold:
            inv = 1.0 / mag
            e1 *= inv
            f1 *= inv
            e2 *= inv
            f2 *= inv
            sum_f *= inv
            sum_e *= inv
            run_max *= inv
            for k in range(tail_len):
                if tail[k] != math.inf:
                    tail[k] *= inv
            log_scale += math.log(mag)

        if n - m0 + 1 >= checkpoint:
            limit = tol * run_max
            if max(tail) < limit:
                converged = True
                break
            if checkpoint >= n_cap:
                break
            checkpoint *= 2

    return sum_f + sum_e, sum_f - sum_e, log_scale, n - m0 + 1, converged
