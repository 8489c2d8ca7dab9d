# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled recurrence kernels.

Twin of ``_kernels_py`` with identical semantics and operation order;
see that module for the recurrence and scaling conventions.  Keep the
two in lockstep: the equivalence tests compare them bit for bit.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs, log

cnp.import_array()

RESCALE_THRESHOLD = 1e100

DEF TAIL_CAP = 32


def pair_recurrence(
    double delta,
    double beta2,
    double lam_p,
    double lam_m,
    double x,
    int n_max,
    int m0=0,
    double f_seed=1.0,
    double e_seed=0.0,
    bint e_seed_given=False,
    double rescale_threshold=1e100,
):
    """Scaled coefficient arrays (et, ft, log_scale) up to index n_max."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] et_arr = np.zeros(n_max + 1)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ft_arr = np.zeros(n_max + 1)
    cdef double[:] et = et_arr
    cdef double[:] ft = ft_arr
    cdef double log_scale = 0.0

    cdef double half_d = 0.5 * delta
    cdef double ce = beta2 - lam_p
    cdef double cf_diag = 2.0 * beta2 + 2.0 * lam_p - x
    cdef double cf_2 = beta2 + lam_p

    ft[m0] = f_seed
    if e_seed_given:
        et[m0] = e_seed
    else:
        et[m0] = (half_d - lam_m) * f_seed / (m0 - x)

    cdef int m, k
    cdef double e1, f1, e2, f2, em, fm, mag, inv
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
        mag = max(fabs(em), fabs(fm))
        if mag > rescale_threshold:
            inv = 1.0 / mag
            for k in range(m0, m + 1):
                et[k] *= inv
                ft[k] *= inv
            log_scale += log(mag)

    return et_arr, ft_arr, log_scale


def g_series(
    double delta,
    double beta2,
    double lam_p,
    double lam_m,
    double x,
    int m0=0,
    double f_seed=1.0,
    double e_seed=0.0,
    bint e_seed_given=False,
    int n_start=64,
    int n_cap=2048,
    double tol=1e-12,
    int tail_len=5,
    double rescale_threshold=1e100,
):
    """Adaptive partial sums of both G-functions at spectral parameter x."""
    if tail_len > TAIL_CAP:
        raise ValueError(f"tail_len must be <= {TAIL_CAP}")
    cdef double half_d = 0.5 * delta
    cdef double ce = beta2 - lam_p
    cdef double cf_diag = 2.0 * beta2 + 2.0 * lam_p - x
    cdef double cf_2 = beta2 + lam_p

    cdef double f1 = f_seed
    cdef double e1
    if e_seed_given:
        e1 = e_seed
    else:
        e1 = (half_d - lam_m) * f_seed / (m0 - x)
    cdef double e2 = 0.0
    cdef double f2 = 0.0

    cdef double sum_f = f1
    cdef double sum_e = e1
    cdef double run_max = max(fabs(sum_f + sum_e), fabs(sum_f - sum_e))
    if run_max == 0.0:
        run_max = 1.0
    cdef double log_scale = 0.0

    cdef double[TAIL_CAP] tail
    cdef int k
    for k in range(tail_len):
        tail[k] = INFINITY
    tail[0] = max(fabs(f1 + e1), fabs(f1 - e1))
    cdef long tail_i = 1

    cdef long checkpoint = n_start
    cdef long n = m0
    cdef bint converged = False
    cdef double em, fm, t_plus, t_minus, m_plus, m_minus, mag, inv, limit, worst
    while True:
        n += 1
        fm = (
            -(half_d + lam_m) * e1
            + lam_m * e2
            + (n - 1 + cf_diag) * f1
            - cf_2 * f2
        ) / (2.0 * n)
        em = (ce * e1 + (half_d - lam_m) * fm + lam_m * f1) / (n - x)
        e2 = e1
        f2 = f1
        e1 = em
        f1 = fm
        sum_f += fm
        sum_e += em

        t_plus = fabs(fm + em)
        t_minus = fabs(fm - em)
        tail[tail_i % tail_len] = t_plus if t_plus > t_minus else t_minus
        tail_i += 1

        m_plus = fabs(sum_f + sum_e)
        m_minus = fabs(sum_f - sum_e)
        if m_plus > run_max:
            run_max = m_plus
        if m_minus > run_max:
            run_max = m_minus

        mag = max(fabs(em), fabs(fm))
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
                if tail[k] != INFINITY:
                    tail[k] *= inv
            log_scale += log(mag)

        if n - m0 + 1 >= checkpoint:
            limit = tol * run_max
            worst = tail[0]
            for k in range(1, tail_len):
                if tail[k] > worst:
                    worst = tail[k]
            if worst < limit:
                converged = True
                break
            if checkpoint >= n_cap:
                break
            checkpoint *= 2

    return sum_f + sum_e, sum_f - sum_e, log_scale, n - m0 + 1, converged
