import math

import numpy as np
import pytest

from anirabi import ModelParams, derive_params
from anirabi.errors import NotDegenerate, PoleProximity, Singular
from anirabi.kernels import pair_recurrence
from anirabi.recurrence import (
    exceptional_seed_coeffs,
    quasi_exact_coeffs,
    raw_coeffs_at_pole,
    regular_coeffs,
)


def _resubstitution_residual(delta, dp, x, et, ft, m0=0):
    """Worst relative violation of the scaled pair recurrence."""
    beta2 = dp.beta**2
    lam_p, lam_m = dp.lambda_plus, dp.lambda_minus
    half_d = 0.5 * delta
    worst = 0.0
    for m in range(m0 + 1, len(ft)):
        e1, f1 = et[m - 1], ft[m - 1]
        e2 = et[m - 2] if m - 2 >= m0 else 0.0
        f2 = ft[m - 2] if m - 2 >= m0 else 0.0
        f_rhs = (
            -(half_d + lam_m) * e1
            + lam_m * e2
            + (m - 1 + 2 * beta2 + 2 * lam_p - x) * f1
            - (beta2 + lam_p) * f2
        ) / (2.0 * m)
        e_rhs = ((beta2 - lam_p) * e1 + (half_d - lam_m) * f_rhs + lam_m * f1) / (
            m - x
        )
        scale = max(abs(ft[m]), abs(et[m]), abs(f_rhs), abs(e_rhs), 1e-300)
        worst = max(worst, abs(ft[m] - f_rhs) / scale, abs(et[m] - e_rhs) / scale)
    return worst


def test_regular_seed_spot_values():
    # delta=1, g=1, r=1 has beta=1, so scaled and raw coefficients agree
    p = ModelParams(1.0, 1.0, 1.0)
    cs = regular_coeffs(derive_params(p), p.delta, 0.5, 8)
    assert cs.f[0] == 1.0
    assert cs.e[0] == pytest.approx(-1.0, rel=1e-15)
    assert cs.f[1] == pytest.approx(2.0, rel=1e-15)
    assert cs.log_scale == 0.0
    assert cs.kind == "regular"


def test_regular_seed_rejects_pole_and_zero_beta():
    p = ModelParams(1.0, 1.0, 0.5)
    dp = derive_params(p)
    with pytest.raises(PoleProximity):
        regular_coeffs(dp, p.delta, 3.0 + 1e-10, 8)
    with pytest.raises(PoleProximity):
        regular_coeffs(dp, p.delta, 0.0, 8)
    # negative x is not a pole
    regular_coeffs(dp, p.delta, -1.0, 8)
    # x beyond n_max is not a pole of the computed range
    regular_coeffs(dp, p.delta, 11.0, 8)
    with pytest.raises(Singular):
        regular_coeffs(derive_params(ModelParams(1.0, 0.0, 1.0)), 1.0, 0.5, 8)


def test_resubstitution_random_draws():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        delta = rng.uniform(0.1, 2.5)
        g = rng.uniform(0.05, 2.0)
        r = rng.uniform(0.05, 3.0)
        x = rng.uniform(-3.0, 8.0)
        if min(abs(x - n) for n in range(0, 70)) < 1e-3:
            continue
        dp = derive_params(ModelParams(delta, g, r))
        cs = regular_coeffs(dp, delta, x, 64)
        assert _resubstitution_residual(delta, dp, x, cs.e, cs.f) < 1e-12


def test_resubstitution_exceptional_seed():
    rng = np.random.default_rng(3)
    for _ in range(50):
        delta = rng.uniform(0.1, 2.5)
        g = rng.uniform(0.1, 2.0)
        r = rng.uniform(0.05, 3.0)
        m = int(rng.integers(0, 4))
        dp = derive_params(ModelParams(delta, g, r))
        cs = exceptional_seed_coeffs(dp, delta, m, 64)
        assert cs.e[m] == 1.0 and cs.f[m] == 0.0
        assert not cs.e[:m].any() and not cs.f[:m].any()
        assert (
            _resubstitution_residual(delta, dp, float(m), cs.e, cs.f, m0=m) < 1e-12
        )


def test_exceptional_seed_hand_value():
    # m=0 seed with delta=1, g=1, r=2: lambda_minus = -1.5, so the raw
    # f_1 = (-delta/2 - lambda_minus) / (2 beta) = 1 / (2 sqrt(2)); the
    # stored entry carries an extra beta, giving exactly 1/2.
    p = ModelParams(1.0, 1.0, 2.0)
    dp = derive_params(p)
    cs = exceptional_seed_coeffs(dp, p.delta, 0, 8)
    assert cs.f[1] == pytest.approx(0.5, rel=1e-14)
    f1_raw = cs.f[1] / dp.beta
    assert f1_raw == pytest.approx(1.0 / (2.0 * math.sqrt(2.0)), rel=1e-14)
    assert cs.log_scale == 0.0  # m = 0 folds in beta^0


def test_exceptional_seed_validation():
    dp = derive_params(ModelParams(1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        exceptional_seed_coeffs(dp, 1.0, -1, 8)
    with pytest.raises(ValueError):
        exceptional_seed_coeffs(dp, 1.0, 5, 5)


def test_rescale_neutrality():
    # deep-coupling run that triggers rescaling at 1e50 but not 1e100
    p = ModelParams(0.5, 6.0, 3.0)
    dp = derive_params(p)
    args = (p.delta, dp.beta**2, dp.lambda_plus, dp.lambda_minus, 7.7, 400)
    e_hi, f_hi, ls_hi = pair_recurrence(*args)
    e_lo, f_lo, ls_lo = pair_recurrence(*args, rescale_threshold=1e50)
    assert ls_lo > ls_hi  # the lower threshold actually rescaled more
    e_hi, f_hi = np.asarray(e_hi), np.asarray(f_hi)
    e_lo, f_lo = np.asarray(e_lo), np.asarray(f_lo)
    mask = np.abs(f_hi) > 1e-280
    ratios_hi = e_hi[mask] / f_hi[mask]
    ratios_lo = e_lo[mask] / f_lo[mask]
    assert np.allclose(ratios_hi, ratios_lo, rtol=1e-12, atol=0.0)


def test_isotropic_recurrence_reduction():
    # at r=1 the e-equation loses its e_{m-1} and f_{m-1} terms:
    # (m - x) e_m = (delta/2) f_m
    p = ModelParams(1.3, 0.8, 1.0)
    dp = derive_params(p)
    assert dp.lambda_minus == 0.0
    assert dp.beta - dp.lambda_plus / dp.beta == pytest.approx(0.0, abs=1e-15)
    x = 0.37
    cs = regular_coeffs(dp, p.delta, x, 30)
    for m in range(31):
        assert (m - x) * cs.e[m] == pytest.approx(
            0.5 * p.delta * cs.f[m], rel=1e-12, abs=1e-300
        )


def test_quasi_exact_classic_point():
    g0 = math.sqrt(0.5 / 0.96)
    p = ModelParams(0.5, g0, 0.2)
    seq = quasi_exact_coeffs(derive_params(p), p.delta, 0)
    assert seq.e[0] == pytest.approx(1.5, rel=1e-12)
    assert seq.f[0] == 1.0
    tail = max(np.max(np.abs(seq.e[1:])), np.max(np.abs(seq.f[1:])))
    assert tail < 1e-10 * max(abs(seq.e[0]), abs(seq.f[0]))


def test_quasi_exact_pole1():
    from anirabi.exceptional import find_degenerate_points

    pts = find_degenerate_points(1, ModelParams(2.0, 1.0, 0.2), (1e-3, 4.0))
    g1 = pts[-1].g
    p = ModelParams(2.0, g1, 0.2)
    seq = quasi_exact_coeffs(derive_params(p), p.delta, 1)
    ref = max(np.max(np.abs(seq.e[:2])), np.max(np.abs(seq.f[:2])))
    tail = max(np.max(np.abs(seq.e[2:])), np.max(np.abs(seq.f[2:])))
    assert tail < 1e-10 * ref


def test_quasi_exact_isotropic_closure():
    from anirabi.exceptional import find_isotropic_judd_points

    pts = find_isotropic_judd_points(1, 1.0, (1e-3, 3.0))
    assert pts
    g = pts[0].g
    p = ModelParams(1.0, g, 1.0)
    dp = derive_params(p)
    seq = quasi_exact_coeffs(dp, p.delta, 1)
    ref = max(np.max(np.abs(seq.e[:2])), np.max(np.abs(seq.f[:2])))
    assert max(np.max(np.abs(seq.e[2:])), np.max(np.abs(seq.f[2:]))) < 1e-10 * ref
    # isotropic closure e_m = -(4g/delta) f_{m-1}
    powers = dp.beta ** np.arange(len(seq.e))
    e_raw, f_raw = seq.e / powers, seq.f / powers
    assert e_raw[1] == pytest.approx(-(4 * g / p.delta) * f_raw[0], rel=1e-8)


def test_quasi_exact_rejects_off_crossing():
    p = ModelParams(0.5, 0.6, 0.2)
    with pytest.raises(NotDegenerate):
        quasi_exact_coeffs(derive_params(p), p.delta, 0)


def test_quasi_exact_singular_closure():
    # delta/2 + lambda_minus = 0 at g = sqrt(delta/(r^2-1))
    p = ModelParams(1.0, 1.0, math.sqrt(2.0))
    with pytest.raises(Singular):
        quasi_exact_coeffs(derive_params(p), p.delta, 0)


def test_raw_coeffs_at_pole_matches_scaled():
    p = ModelParams(0.7, 0.9, 0.4)
    dp = derive_params(p)
    e, f = raw_coeffs_at_pole(dp, p.delta, 3)
    # the same f-values, computed via the scaled kernel at x just off the
    # pole, approach the raw ones continuously
    cs = regular_coeffs(dp, p.delta, 3.0 + 1e-9 * 2, 3)
    for k in range(3):
        assert cs.f[k] / dp.beta**k == pytest.approx(f[k], rel=1e-6)
