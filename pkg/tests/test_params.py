import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from anirabi import ModelParams, Parity, derive_params, energy_x_map


def test_validation_rejects_bad_parameters():
    with pytest.raises(ValueError):
        ModelParams(delta=0.0, g=0.5, r=0.5)
    with pytest.raises(ValueError):
        ModelParams(delta=-1.0, g=0.5, r=0.5)
    with pytest.raises(ValueError):
        ModelParams(delta=1.0, g=-0.1, r=0.5)
    with pytest.raises(ValueError):
        ModelParams(delta=1.0, g=0.5, r=-0.5)
    with pytest.raises(ValueError):
        ModelParams(delta=math.nan, g=0.5, r=0.5)
    # r > 1 admitted as-is
    ModelParams(delta=1.0, g=0.5, r=2.5)


def test_derive_params_isotropic_identity():
    dp = derive_params(ModelParams(1.0, 1.0, 1.0))
    assert dp.beta == 1.0
    assert dp.lambda_plus == 1.0
    assert dp.lambda_minus == 0.0
    assert dp.pole_gap == 0.0


def test_derive_params_zero_coupling():
    dp = derive_params(ModelParams(0.5, 0.0, 0.2))
    assert (dp.beta, dp.lambda_plus, dp.lambda_minus, dp.pole_gap) == (0, 0, 0, 0)


def test_derive_params_hand_arithmetic():
    dp = derive_params(ModelParams(0.5, 0.5, 0.2))
    assert dp.beta == pytest.approx(0.223607, abs=1e-6)
    assert dp.lambda_plus == pytest.approx(0.13, rel=1e-12)
    assert dp.lambda_minus == pytest.approx(0.12, rel=1e-12)
    assert dp.pole_gap == pytest.approx(0.08, rel=1e-12)


def test_lambda_identities_on_grid():
    for g in np.linspace(0.0, 3.0, 7):
        for r in np.linspace(0.0, 3.0, 7):
            dp = derive_params(ModelParams(1.0, float(g), float(r)))
            assert dp.lambda_plus - dp.lambda_minus == pytest.approx(
                g * g * r * r, abs=1e-14
            )
            assert dp.lambda_plus + dp.lambda_minus == pytest.approx(
                g * g, abs=1e-14
            )
            assert dp.pole_gap >= 0.0
            assert (dp.pole_gap == 0.0) == (r == 1.0 or g == 0.0)
            assert dp.lambda_plus >= dp.beta**2 - 1e-15


def test_energy_x_map_examples():
    dp = derive_params(ModelParams(1.0, 1.0, 1.0))  # lambda_plus = 1
    assert energy_x_map(dp, -1.0, "to_x") == 0.0
    dp2 = derive_params(ModelParams(0.5, 0.5, 0.2))  # lambda_plus = 0.13
    assert energy_x_map(dp2, 2.0, "to_energy") == pytest.approx(1.87, abs=1e-15)
    with pytest.raises(ValueError):
        energy_x_map(dp, 1.0, "sideways")


@given(
    e=st.floats(min_value=-1e3, max_value=1e3),
    g=st.floats(min_value=0.0, max_value=3.0),
    r=st.floats(min_value=0.0, max_value=3.0),
)
def test_energy_x_roundtrip(e, g, r):
    dp = derive_params(ModelParams(1.0, g, r))
    back = energy_x_map(dp, energy_x_map(dp, e, "to_x"), "to_energy")
    assert abs(back - e) < 1e-14 * max(1.0, abs(e))


def test_parity_flip():
    assert Parity.EVEN.flipped() is Parity.ODD
    assert Parity.ODD.flipped() is Parity.EVEN
