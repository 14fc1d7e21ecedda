import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlpoisson.core import (
    Field,
    Regime,
    SpaceTag,
    classify_regime,
    delta,
    make_grid,
    make_params,
    sample,
    sigma_exponent,
    theta_exponent,
)


def test_grid_nodes_and_dual():
    g = make_grid(1, 8, 4.0)
    assert g.spacing == 1.0
    assert np.allclose(g.axis(), np.arange(-4.0, 4.0))
    assert g.freq_spacing == pytest.approx(math.pi / 4)
    assert g.freq_axis()[0] == pytest.approx(-math.pi)
    d = g.dual()
    assert np.allclose(d.axis(), g.freq_axis())
    assert np.allclose(d.dual().axis(), g.axis())


@pytest.mark.parametrize("n,N,L", [(0, 64, 1.0), (4, 64, 1.0), (1, 48, 1.0), (1, 4, 1.0), (1, 64, 0.0)])
def test_make_grid_rejects(n, N, L):
    with pytest.raises(ValueError):
        make_grid(n, N, L)


def test_field_is_immutable_and_complex():
    g = make_grid(2, 16, 3.0)
    f = Field(g, np.ones(g.shape))
    assert f.samples.dtype == np.complex128
    with pytest.raises(ValueError):
        f.samples[0, 0] = 2.0


def test_sample_reports_bad_index():
    g = make_grid(1, 8, 4.0)
    with pytest.raises(ValueError, match="grid index"):
        sample(lambda x: 1.0 / x, g)


def test_frequency_reinterpretation_round_trip():
    g = make_grid(1, 16, 5.0)
    f = Field(g, np.arange(16.0), SpaceTag.FREQUENCY)
    back = f.as_physical().as_frequency()
    assert back.grid == g
    assert np.array_equal(back.samples, f.samples)


@pytest.mark.parametrize(
    "n,p,regime",
    [
        (1, 3.0, Regime.LONG_RANGE),
        (1, 2.5, Regime.LONG_RANGE),
        (1, 4.0, Regime.SUBCRITICAL),
        (1, 5.0, Regime.L2_CRITICAL),
        (1, 6.0, Regime.SUPERCRITICAL),
        (2, 3.0, Regime.L2_CRITICAL),
        (3, 1.0 + 4.0 / 3.0, Regime.L2_CRITICAL),
        (3, 5.0, Regime.SUPERCRITICAL),
        (3, 5.5, Regime.OUT_OF_RANGE),
    ],
)
def test_regimes(n, p, regime):
    assert classify_regime(n, p) is regime


def test_regime_rejects_p_le_1():
    with pytest.raises(ValueError):
        classify_regime(1, 1.0)


def test_params_examples():
    sub = make_params(1, 4.0)
    assert sub.theta == pytest.approx(1.0 / 3.0)
    assert sub.sigma is None
    crit = make_params(1, 5.0)
    assert crit.theta == 0.0 and crit.sigma == 1.0
    assert crit.time_power == 0.0
    sup = make_params(1, 6.0)
    assert sup.sigma == pytest.approx(23.0 / 30.0)
    with pytest.raises(ValueError):
        make_params(3, 6.0)
    assert make_params(1, 3.0).theta is None


def test_delta_values():
    assert delta(1, 2.0) == 0.0
    assert delta(3, 6.0) == pytest.approx(1.0)


@settings(max_examples=200, deadline=None)
@given(n=st.integers(1, 3), u=st.floats(0.01, 0.99))
def test_theta_in_open_unit_interval(n, u):
    p = 1 + 2 / n + u * (2 / n)
    assert 0 < theta_exponent(n, p) < 1


@settings(max_examples=200, deadline=None)
@given(n=st.integers(1, 3), u=st.floats(0.0, 0.99))
def test_sigma_supercritical_identity(n, u):
    lo = 1 + 4 / n
    hi = 1 + 4 / (n - 2) if n >= 3 else lo + 20.0
    p = lo + u * (hi - lo)
    s = sigma_exponent(n, p)
    assert 0 < s <= 1 + 1e-12
    prm = make_params(n, p)
    if prm.regime is Regime.SUPERCRITICAL:
        assert abs((1 - s) * p * delta(n, p + 1) - (n * (p - 1) / 2 - 2)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(n=st.integers(1, 3))
def test_exponents_meet_at_critical_power(n):
    p = 1 + 4 / n
    assert theta_exponent(n, p) == pytest.approx(0.0, abs=1e-12)
    assert sigma_exponent(n, p) == pytest.approx(1.0, abs=1e-12)
