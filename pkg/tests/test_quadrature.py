import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma

from nlpoisson.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_NODES,
    KRONROD_WEIGHTS,
    QuadratureError,
    QuadratureSpec,
    fold_tail,
    integrate_half_line,
    integrate_interval,
    partial_integral,
)


def test_rule_weights_and_exactness():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    for k in range(0, 32, 2):
        assert KRONROD_WEIGHTS @ KRONROD_NODES**k == pytest.approx(2.0 / (k + 1), abs=1e-14)
    for k in range(0, 20, 2):
        assert GAUSS_WEIGHTS @ KRONROD_NODES**k == pytest.approx(2.0 / (k + 1), abs=1e-14)


def test_exponential():
    res = integrate_half_line(lambda t: math.exp(-t))
    assert res.converged
    assert abs(res.value - 1.0) < 1e-12


def test_singular_head_with_and_without_hint():
    f = lambda t: t**-0.5 * math.exp(-t)  # noqa: E731
    exact = math.sqrt(math.pi)
    hinted = integrate_half_line(f, QuadratureSpec(singular_exponent=-0.5))
    assert abs(hinted.value - exact) < 1e-12
    blind = integrate_half_line(f)
    assert blind.converged
    assert abs(blind.value - exact) < 1e-9
    # the estimate must not undersell the actual error
    assert abs(blind.value - exact) <= 10 * blind.error + 1e-15


def test_algebraic_tail_with_hint():
    # \int_0^inf dt / (1+t)^{5/2} = 2/3
    f = lambda t: (1 + t) ** -2.5  # noqa: E731
    res = integrate_half_line(f, QuadratureSpec(tail_decay=2.5))
    assert abs(res.value - 2.0 / 3.0) < 1e-12


@settings(max_examples=25, deadline=None)
@given(alpha=st.floats(-0.9, 2.0), beta=st.floats(0.3, 3.0))
def test_gamma_integrals(alpha, beta):
    # \int_0^inf t^alpha e^{-beta t} dt = Gamma(alpha+1) / beta^(alpha+1)
    f = lambda t: t**alpha * math.exp(-beta * t)  # noqa: E731
    res = integrate_half_line(f, QuadratureSpec(singular_exponent=alpha))
    exact = gamma(alpha + 1) / beta ** (alpha + 1)
    assert res.converged
    assert abs(res.value - exact) <= 1e-9 * exact


@settings(max_examples=20, deadline=None)
@given(c=st.floats(0.2, 5.0))
def test_split_point_invariance(c):
    f = lambda t: t**0.3 / (1 + t * t) ** 1.5  # noqa: E731
    ref = integrate_half_line(f, QuadratureSpec(singular_exponent=0.3, tail_decay=2.7))
    alt = integrate_half_line(f, QuadratureSpec(singular_exponent=0.3, tail_decay=2.7, split_point=c))
    assert abs(ref.value - alt.value) < 1e-10


def test_fold_tail_consistency():
    f = lambda t: 1.0 / (1 + t) ** 3  # noqa: E731
    direct = integrate_interval(f, 1.0, 1e6)
    folded = integrate_interval(fold_tail(f), 1e-6, 1.0)
    assert abs(direct.value - folded.value) < 1e-10


def test_vector_valued_integrand_shares_tree():
    f = lambda t: np.array([math.exp(-t), 2 * math.exp(-2 * t), 1j * math.exp(-t)])  # noqa: E731
    res = integrate_half_line(f)
    assert np.allclose(res.value, [1.0, 1.0, 1j], atol=1e-12)


def test_partial_integral_of_inverse():
    for T in (10.0, 1e4):
        res = partial_integral(lambda t: 1.0 / t, T)
        assert abs(res.value - 2 * math.log(T)) < 1e-12


def test_errors():
    with pytest.raises(ValueError):
        QuadratureSpec(singular_exponent=-1.0)
    with pytest.raises(ValueError):
        QuadratureSpec(tail_decay=1.0)
    with pytest.raises(QuadratureError):
        integrate_interval(lambda t: float("nan"), 0.0, 1.0)
    with pytest.raises(ValueError):
        partial_integral(lambda t: t, 0.5)


def test_budget_exhaustion_is_reported():
    res = integrate_interval(lambda t: math.sin(1.0 / t), 1e-4, 1.0, QuadratureSpec(max_subdivisions=5))
    assert not res.converged
    assert "no convergence" in res.message
