import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlpoisson.core import Field, SpaceTag, make_grid, sample
from nlpoisson.gaussian import gaussian
from nlpoisson.operators import (
    PropagatorPath,
    ResolutionWarning,
    check_commutation,
    check_resolution,
    chirp,
    dilate_eval,
    fourier,
    interpolate,
    inverse_fourier,
    propagate,
    quadratic_phase,
    resolution_defect,
)


def test_gaussian_is_fixed_by_fourier(grid1, g1):
    f = sample(g1, grid1)
    out = fourier(f)
    assert out.space is SpaceTag.FREQUENCY
    assert np.max(np.abs(out.samples - g1(*grid1.freq_coords()))) < 1e-13


def test_fourier_of_shifted_width_2d(grid2):
    s = gaussian(1.7 - 0.3j, 2)
    out = fourier(sample(s, grid2))
    assert np.max(np.abs(out.samples - s.fourier()(*grid2.freq_coords()))) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31 - 1))
def test_round_trip_and_unitarity(seed):
    rng = np.random.default_rng(seed)
    g = make_grid(1, 64, 7.0)
    f = Field(g, rng.normal(size=64) + 1j * rng.normal(size=64))
    hat = fourier(f)
    assert np.max(np.abs(inverse_fourier(hat).samples - f.samples)) < 1e-12
    assert hat.l2() == pytest.approx(f.l2(), rel=1e-12)


def test_fourier_fourth_power_is_identity():
    rng = np.random.default_rng(3)
    g = make_grid(2, 16, 4.0)
    f = Field(g, rng.normal(size=g.shape))
    h = f
    for _ in range(4):
        h = fourier(h).as_physical()
    assert h.grid == g
    assert np.max(np.abs(h.samples - f.samples)) < 1e-12


def test_space_tags_are_enforced(grid1, g1):
    f = sample(g1, grid1)
    with pytest.raises(ValueError):
        inverse_fourier(f)
    with pytest.raises(ValueError):
        fourier(fourier(f))
    with pytest.raises(ValueError):
        quadratic_phase(fourier(f), 1.0)


def test_quadratic_phase_identities(grid1, g1):
    f = sample(g1, grid1)
    assert np.max(np.abs(quadratic_phase(quadratic_phase(f, 2.0), -2.0).samples - f.samples)) < 1e-15
    with pytest.raises(ValueError):
        quadratic_phase(f, 0.0)
    assert np.allclose(np.abs(quadratic_phase(f, 0.3).samples), np.abs(f.samples))


def test_dilate_eval_examples():
    one = lambda x: np.ones_like(x)  # noqa: E731
    assert dilate_eval(one, 1.0, np.array([0.5])) == pytest.approx(np.exp(-0.25j * math.pi))
    assert dilate_eval(one, 4.0, np.array([0.0])) == pytest.approx(0.5 * np.exp(-0.25j * math.pi))
    with pytest.raises(ValueError):
        dilate_eval(one, -1.0, np.array([0.0]))


def test_propagate_zero_time_is_identity(grid1, g1):
    f = sample(g1, grid1)
    assert propagate(f, 0.0) is f


@pytest.mark.parametrize("t", [0.1, 1.0, -0.5])
@pytest.mark.parametrize("z", [1.0, 2.0, 1 + 1j])
def test_symbol_path_matches_closed_form(grid1, t, z):
    s = gaussian(z)
    out = propagate(sample(s, grid1), t)
    assert np.max(np.abs(out.samples - s.evolve(t)(*grid1.coords()))) < 1e-10


def test_symbol_path_on_large_box_at_long_time():
    g = make_grid(1, 1024, 128.0)
    for z in (1.0, 2.0, 1 + 1j):
        s = gaussian(z)
        out = propagate(sample(s, g), 10.0)
        assert np.max(np.abs(out.samples - s.evolve(10.0)(*g.coords()))) < 1e-10


def test_group_law_and_unitarity(grid2):
    rng = np.random.default_rng(1)
    s = gaussian(0.8, 2)
    f = sample(s, grid2)
    a, b = rng.uniform(-1, 1, 2)
    lhs = propagate(propagate(f, a), b)
    rhs = propagate(f, a + b)
    assert np.max(np.abs(lhs.samples - rhs.samples)) < 1e-12
    assert lhs.l2() == pytest.approx(f.l2(), rel=1e-12)


def test_factored_path_agrees_with_symbol_path():
    g = make_grid(1, 1024, 64.0)
    s = gaussian(1.3 + 0.2j)
    f = sample(s, g)
    for t in (0.5, 2.0, 5.0):
        a = propagate(f, t, PropagatorPath.FACTORED)
        b = propagate(f, t, PropagatorPath.SYMBOL)
        assert np.max(np.abs(a.samples - b.samples)) < 1e-10
    with pytest.raises(ValueError):
        propagate(f, -1.0, PropagatorPath.FACTORED)
    with pytest.raises(ValueError):
        propagate(Field(g, f.samples), 1.0, "factored")


def test_chirp_on_frequency_field(grid1, g1):
    hat = fourier(sample(g1, grid1))
    out = chirp(hat, 0.7)
    assert np.max(np.abs(out.samples - g1.chirp(0.7)(*grid1.freq_coords()))) < 1e-13


def test_interpolation_reproduces_band_limited_samples(grid1):
    s = gaussian(0.5)
    f = sample(s, grid1)
    pts = np.linspace(-3.3, 4.1, 17)
    assert np.max(np.abs(interpolate(f, (pts,)) - s(pts))) < 1e-12
    hat = fourier(f)
    assert np.max(np.abs(interpolate(hat, (pts,)) - s.fourier()(pts))) < 1e-12


def test_resolution_defect_flags_wide_data():
    g = make_grid(1, 64, 4.0)
    assert resolution_defect(sample(gaussian(1.0), g)) < 1e-3
    wide = sample(gaussian(0.05), g)
    with pytest.warns(ResolutionWarning):
        check_resolution(wide)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("t", [0.125, 0.5, 1.0, 2.0, 8.0])
def test_commutation_relations(n, t):
    g = make_grid(n, 128, 12.0 * t)
    rep = check_commutation(t, sample(gaussian(1.0, n), g))
    assert rep.resolved, rep.residuals


def test_commutation_flags_coarse_grid():
    g = make_grid(1, 16, 3.0)
    rep = check_commutation(8.0, sample(gaussian(1.0), g))
    assert not rep.resolved
