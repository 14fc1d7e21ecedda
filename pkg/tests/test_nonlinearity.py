import numpy as np
import pytest
from scipy.integrate import quad

from nlpoisson.core import Field, SpaceTag, make_grid, make_params, sample
from nlpoisson.gaussian import gaussian
from nlpoisson.nonlinearity import compute_xp_norms, power_nonlinearity, sobolev_norms, weighted_norm


def test_power_examples():
    g = make_grid(1, 8, 4.0)
    f = Field(g, np.array([0, 1, -2, 1j, 0.5, 0, 3, -1]))
    out = power_nonlinearity(f, 3.0).samples
    assert np.allclose(out, [0, 1, -8, 1j, 0.125, 0, 27, -1])
    assert power_nonlinearity(Field(g, np.zeros(8)), 1.5).samples.sum() == 0
    with pytest.raises(ValueError):
        power_nonlinearity(f, 1.0)


def test_power_keeps_space_tag_and_tracks_source(grid1):
    s = gaussian(1 + 0.5j)
    f = sample(s, grid1)
    out = power_nonlinearity(f, 4.0)
    assert np.max(np.abs(out.samples - out.source(*grid1.coords()))) < 1e-14
    hat = Field(grid1, f.samples, SpaceTag.FREQUENCY)
    assert power_nonlinearity(hat, 2.0).space is SpaceTag.FREQUENCY


def test_weighted_norm_against_quad():
    # the weight has a kink at 0, so the rectangle rule converges like h^(1+2s)
    s = 1.0 / 3.0
    exact = np.sqrt(quad(lambda x: abs(x) ** (2 * s) * np.exp(-x * x), 0, np.inf)[0] * 2)
    errs = []
    for N in (512, 4096):
        f = sample(gaussian(1.0), make_grid(1, N, 20.0))
        errs.append(abs(weighted_norm(f, s) - exact))
    assert errs[0] < 5e-3 * exact
    order = np.log(errs[0] / errs[1]) / np.log(8.0)
    assert order == pytest.approx(1 + 2 * s, abs=0.05)


def test_sobolev_norms_against_quad(grid1):
    s = 5.0 / 14.0
    f = sample(gaussian(1.0), grid1)
    hom, inhom = sobolev_norms(f, s)
    ex_hom = np.sqrt(quad(lambda k: abs(k) ** (2 * s) * np.exp(-k * k), -np.inf, np.inf)[0])
    ex_inh = np.sqrt(quad(lambda k: (1 + k * k) ** s * np.exp(-k * k), -np.inf, np.inf)[0])
    assert hom == pytest.approx(ex_hom, rel=1e-2)
    assert inhom == pytest.approx(ex_inh, rel=1e-10)


def test_plancherel(grid2):
    f = sample(gaussian(0.6 + 0.2j, 2), grid2)
    _, inhom = sobolev_norms(f, 1e-14)
    assert inhom == pytest.approx(f.l2(), rel=1e-12)
    assert f.l2() == pytest.approx(np.sqrt(np.pi / 0.6), rel=1e-12)


@pytest.mark.parametrize("p", [4.0, 5.0, 6.0])
def test_norm_scaling_law(grid1, p):
    prm = make_params(1, p)
    f = sample(gaussian(1.0), grid1)
    a = compute_xp_norms(f, prm)
    b = compute_xp_norms(f.scaled(2.5), prm)
    for x, y in zip(a.__dict__.values(), b.__dict__.values()):
        if x is not None:
            assert y == pytest.approx(2.5 * x, rel=1e-13)


def test_norm_selection_by_regime(grid1):
    f = sample(gaussian(1.0), grid1)
    assert compute_xp_norms(f, make_params(1, 4.0)).weighted is not None
    crit = compute_xp_norms(f, make_params(1, 5.0))
    assert crit.weighted is None and crit.sobolev_hom is None
    assert compute_xp_norms(f, make_params(1, 6.0)).sobolev_hom is not None
