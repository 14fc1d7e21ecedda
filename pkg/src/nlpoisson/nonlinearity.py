"""Power nonlinearity and the norms entering the data space X_p."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Field, Regime, SimParams, SpaceTag
from .operators import fourier


def power_nonlinearity(f: Field, p: float) -> Field:
    """Pointwise |u|^{p-1} u, with 0 mapped to 0 for every p > 1.

    Pointwise, so it is applied in whichever variable ``f`` lives in.
    """
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    u = f.samples
    out = np.abs(u) ** (p - 1) * u
    src = f.source.power(p) if f.source is not None else None
    return Field(f.grid, out, f.space, src)


@dataclass(frozen=True)
class XpNorms:
    l2: float
    weighted: Optional[float] = None
    sobolev_hom: Optional[float] = None
    sobolev_inhom: Optional[float] = None


def _finite(name: str, value: float) -> float:
    if not np.isfinite(value):
        raise ValueError(f"{name} norm is not finite on this grid (insufficient decay?)")
    return float(value)


def weighted_norm(f: Field, s: float) -> float:
    """|| |x|^s f ||_2 by the rectangle rule."""
    if f.space is not SpaceTag.PHYSICAL:
        raise ValueError("weighted_norm expects a physical-space field")
    r = np.sqrt(f.grid.radius_sq())
    w = r**s
    return _finite("weighted", np.sqrt(np.sum(np.abs(w * f.samples) ** 2) * f.cell_volume))


def sobolev_norms(f: Field, s: float) -> tuple[float, float]:
    """(|| |xi|^s F f ||_2, || (1+|xi|^2)^{s/2} F f ||_2)."""
    spec = fourier(f)
    k2 = f.grid.freq_radius_sq()
    hom_w = k2 ** (s / 2)  # s > 0: the origin contributes 0
    inhom_w = (1.0 + k2) ** (s / 2)
    dv = spec.cell_volume
    hom = np.sqrt(np.sum(np.abs(hom_w * spec.samples) ** 2) * dv)
    inhom = np.sqrt(np.sum(np.abs(inhom_w * spec.samples) ** 2) * dv)
    return _finite("homogeneous Sobolev", hom), _finite("Sobolev", inhom)


def compute_xp_norms(f: Field, params: SimParams) -> XpNorms:
    l2 = _finite("L2", f.l2())
    if params.regime in (Regime.SUBCRITICAL, Regime.LONG_RANGE):
        return XpNorms(l2=l2, weighted=weighted_norm(f, params.delta_2p))
    if params.regime is Regime.SUPERCRITICAL:
        hom, inhom = sobolev_norms(f, params.delta_p1)
        return XpNorms(l2=l2, sobolev_hom=hom, sobolev_inhom=inhom)
    return XpNorms(l2=l2)
