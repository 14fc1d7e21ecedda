"""Fourier transform, quadratic phase, dilation and the free propagator.

The discrete transform approximates

    F f(xi) = (2 pi)^{-n/2} \\int f(x) e^{-i x.xi} dx

on the centered grid x_j = -L + j dx, xi_k = -N pi/(2L) + k pi/L.  With
those nodes e^{-i x_j xi_k} = (-1)^{j+k} e^{-2 pi i jk/N} (N/2 is even), so
F is a sign-modulated FFT times (dx/sqrt(2 pi))^n and is exactly unitary
for the rectangle-rule inner products on the two grids.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import Field, SpaceTag, SpatialGrid
from .gaussian import GaussianState


class ResolutionWarning(UserWarning):
    """A field is not resolved by its grid (mass at the box edge or at the band edge)."""


class PropagatorPath(enum.Enum):
    SYMBOL = "symbol"
    FACTORED = "factored"


def _signs(grid: SpatialGrid) -> np.ndarray:
    s1 = 1.0 - 2.0 * (np.arange(grid.points_per_dim) % 2)
    out = s1
    for _ in range(grid.n_dim - 1):
        out = np.multiply.outer(out, s1)
    return out


def _fft_norm(grid: SpatialGrid, step: float) -> float:
    return (step / math.sqrt(2.0 * math.pi)) ** grid.n_dim


def fourier(f: Field) -> Field:
    if f.space is not SpaceTag.PHYSICAL:
        raise ValueError("fourier expects a physical-space field")
    g = f.grid
    s = _signs(g)
    out = _fft_norm(g, g.spacing) * s * np.fft.fftn(s * f.samples)
    src = f.source.fourier() if f.source is not None else None
    return Field(g, out, SpaceTag.FREQUENCY, src)


def inverse_fourier(f: Field) -> Field:
    if f.space is not SpaceTag.FREQUENCY:
        raise ValueError("inverse_fourier expects a frequency-space field")
    g = f.grid
    s = _signs(g)
    scale = _fft_norm(g, g.freq_spacing) * g.size
    out = scale * s * np.fft.ifftn(s * f.samples)
    src = f.source.inverse_fourier() if f.source is not None else None
    return Field(g, out, SpaceTag.PHYSICAL, src)


def quadratic_phase(f: Field, t: float) -> Field:
    """Multiply by e^{i|x|^2/(2t)} (the operator M_t)."""
    if t == 0:
        raise ValueError("quadratic_phase needs t != 0")
    if f.space is not SpaceTag.PHYSICAL:
        raise ValueError("quadratic_phase expects a physical-space field")
    phase = np.exp(0.5j * f.grid.radius_sq() / t)
    src = f.source.phase(t) if f.source is not None else None
    return Field(f.grid, phase * f.samples, SpaceTag.PHYSICAL, src)


def dilation_factor(t: float, n_dim: int) -> complex:
    """(it)^{-n/2} on the principal branch, t > 0."""
    return t ** (-n_dim / 2) * cmath.exp(-0.25j * math.pi * n_dim)


def dilate_eval(f: Callable[..., complex], t: float, *x):
    """D_t f(x) = (it)^{-n/2} f(x/t) for a closed-form ``f``; n = len(x)."""
    if not t > 0:
        raise ValueError("dilation is only defined here for t > 0")
    n = len(x)
    if n == 0:
        raise ValueError("dilate_eval needs at least one coordinate")
    scaled = tuple(np.asarray(c, dtype=float) / t for c in x)
    return dilation_factor(t, n) * f(*scaled)


def apply_symbol(f: Field, t: float) -> Field:
    """Multiply a frequency-side field by e^{-it|xi|^2/2}."""
    if f.space is not SpaceTag.FREQUENCY:
        raise ValueError("apply_symbol expects a frequency-space field")
    mult = np.exp(-0.5j * t * f.grid.freq_radius_sq())
    src = f.source.chirp(-t) if f.source is not None else None
    return Field(f.grid, mult * f.samples, SpaceTag.FREQUENCY, src)


def chirp(f: Field, c: float) -> Field:
    """Multiply by e^{ic|y|^2/2} in whatever variable the field lives in."""
    r2 = f.grid.radius_sq() if f.space is SpaceTag.PHYSICAL else f.grid.freq_radius_sq()
    src = f.source.chirp(c) if f.source is not None else None
    return Field(f.grid, np.exp(0.5j * c * r2) * f.samples, f.space, src)


def propagate(f: Field, t: float, path: PropagatorPath = PropagatorPath.SYMBOL) -> Field:
    """U(t) f, U(t) = exp(i t Delta / 2).

    ``SYMBOL`` works on any sampled field (periodic box).  ``FACTORED``
    composes M_t D_t F M_t exactly on the closed-form source of ``f`` and
    samples the result; it needs ``f.source`` and t > 0.
    """
    if f.space is not SpaceTag.PHYSICAL:
        raise ValueError("propagate expects a physical-space field")
    path = PropagatorPath(path)
    if t == 0:
        return f
    if path is PropagatorPath.SYMBOL:
        out = inverse_fourier(apply_symbol(fourier(f), t))
        src = f.source.evolve(t) if f.source is not None else None
        return Field(f.grid, out.samples, SpaceTag.PHYSICAL, src)
    if not t > 0:
        raise ValueError("factored propagation is restricted to t > 0")
    src = f.source
    if not isinstance(src, GaussianState):
        raise ValueError("factored propagation needs a closed-form (Gaussian) source")
    evolved = src.phase(t).fourier().dilate(t).phase(t)
    return Field(f.grid, evolved(*f.grid.coords()), SpaceTag.PHYSICAL, evolved)


def resolution_defect(f: Field) -> float:
    """Largest relative magnitude on the outer faces of the box or of the band.

    A small number means the samples decay before the box edge (no
    wrap-around) and the spectrum decays before the Nyquist band edge.
    """
    scale = f.sup()
    if scale == 0:
        return 0.0
    phys = f if f.space is SpaceTag.PHYSICAL else f.as_physical()
    spec = fourier(phys)
    edge = 0.0
    for arr in (phys.samples, spec.samples):
        ref = np.max(np.abs(arr))
        if ref == 0:
            continue
        for axis in range(arr.ndim):
            face = np.take(arr, [0], axis=axis)
            edge = max(edge, float(np.max(np.abs(face))) / ref)
    return edge


def check_resolution(f: Field, tol: float = 1e-10, what: str = "field") -> float:
    defect = resolution_defect(f)
    if defect > tol:
        warnings.warn(
            f"{what} under-resolved: edge magnitude {defect:.3e} exceeds {tol:.1e}",
            ResolutionWarning,
            stacklevel=2,
        )
    return defect


def interpolate(f: Field, axes: tuple[np.ndarray, ...]) -> np.ndarray:
    """Evaluate the trigonometric interpolant of ``f`` on a tensor-product set.

    ``axes`` holds one 1-D array of coordinates per dimension (in the
    variable the field lives in).  The Nyquist mode is split symmetrically.
    """
    g = f.grid if f.space is SpaceTag.PHYSICAL else f.grid.dual()
    if len(axes) != g.n_dim:
        raise ValueError(f"need {g.n_dim} coordinate axes, got {len(axes)}")
    n = g.points_per_dim
    coef = np.fft.fftn(f.samples) / g.size
    k = np.fft.fftfreq(n, d=1.0 / n)
    nyq = n // 2
    out = coef
    for axis, pts in enumerate(axes):
        y = (np.asarray(pts, dtype=float) + g.half_width) * (2 * math.pi / (n * g.spacing))
        mat = np.exp(1j * np.outer(y, k))
        mat[:, nyq] = np.cos(nyq * y)
        out = np.moveaxis(np.tensordot(mat, out, axes=([1], [axis])), 0, axis)
    return out


@dataclass(frozen=True)
class CommutationReport:
    t: float
    fourier_dilation: float
    dilation_inverse: float
    inverse_fourier_dilation: float
    tolerance: float

    @property
    def residuals(self) -> tuple[float, float, float]:
        return (self.fourier_dilation, self.dilation_inverse, self.inverse_fourier_dilation)

    @property
    def max_residual(self) -> float:
        return max(self.residuals)

    @property
    def resolved(self) -> bool:
        return self.max_residual <= self.tolerance


def check_commutation(t: float, f: Field, tol: float = 1e-10) -> CommutationReport:
    """Residuals of  F D_t = D_{1/t} F,  D_t^{-1} = i^n D_{1/t},
    F^{-1} D_t^{-1} = i^n D_t F^{-1}.

    One side of each relation is produced by the discrete transform on
    ``f.grid`` from samples of closed-form dilations; the other side is the
    closed form itself.  Under-resolved grids show up as large residuals.
    """
    if not t > 0:
        raise ValueError("check_commutation needs t > 0")
    src = f.source
    if not callable(src) or not hasattr(src, "fourier"):
        raise ValueError("check_commutation needs a field with a closed-form source")
    g = f.grid
    n = g.n_dim
    x = g.coords()
    xi = g.freq_coords()
    i_n = 1j**n

    # F D_t = D_{1/t} F
    dt_f = Field(g, dilate_eval(src, t, *x), SpaceTag.PHYSICAL)
    left = fourier(dt_f).samples
    right = dilate_eval(src.fourier(), 1.0 / t, *xi)
    r1 = float(np.max(np.abs(left - right)))

    # i^n D_{1/t} D_t f = f
    inner = lambda *y: dilate_eval(src, t, *y)  # noqa: E731
    back = i_n * dilate_eval(inner, 1.0 / t, *x)
    r2 = float(np.max(np.abs(back - src(*x))))

    # F^{-1} D_t^{-1} h = i^n D_t F^{-1} h  for h = F f on the frequency grid
    h = src.fourier()
    dinv_h = Field(g, i_n * dilate_eval(h, 1.0 / t, *xi), SpaceTag.FREQUENCY)
    left = inverse_fourier(dinv_h).samples
    right = i_n * dilate_eval(h.inverse_fourier(), t, *x)
    r3 = float(np.max(np.abs(left - right)))

    return CommutationReport(float(t), r1, r2, r3, tol)
