"""Grids, sampled fields, parameter records and regime classification."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

SUPPORTED_DIMS = (1, 2, 3)

# relative tolerance used to detect the rational regime boundaries in double
_BOUNDARY_RTOL = 1e-12


class SpaceTag(enum.Enum):
    PHYSICAL = "physical"
    FREQUENCY = "frequency"


class Regime(enum.Enum):
    LONG_RANGE = "long_range"
    SUBCRITICAL = "subcritical"
    L2_CRITICAL = "L2_critical"
    SUPERCRITICAL = "supercritical"
    OUT_OF_RANGE = "out_of_range"


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform periodic box [-L, L)^n with N points per axis.

    The dual (frequency) grid has spacing pi/L and covers
    [-N pi/(2L), N pi/(2L)) per axis, so that dx * dxi * N = 2 pi.
    """

    n_dim: int
    points_per_dim: int
    half_width: float

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points_per_dim

    @property
    def freq_spacing(self) -> float:
        return math.pi / self.half_width

    @property
    def freq_half_width(self) -> float:
        return self.points_per_dim * math.pi / (2.0 * self.half_width)

    @property
    def size(self) -> int:
        return self.points_per_dim ** self.n_dim

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_dim,) * self.n_dim

    def axis(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.points_per_dim)

    def freq_axis(self) -> np.ndarray:
        return -self.freq_half_width + self.freq_spacing * np.arange(self.points_per_dim)

    def coords(self) -> tuple[np.ndarray, ...]:
        ax = self.axis()
        return tuple(np.meshgrid(*([ax] * self.n_dim), indexing="ij"))

    def freq_coords(self) -> tuple[np.ndarray, ...]:
        ax = self.freq_axis()
        return tuple(np.meshgrid(*([ax] * self.n_dim), indexing="ij"))

    def radius_sq(self) -> np.ndarray:
        return sum(c * c for c in self.coords())

    def freq_radius_sq(self) -> np.ndarray:
        return sum(c * c for c in self.freq_coords())

    def dual(self) -> "SpatialGrid":
        """The frequency grid viewed as a spatial grid; ``g.dual().dual() == g``."""
        return SpatialGrid(self.n_dim, self.points_per_dim, self.freq_half_width)

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.n_dim

    @property
    def freq_cell_volume(self) -> float:
        return self.freq_spacing ** self.n_dim


def make_grid(n_dim: int, points_per_dim: int, half_width: float) -> SpatialGrid:
    if n_dim not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported dimension n_dim={n_dim}; expected one of {SUPPORTED_DIMS}")
    n = int(points_per_dim)
    if n != points_per_dim or n < 8 or n & (n - 1):
        raise ValueError(f"points_per_dim must be a power of two >= 8, got {points_per_dim}")
    if not (half_width > 0 and math.isfinite(half_width)):
        raise ValueError(f"half_width must be positive, got {half_width}")
    return SpatialGrid(int(n_dim), n, float(half_width))


@dataclass(frozen=True, eq=False)
class Field:
    """Complex samples on a grid.

    ``samples`` has shape ``grid.shape`` (row-major) and is read-only.
    ``space`` records whether the samples live on the physical nodes or on
    the dual frequency nodes of ``grid``.  ``source`` optionally carries a
    closed-form description of the same function (a ``GaussianState``),
    used by the factored propagator and the commutation checks.
    """

    grid: SpatialGrid
    samples: np.ndarray
    space: SpaceTag = SpaceTag.PHYSICAL
    source: Optional[Any] = field(default=None, compare=False)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.samples, dtype=np.complex128)
        if arr.shape != self.grid.shape:
            if arr.size != self.grid.size:
                raise ValueError(
                    f"expected {self.grid.size} samples for grid {self.grid.shape}, got {arr.size}"
                )
            arr = arr.reshape(self.grid.shape)
        if not np.all(np.isfinite(arr)):
            bad = np.argwhere(~np.isfinite(arr))[0]
            raise ValueError(f"non-finite sample at grid index {tuple(int(i) for i in bad)}")
        if arr is self.samples or np.shares_memory(arr, self.samples):
            arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "samples", arr)

    def nodes(self) -> tuple[np.ndarray, ...]:
        """Coordinates of the sample points (physical or frequency)."""
        if self.space is SpaceTag.PHYSICAL:
            return self.grid.coords()
        return self.grid.freq_coords()

    @property
    def cell_volume(self) -> float:
        if self.space is SpaceTag.PHYSICAL:
            return self.grid.cell_volume
        return self.grid.freq_cell_volume

    def with_samples(self, samples: np.ndarray, source: Any = None) -> "Field":
        return Field(self.grid, samples, self.space, source)

    def as_physical(self) -> "Field":
        """Reinterpret a frequency-side field as a physical field on the dual grid.

        The sample points are unchanged; only the role of the variable changes.
        This is how a Fourier transform is fed back into the propagator.
        """
        if self.space is SpaceTag.PHYSICAL:
            return self
        return Field(self.grid.dual(), self.samples, SpaceTag.PHYSICAL, self.source)

    def as_frequency(self) -> "Field":
        """Inverse of :meth:`as_physical`."""
        if self.space is SpaceTag.FREQUENCY:
            return self
        return Field(self.grid.dual(), self.samples, SpaceTag.FREQUENCY, self.source)

    def scaled(self, factor: complex) -> "Field":
        src = self.source.scaled(factor) if self.source is not None else None
        return Field(self.grid, factor * self.samples, self.space, src)

    def l2(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.cell_volume))

    def sup(self) -> float:
        return float(np.max(np.abs(self.samples)))


def sample(f: Callable[..., Any], grid: SpatialGrid) -> Field:
    """Sample ``f(*coords)`` at the physical nodes x_j = -L + j dx.

    ``f`` receives one coordinate array per axis.  If ``f`` has a
    ``fourier`` method (a ``GaussianState``) it is kept as the closed-form
    source of the field.
    """
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values = np.asarray(f(*grid.coords()), dtype=np.complex128)
    values = np.broadcast_to(values, grid.shape)
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))[0]
        raise ValueError(f"non-finite sample at grid index {tuple(int(i) for i in bad)}")
    source = f if hasattr(f, "fourier") and hasattr(f, "evolve") else None
    return Field(grid, np.array(values), SpaceTag.PHYSICAL, source)


def delta(n: int, r: float) -> float:
    """Scaling exponent n/2 - n/r."""
    return n / 2.0 - n / r


def _near(x: float, y: float) -> bool:
    return math.isclose(x, y, rel_tol=_BOUNDARY_RTOL, abs_tol=0.0)


def classify_regime(n: int, p: float) -> Regime:
    if not p > 1:
        raise ValueError(f"nonlinearity power must satisfy p > 1, got {p}")
    long_range = 1.0 + 2.0 / n
    critical = 1.0 + 4.0 / n
    if p < long_range or _near(p, long_range):
        return Regime.LONG_RANGE
    if _near(p, critical):
        return Regime.L2_CRITICAL
    if p < critical:
        return Regime.SUBCRITICAL
    if n >= 3:
        energy = 1.0 + 4.0 / (n - 2)
        if p > energy and not _near(p, energy):
            return Regime.OUT_OF_RANGE
    return Regime.SUPERCRITICAL


def theta_exponent(n: int, p: float) -> float:
    return 4.0 / (n * (p - 1.0)) - 1.0


def sigma_exponent(n: int, p: float) -> float:
    return (n + 4.0 - (n - 4.0) * p) / (n * p * (p - 1.0))


@dataclass(frozen=True)
class SimParams:
    n: int
    p: float
    regime: Regime
    delta_2p: float
    delta_p1: float
    theta: Optional[float] = None
    sigma: Optional[float] = None

    @property
    def time_power(self) -> float:
        """Exponent n(p-1)/2 - 2 of |t| in the right-hand integrand."""
        return self.n * (self.p - 1.0) / 2.0 - 2.0

    @property
    def decay_power(self) -> float:
        """|U(t)phi|^{p-1} U(t)phi decays like t^{-n(p-1)/2} in L^inf."""
        return self.n * (self.p - 1.0) / 2.0


def make_params(n: int, p: float) -> SimParams:
    """Fill the derived exponents for dimension ``n`` and power ``p``.

    At the L2-critical power both theta (= 0) and sigma (= 1) are recorded.
    """
    if n not in SUPPORTED_DIMS:
        raise ValueError(f"unsupported dimension n={n}")
    regime = classify_regime(n, p)
    if regime is Regime.OUT_OF_RANGE:
        raise ValueError(f"p={p} exceeds the energy-critical power 1+4/(n-2) for n={n}")
    theta = sigma = None
    if regime is Regime.SUBCRITICAL:
        theta = theta_exponent(n, p)
    elif regime is Regime.SUPERCRITICAL:
        sigma = sigma_exponent(n, p)
    elif regime is Regime.L2_CRITICAL:
        theta, sigma = 0.0, 1.0
    return SimParams(
        n=int(n),
        p=float(p),
        regime=regime,
        delta_2p=delta(n, 2.0 * p),
        delta_p1=delta(n, p + 1.0),
        theta=theta,
        sigma=sigma,
    )
