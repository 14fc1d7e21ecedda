"""Closed-form Gaussian calculus.

A Gaussian ``A exp(-w |x|^2 / 2)`` with ``Re w > 0`` stays Gaussian under
the free flow, the Fourier transform, quadratic phases, dilations and the
power nonlinearity ``|u|^{p-1} u``.  Everything here is exact arithmetic on
the pair ``(A, w)``; it is the oracle against which the FFT pipelines are
checked.

Branches: every complex power is principal.  For ``Re w > 0`` and real t the
base ``1 + i t w`` has imaginary part ``t Re w``, so it only meets the real
axis at t = 0 (where it equals 1) and the principal branch is already
continuous along the flow.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np


def _cpow(z, expo: float):
    return np.power(np.asarray(z, dtype=np.complex128), expo)


@dataclass(frozen=True)
class GaussianState:
    amplitude: complex
    width: complex
    n_dim: int = 1

    def __post_init__(self):
        w = complex(self.width)
        if not w.real > 0:
            raise ValueError(f"Gaussian width must have positive real part, got {w}")
        object.__setattr__(self, "width", w)
        object.__setattr__(self, "amplitude", complex(self.amplitude))

    def __call__(self, *coords):
        if len(coords) != self.n_dim:
            raise ValueError(f"expected {self.n_dim} coordinate arrays, got {len(coords)}")
        r2 = sum(np.asarray(c, dtype=float) ** 2 for c in coords)
        return self.at_radius_sq(r2)

    def at_radius_sq(self, r2):
        return self.amplitude * np.exp(-0.5 * self.width * np.asarray(r2))

    def scaled(self, factor: complex) -> "GaussianState":
        return GaussianState(self.amplitude * factor, self.width, self.n_dim)

    def fourier(self) -> "GaussianState":
        w = self.width
        return GaussianState(self.amplitude * w ** (-self.n_dim / 2), 1.0 / w, self.n_dim)

    def inverse_fourier(self) -> "GaussianState":
        # radial functions: F^{-1} = F
        return self.fourier()

    def evolve(self, t: float) -> "GaussianState":
        if t == 0:
            return self
        w = self.width
        base = 1.0 + 1j * t * w
        return GaussianState(self.amplitude * base ** (-self.n_dim / 2), w / base, self.n_dim)

    def phase(self, t: float) -> "GaussianState":
        """Multiply by exp(i |x|^2 / (2t))."""
        if t == 0:
            raise ValueError("quadratic phase needs t != 0")
        return GaussianState(self.amplitude, self.width - 1j / t, self.n_dim)

    def chirp(self, c: float) -> "GaussianState":
        """Multiply by exp(i c |x|^2 / 2)."""
        return GaussianState(self.amplitude, self.width - 1j * c, self.n_dim)

    def dilate(self, t: float) -> "GaussianState":
        """(it)^{-n/2} f(x/t) for t > 0."""
        if not t > 0:
            raise ValueError("dilation needs t > 0")
        factor = t ** (-self.n_dim / 2) * cmath.exp(-0.25j * math.pi * self.n_dim)
        return GaussianState(self.amplitude * factor, self.width / t**2, self.n_dim)

    def power(self, p: float) -> "GaussianState":
        """|u|^{p-1} u."""
        w = self.width
        a = self.amplitude
        return GaussianState(abs(a) ** (p - 1) * a, w + (p - 1) * w.real, self.n_dim)

    def integral(self) -> complex:
        """Integral over R^n, (2 pi / w)^{n/2} A."""
        return self.amplitude * (2 * math.pi / self.width) ** (self.n_dim / 2)

    def l2(self) -> float:
        a = self.width.real
        return abs(self.amplitude) * (math.pi / a) ** (self.n_dim / 4)


def gaussian(z: complex = 1.0, n_dim: int = 1, amplitude: complex = 1.0) -> GaussianState:
    """g_z(x) = exp(-z |x|^2 / 2)."""
    return GaussianState(amplitude, z, n_dim)


def gaussian_fourier(s: GaussianState, xi) -> complex:
    return s.fourier().at_radius_sq(_radius_sq(xi))


def gaussian_evolve(s: GaussianState, t: float) -> GaussianState:
    return s.evolve(t)


def _radius_sq(x):
    if isinstance(x, tuple):
        return sum(np.asarray(c, dtype=float) ** 2 for c in x)
    return np.asarray(x, dtype=float) ** 2


def zeta(a: float, p: float, t):
    """Width of |U(t)g_a|^{p-1} U(t)g_a for real a: a(p - i a t)/(1 + (a t)^2)."""
    t = np.asarray(t, dtype=float)
    return a * (p - 1j * a * t) / (1.0 + (a * t) ** 2)


def zeta_general(a: float, b: float, p: float, t) -> complex:
    """Width for complex z = a + ib: (p-1)a/((1-bt)^2+(at)^2) + z/(1+itz)."""
    t = np.asarray(t, dtype=float)
    z = a + 1j * b
    return (p - 1) * a / ((1 - b * t) ** 2 + (a * t) ** 2) + z / (1 + 1j * t * z)


def lhs_integrand_gaussian(a: float, p: float, n: int, t, xi):
    """e^{it|xi|^2/2} F(|U(t)g_a|^{p-1} U(t)g_a)(xi), closed form.

    ``t`` and ``xi`` broadcast; ``xi`` may be a tuple of coordinate arrays.
    """
    t = np.asarray(t, dtype=float)
    r2 = _radius_sq(xi)
    z = zeta(a, p, t)
    prefactor = (1.0 + (a * t) ** 2) ** (-n * (p - 1) / 4)
    return prefactor * _cpow(z * (1 + 1j * t * a), -n / 2) * np.exp((1j * t - 1.0 / z) * r2 / 2)


def lhs_asymptote(a: float, p: float, n: int, t, xi):
    """Large-time equivalent (1+(at)^2)^{-n(p-1)/4} a^{-n/2} e^{-p|xi|^2/(2a)}."""
    t = np.asarray(t, dtype=float)
    r2 = _radius_sq(xi)
    return (1.0 + (a * t) ** 2) ** (-n * (p - 1) / 4) * a ** (-n / 2) * np.exp(-p * r2 / (2 * a))


def rhs_core_gaussian(a: float, p: float, n: int, t, xi):
    """U(t)(|U(-t) g_a^|^{p-1} U(-t) g_a^)(xi), closed form.

    Derived by composing the Gaussian calculus: with eta = (p a + i t)/(a^2 + t^2)
    the value is (a^2+t^2)^{-n(p-1)/4} [a (a + i p t)/(a + i t)]^{-n/2}
    exp(-(p a + i t)/(a (a + i p t)) |xi|^2 / 2).
    """
    t = np.asarray(t, dtype=float)
    r2 = _radius_sq(xi)
    amp = (a * a + t * t) ** (-n * (p - 1) / 4) * _cpow(a * (a + 1j * p * t) / (a + 1j * t), -n / 2)
    width = (p * a + 1j * t) / (a * (a + 1j * p * t))
    return amp * np.exp(-width * r2 / 2)


def rhs_core_limit(a: float, p: float, n: int, xi):
    """t -> 0 limit of the right-hand core: |g_a^|^{p-1} g_a^ = a^{-np/2} e^{-p|xi|^2/(2a)}."""
    r2 = _radius_sq(xi)
    return a ** (-n * p / 2) * np.exp(-p * r2 / (2 * a))


def rhs_core_alt(a: float, p: float, n: int, t, xi):
    """Alternative closed form for the right-hand core.

    (a^2 + i t p)/(a + i t) (a^2 + t^2)^{-n(p-1)/4} exp(-(p + i t)/(a^2 + i t p) |xi|^2/2).
    Its exponent matches :func:`rhs_core_gaussian` only at a = 1 and its
    amplitude never does for t > 0; kept for comparison.
    """
    t = np.asarray(t, dtype=float)
    r2 = _radius_sq(xi)
    amp = (a * a + 1j * t * p) / (a + 1j * t) * (a * a + t * t) ** (-n * (p - 1) / 4)
    return amp * np.exp(-(p + 1j * t) / (a * a + 1j * t * p) * r2 / 2)


def rhs_core_alt_limit(a: float, p: float, n: int, xi):
    """a^{1-n(p-1)/2} e^{-(p/a^2)|xi|^2/2}, t -> 0 limit of the alternative form (exact only at a = 1)."""
    r2 = _radius_sq(xi)
    return a ** (1 - n * (p - 1) / 2) * np.exp(-p / (a * a) * r2 / 2)


def rhs_integrand_gaussian(a: float, p: float, n: int, t, xi):
    """t^{n(p-1)/2-2} U(t)(|U(-t) g_a^|^{p-1} U(-t) g_a^)(xi)."""
    t = np.asarray(t, dtype=float)
    return t ** (n * (p - 1) / 2 - 2) * rhs_core_gaussian(a, p, n, t, xi)


# ---------------------------------------------------------------------------
# Integrands built by composing GaussianState operations.  These accept any
# Gaussian (complex amplitude and width) and are the per-side pipelines used
# by the verifier for closed-form data.


def lhs_state(s: GaussianState, p: float, t: float) -> GaussianState:
    """e^{it|xi|^2/2} F(|U(t)s|^{p-1} U(t)s) as a Gaussian in xi."""
    return s.evolve(t).power(p).fourier().chirp(t)


def rhs_state(s: GaussianState, p: float, t: float) -> GaussianState:
    """|t|^{n(p-1)/2-2} U(t)(|U(-t)s^|^{p-1} U(-t)s^) as a Gaussian."""
    core = s.fourier().evolve(-t).power(p).evolve(t)
    return core.scaled(abs(t) ** (s.n_dim * (p - 1) / 2 - 2))
