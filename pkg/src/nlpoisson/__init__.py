"""Numerical checks of the nonlinear Poisson formula for the free Schrodinger group."""

from .core import (
    Field,
    Regime,
    SimParams,
    SpaceTag,
    SpatialGrid,
    classify_regime,
    delta,
    make_grid,
    make_params,
    sample,
    sigma_exponent,
    theta_exponent,
)
from .gaussian import GaussianState, gaussian, lhs_asymptote, lhs_integrand_gaussian, rhs_integrand_gaussian, zeta
from .nonlinearity import XpNorms, compute_xp_norms, power_nonlinearity
from .operators import (
    PropagatorPath,
    ResolutionWarning,
    check_commutation,
    fourier,
    inverse_fourier,
    propagate,
    quadratic_phase,
)
from .quadrature import QuadratureResult, QuadratureSpec, integrate_half_line, partial_integral
from .verifier import (
    BoundReport,
    DivergenceReport,
    VerificationReport,
    bound_check,
    divergence_scan,
    lhs_profile,
    pointwise_check,
    rhs_profile,
    verify_identity,
)

__version__ = "0.1.0"
