"""Theta functions, elliptic gamma function and elliptic hypergeometric series."""

from .gamma import (
    GammaConstants,
    elliptic_gamma,
    elliptic_gamma_general,
    gamma_constants,
    gamma_modular,
    gamma_ratio,
    gamma_reflection,
    gamma_residue,
    gamma_shift,
    modular_polynomial,
    shift_factor,
)
from .hypergeometric import (
    TERMINATING,
    OmegaParams,
    SeriesResult,
    bracket,
    elliptic_binomial,
    elliptic_factorial,
    jackson_balanced,
    jackson_sum,
    omega_series,
    omega_terms,
    pochhammer,
)
from .theta import ThetaIndex, dedekind_eta, jacobi_theta, theta, theta1, theta_bar, theta_modular

__all__ = [
    "GammaConstants",
    "OmegaParams",
    "SeriesResult",
    "TERMINATING",
    "ThetaIndex",
    "bracket",
    "dedekind_eta",
    "elliptic_binomial",
    "elliptic_factorial",
    "elliptic_gamma",
    "elliptic_gamma_general",
    "gamma_constants",
    "gamma_modular",
    "gamma_ratio",
    "gamma_reflection",
    "gamma_residue",
    "gamma_shift",
    "jackson_balanced",
    "jackson_sum",
    "jacobi_theta",
    "modular_polynomial",
    "omega_series",
    "omega_terms",
    "pochhammer",
    "shift_factor",
    "theta",
    "theta1",
    "theta_bar",
    "theta_modular",
]
