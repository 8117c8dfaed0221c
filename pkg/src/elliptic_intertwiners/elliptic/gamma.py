"""Elliptic gamma function Gamma(z|tau,tau') and the constants built from it."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..context import EPS_LATTICE, ModuliContext
from ..errors import DomainError, NonConvergence, PoleError
from .theta import dedekind_eta, jacobi_theta

PI = math.pi
SHIFTS = ("tau", "2eta", "1")


def elliptic_gamma_general(z: complex, tau: complex, sigma: complex, eps: float = 1e-16, k_max: int = 256) -> complex:
    """Double product over k (tau axis) and k' (sigma axis).

    Each row keeps the factors whose exponential is above ``eps``; rows stop
    once both the numerator and the denominator exponentials of the leading
    factor are negligible.
    """
    z = complex(z)
    if tau.imag <= 0 or sigma.imag <= 0:
        raise DomainError(f"elliptic gamma needs Im tau > 0 and Im tau' > 0 (tau={tau}, tau'={sigma})")
    cut = -math.log(eps) / (2 * PI)
    num_prod = 1.0 + 0j
    den_prod = 1.0 + 0j
    for k in range(k_max):
        a = k * tau + z
        b = (k + 1) * tau + sigma - z
        if a.imag > cut and b.imag > cut:
            break
        n = int(math.ceil(max(cut - a.imag, cut - b.imag, 0.0) / sigma.imag)) + 1
        if n > k_max:
            raise NonConvergence(f"elliptic gamma row needs {n} > k_max factors")
        kp = np.arange(n) * sigma
        wa = a + kp
        den = 1 - np.exp(2j * PI * wa)
        small = np.abs(den) < 1e-6
        if small.any():
            w = wa[small]
            if np.any(np.abs(w - np.round(w.real)) < EPS_LATTICE):
                raise PoleError(f"elliptic gamma evaluated at a pole z={z}")
        num_prod *= np.prod(1 - np.exp(2j * PI * (b + kp)))
        den_prod *= np.prod(den)
    else:
        raise NonConvergence(f"elliptic gamma product did not converge within k_max={k_max}")
    return complex(num_prod / den_prod)


def elliptic_gamma(z: complex, ctx: ModuliContext) -> complex:
    """Gamma(z|tau, 2 eta)."""
    ctx.require_gamma_domain()
    return elliptic_gamma_general(z, ctx.tau, ctx.two_eta, ctx.eps_term, ctx.k_max)


def shift_factor(z: complex, direction: str, ctx: ModuliContext) -> complex:
    """Gamma(z + shift)/Gamma(z) for a shift by tau, 2 eta or 1."""
    z = complex(z)
    if direction == "1":
        return 1.0 + 0j
    if direction == "tau":
        other = ctx.two_eta
    elif direction == "2eta":
        other = ctx.tau
    else:
        raise DomainError(f"shift direction must be one of {SHIFTS}, got {direction!r}")
    eta_d = dedekind_eta(other, ctx.eps_term, ctx.k_max)
    th = jacobi_theta(1, z, other, ctx.eps_term, ctx.k_max)
    return -1j * cmath.exp(-1j * PI * other / 6) / eta_d * cmath.exp(1j * PI * z) * th


def gamma_shift(z: complex, direction: str, ctx: ModuliContext) -> complex:
    """Gamma(z + shift) computed from Gamma(z) through the quasi-periodicity factor."""
    return shift_factor(z, direction, ctx) * elliptic_gamma(z, ctx)


def gamma_reflection(z: complex, ctx: ModuliContext) -> complex:
    """Closed form of Gamma(z)Gamma(2 eta - z)."""
    s = ctx.two_eta
    eta_d = dedekind_eta(s, ctx.eps_term, ctx.k_max)
    th = jacobi_theta(1, complex(z), s, ctx.eps_term, ctx.k_max)
    return 1j * cmath.exp(1j * PI * s / 6) * eta_d / (cmath.exp(1j * PI * z) * th)


def modular_polynomial(z: complex, tau: complex, sigma: complex) -> complex:
    """Cubic P(z) in the exponent of the modular transformation of Gamma."""
    ts = tau * sigma
    return (
        -(z**3) / (3 * ts)
        + (tau + sigma - 1) / (2 * ts) * z**2
        - (tau**2 + sigma**2 + 3 * ts - 3 * tau - 3 * sigma + 1) / (6 * ts) * z
        - (tau + sigma - 1) * (tau + sigma - ts) / (12 * ts)
    )


def gamma_modular(
    z: complex,
    ctx: ModuliContext,
    tau: complex | None = None,
    sigma: complex | None = None,
) -> complex:
    """Gamma(z|tau, tau') through the tau -> -1/tau transformation.

    Defaults to the context moduli (tau, 2 eta). The transformed products only
    converge when Im(tau'/tau) > 0 as well; otherwise DomainError is raised.
    """
    tau = ctx.tau if tau is None else complex(tau)
    sigma = ctx.two_eta if sigma is None else complex(sigma)
    z = complex(z)
    if (sigma / tau).imag <= 0:
        raise DomainError(f"transformed moduli diverge: Im(tau'/tau) = {(sigma / tau).imag:.3g} <= 0")
    eps, cap = ctx.eps_term, ctx.k_max
    top = elliptic_gamma_general(z / tau, -1 / tau, sigma / tau, eps, cap)
    bottom = elliptic_gamma_general((z - tau) / sigma, -tau / sigma, -1 / sigma, eps, cap)
    return cmath.exp(1j * PI * modular_polynomial(z, tau, sigma)) * top / bottom


@dataclass(frozen=True)
class GammaConstants:
    """R, rho_0 (by its two expressions) and the residue r_0 of Gamma at 0."""

    R_const: complex
    rho0: complex
    rho0_alt: complex
    r0: complex

    @classmethod
    def from_context(cls, ctx: ModuliContext) -> GammaConstants:
        ctx.require_gamma_domain()
        tau, s = ctx.tau, ctx.two_eta
        eta_tau = dedekind_eta(tau, ctx.eps_term, ctx.k_max)
        eta_s = dedekind_eta(s, ctx.eps_term, ctx.k_max)
        R = 1j * cmath.exp(1j * PI * (ctx.eta + tau / 6)) * eta_tau
        rho0 = elliptic_gamma(s, ctx) / (1j * cmath.exp(1j * PI * tau / 6) * eta_tau)
        rho0_alt = cmath.exp(1j * PI * (s - 3 * tau) / 12) / (1j * eta_s)
        r0 = -cmath.exp(1j * PI * (tau + s) / 12) / (2j * PI * eta_tau * eta_s)
        return cls(R, rho0, rho0_alt, r0)


_CONSTANTS: dict[ModuliContext, GammaConstants] = {}


def gamma_constants(ctx: ModuliContext) -> GammaConstants:
    c = _CONSTANTS.get(ctx)
    if c is None:
        c = _CONSTANTS[ctx] = GammaConstants.from_context(ctx)
    return c


def gamma_ratio(x: complex, k: int, ctx: ModuliContext) -> complex:
    """Closed form of Gamma(x + 2k eta)/Gamma(x) for any integer k."""
    R = gamma_constants(ctx).R_const
    eta = ctx.eta
    x = complex(x)
    if k >= 0:
        prod = 1.0 + 0j
        for j in range(k):
            prod *= jacobi_theta(1, x + 2 * j * eta, ctx.tau, ctx.eps_term, ctx.k_max)
        return cmath.exp(1j * PI * eta * k * k) * R ** (-k) * cmath.exp(1j * PI * k * x) * prod
    m = -k
    prod = 1.0 + 0j
    for j in range(m):
        prod *= jacobi_theta(1, -x + 2 * eta + 2 * j * eta, ctx.tau, ctx.eps_term, ctx.k_max)
    return (-1) ** m * cmath.exp(1j * PI * eta * m * m) * R**m * cmath.exp(-1j * PI * m * x) / prod


def gamma_residue(k: int, ctx: ModuliContext) -> complex:
    """Residue of Gamma(z|tau, 2 eta) at the pole z = -2k eta."""
    if k < 0:
        raise DomainError("residue index must be non-negative")
    c = gamma_constants(ctx)
    prod = 1.0 + 0j
    for j in range(1, k + 1):
        prod *= jacobi_theta(1, 2 * j * ctx.eta, ctx.tau, ctx.eps_term, ctx.k_max)
    return (-1) ** k * cmath.exp(1j * PI * ctx.eta * k * k) * c.R_const**k * c.r0 / prod
