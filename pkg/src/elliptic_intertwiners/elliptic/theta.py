"""Jacobi theta functions, their modular transform and the Dedekind eta function."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from ..context import ModuliContext
from ..errors import DomainError, NonConvergence

PI = math.pi
_STOP_RUN = 3


@dataclass(frozen=True)
class ThetaIndex:
    """Which theta function; ``half_tau`` selects the barred variant with modulus tau/2."""

    a: int
    half_tau: bool = False

    def __post_init__(self) -> None:
        if self.a not in (1, 2, 3, 4):
            raise DomainError(f"theta index must be 1..4, got {self.a}")


def _as_index(idx: ThetaIndex | int) -> ThetaIndex:
    return idx if isinstance(idx, ThetaIndex) else ThetaIndex(int(idx))


def jacobi_theta(a: int, z: complex, tau: complex, eps: float = 1e-16, k_max: int = 256) -> complex:
    """theta_a(z|tau) by a symmetric sum over the summation index.

    The characteristic shifts the index by 1/2 for a = 1, 2 and the argument by
    1/2 for a = 1, 4. Summation runs outward from the index closest to the
    Gaussian centre and stops on each side after three consecutive terms below
    ``eps`` times the largest term seen.
    """
    if a not in (1, 2, 3, 4):
        raise DomainError(f"theta index must be 1..4, got {a}")
    if tau.imag <= 0:
        raise DomainError("Im tau must be positive")
    half = 0.5 if a in (1, 2) else 0.0
    w = z + 0.5 if a in (1, 4) else z
    ipt = 1j * PI * tau
    tpw = 2j * PI * w

    def term(n: int) -> complex:
        m = n + half
        return cmath.exp(ipt * m * m + tpw * m)

    # the term modulus peaks near m = -Im(w)/Im(tau)
    centre = int(round(-w.imag / tau.imag - half))
    total = term(centre)
    biggest = abs(total)
    for direction in (1, -1):
        quiet = 0
        n = centre
        for _ in range(k_max):
            n += direction
            t = term(n)
            total += t
            mag = abs(t)
            if mag > biggest:
                biggest = mag
            if mag <= eps * biggest:
                quiet += 1
                if quiet >= _STOP_RUN:
                    break
            else:
                quiet = 0
        else:
            raise NonConvergence(f"theta_{a} series did not converge within k_max={k_max} (z={z}, tau={tau})")
    return -total if a == 1 else total


def theta(idx: ThetaIndex | int, z: complex, ctx: ModuliContext) -> complex:
    """theta_a(z|tau), or theta_a(z|tau/2) when ``idx.half_tau``."""
    i = _as_index(idx)
    tau = ctx.tau / 2 if i.half_tau else ctx.tau
    return jacobi_theta(i.a, complex(z), tau, ctx.eps_term, ctx.k_max)


def theta1(z: complex, ctx: ModuliContext) -> complex:
    return jacobi_theta(1, complex(z), ctx.tau, ctx.eps_term, ctx.k_max)


def theta_bar(a: int, z: complex, ctx: ModuliContext) -> complex:
    return jacobi_theta(a, complex(z), ctx.tau / 2, ctx.eps_term, ctx.k_max)


# theta_a(z|tau) in terms of theta_{b}(z/tau | -1/tau): index b and extra phase
_MODULAR_PARTNER = {1: (1, 1j), 2: (4, 1.0), 3: (3, 1.0), 4: (2, 1.0)}


def theta_modular(idx: ThetaIndex | int, z: complex, ctx: ModuliContext) -> complex:
    """theta_a(z|tau) evaluated on the -1/tau side of the modular transformation.

    Uses theta_a(z|tau) = c_a sqrt(i/tau) exp(-pi i z^2/tau) theta_b(z/tau|-1/tau)
    with (a, b) pairs (1,1), (2,4), (3,3), (4,2) and c_1 = i, otherwise 1.
    Only meant as an independent cross-check of :func:`theta`.
    """
    i = _as_index(idx)
    tau = ctx.tau / 2 if i.half_tau else ctx.tau
    z = complex(z)
    b, phase = _MODULAR_PARTNER[i.a]
    lhs = jacobi_theta(b, z / tau, -1 / tau, ctx.eps_term, ctx.k_max)
    return phase * cmath.sqrt(1j / tau) * cmath.exp(-1j * PI * z * z / tau) * lhs


def dedekind_eta(tau: complex, eps: float = 1e-16, k_max: int = 256) -> complex:
    """eta_D(tau) = e^{pi i tau/12} prod_{k>=1} (1 - e^{2 pi i k tau})."""
    if tau.imag <= 0:
        raise DomainError("Im tau must be positive")
    q = cmath.exp(2j * PI * tau)
    prod = 1.0 + 0j
    qk = q
    for _ in range(k_max):
        prod *= 1 - qk
        if abs(qk) < eps:
            break
        qk *= q
    else:
        raise NonConvergence(f"Dedekind eta product did not converge (tau={tau})")
    return cmath.exp(1j * PI * tau / 12) * prod
