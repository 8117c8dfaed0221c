"""Vertex functions: the meromorphic W^{z,zeta}(lambda) and the comb-valued W^z_zeta(lambda)."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from ..combs import Comb, DifferenceOperator, Pin
from ..context import ModuliContext
from ..elliptic import elliptic_gamma, gamma_constants, theta1

PI = math.pi


def vertex_W(z: complex, zeta: complex, lam: complex, ctx: ModuliContext) -> complex:
    """W^{z,zeta}(lambda) as a ratio of four elliptic gamma functions."""
    e = ctx.eta
    G = elliptic_gamma
    num = G(z + zeta + lam + e, ctx) * G(z - zeta + lam + e, ctx)
    den = G(z + zeta - lam + e, ctx) * G(z - zeta - lam + e, ctx)
    return cmath.exp(-2j * PI * lam * z / e) * num / den


def c_norm(lam: complex, ctx: ModuliContext, alt: bool = False) -> complex:
    """Normalization c(lambda) = rho_0 e^{pi i lambda^2/eta} / Gamma(-2 lambda).

    ``alt`` selects the second closed form of rho_0.
    """
    g = gamma_constants(ctx)
    rho0 = g.rho0_alt if alt else g.rho0
    return rho0 * cmath.exp(1j * PI * lam * lam / ctx.eta) / elliptic_gamma(-2 * lam, ctx)


@dataclass(frozen=True)
class CombVertexW:
    """W^z_zeta(lambda) = sum_{k=0}^{N} w_k delta(z - zeta - lambda + 2k eta).

    The coefficient at a support with lower variable zeta is
    c(lambda) theta_1(2 zeta) / W^{zeta,z}(lambda + eta).
    """

    lam: complex
    N: int
    ctx: ModuliContext

    def weight(self, z: complex, zeta: complex) -> complex:
        ctx = self.ctx
        return c_norm(self.lam, ctx) * theta1(2 * zeta, ctx) / vertex_W(zeta, z, self.lam + ctx.eta, ctx)

    def weight_gamma_form(self, z: complex, k: int) -> complex:
        """Coefficient k written out through gamma functions (independent path)."""
        ctx, lam, e = self.ctx, self.lam, self.ctx.eta
        G = elliptic_gamma
        x = z - lam + 2 * k * e
        pref = cmath.exp(2j * PI * (lam + e) * x / e) * theta1(2 * z - 2 * lam + 4 * k * e, ctx)
        ratio = G(2 * z - 2 * lam + 2 * k * e, ctx) * G(-2 * lam + 2 * k * e, ctx)
        ratio /= G(2 * z + 2 * e + 2 * k * e, ctx) * G(2 * e + 2 * k * e, ctx)
        return c_norm(lam, ctx) * pref * ratio

    def shift(self, k: int) -> complex:
        return -self.lam + 2 * k * self.ctx.eta

    def lower(self, z: complex, k: int) -> complex:
        """Support point zeta of term k for upper variable z."""
        return z + self.shift(k)

    def pin(self, upper: str, lower: str) -> Pin:
        return Pin(upper, lower, [(self.shift(k), self.weight) for k in range(self.N + 1)])

    def row(self, z: complex) -> Comb:
        """The kernel as a comb in zeta for fixed z."""
        z = complex(z)
        return Comb(z - self.lam, {-k: self.weight(z, self.lower(z, k)) for k in range(self.N + 1)}, "right-finite", self.ctx.eta)

    def column(self, zeta: complex) -> Comb:
        """The kernel as a comb in z for fixed zeta (left-finite in z)."""
        zeta = complex(zeta)
        nu = zeta + self.lam
        e = self.ctx.eta
        return Comb(nu, {k: self.weight(nu - 2 * k * e, zeta) for k in range(self.N + 1)}, "left-finite", e)

    def operator(self) -> DifferenceOperator:
        terms = {k: (lambda z, k=k: self.weight(z, self.lower(z, k))) for k in range(self.N + 1)}
        return DifferenceOperator(-self.lam, terms, self.ctx)


def comb_vertex_W(lam: complex, N: int, ctx: ModuliContext) -> CombVertexW:
    return CombVertexW(complex(lam), int(N), ctx)
