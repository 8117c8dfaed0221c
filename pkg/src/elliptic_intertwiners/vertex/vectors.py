"""Two-component theta vectors and the comb-valued intertwining (co)vectors."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from ..combs import Pin
from ..context import ModuliContext
from ..elliptic import theta1, theta_bar
from ..errors import DomainError, PoleError

KINDS = ("phi", "phi_bar", "co_phi", "co_phi_bar")


def ket(w: complex, ctx: ModuliContext) -> np.ndarray:
    """|w> = (theta4bar(w), theta3bar(w)); the covector <w| has the same entries."""
    return np.array([theta_bar(4, w, ctx), theta_bar(3, w, ctx)], dtype=complex)


bra = ket


def ket_perp(w: complex, ctx: ModuliContext) -> np.ndarray:
    """|w>^perp = (theta3bar(w), -theta4bar(w)), orthogonal to <w|; also the entries of ^perp<w|."""
    return np.array([theta_bar(3, w, ctx), -theta_bar(4, w, ctx)], dtype=complex)


bra_perp = ket_perp


def scalar_product_perp(xi: complex, zeta: complex, ctx: ModuliContext) -> complex:
    """Closed form of <xi|zeta>^perp."""
    return 2 * theta1(xi + zeta, ctx) * theta1(xi - zeta, ctx)


def inv_sqrt(z: complex, ctx: ModuliContext) -> complex:
    """1/sqrt(2 theta_1(2z)) on the principal branch."""
    t = 2 * theta1(2 * z, ctx)
    if abs(t) < 1e-14:
        raise PoleError(f"theta_1(2z) vanishes at z={z}")
    return 1 / cmath.sqrt(t)


@dataclass(frozen=True)
class IntertwiningVector:
    """One of |phi>, |phi_bar>, <phi|, <phi_bar| with spectral parameter ``lam``.

    Each is a sum of two terms vector(z) delta(z - z' +/- eta) in the upper
    variable z and lower variable z'.
    """

    kind: str
    lam: complex
    ctx: ModuliContext

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise DomainError(f"kind must be one of {KINDS}")

    def components(self, z: complex) -> list[tuple[complex, np.ndarray]]:
        """[(shift s, vector)] such that the object is sum vector * delta(z - z' + s)."""
        z = complex(z)
        lam, ctx = self.lam, self.ctx
        r = inv_sqrt(z, ctx)
        e = ctx.eta
        if self.kind in ("phi", "co_phi"):
            return [(e, r * ket(z + lam, ctx)), (-e, r * ket(z - lam, ctx))]
        return [(e, r * ket_perp(z - lam, ctx)), (-e, -r * ket_perp(z + lam, ctx))]

    def pin(self, upper: str, lower: str) -> Pin:
        e = self.ctx.eta

        def plus(z, zp):
            return self.components(z)[0][1]

        def minus(z, zp):
            return self.components(z)[1][1]

        return Pin(upper, lower, [(e, plus), (-e, minus)])


def phi(lam: complex, ctx: ModuliContext) -> IntertwiningVector:
    return IntertwiningVector("phi", complex(lam), ctx)


def phi_bar(lam: complex, ctx: ModuliContext) -> IntertwiningVector:
    return IntertwiningVector("phi_bar", complex(lam), ctx)


def co_phi(lam: complex, ctx: ModuliContext) -> IntertwiningVector:
    return IntertwiningVector("co_phi", complex(lam), ctx)


def co_phi_bar(lam: complex, ctx: ModuliContext) -> IntertwiningVector:
    return IntertwiningVector("co_phi_bar", complex(lam), ctx)


def V_matrix(lam: complex, z: complex, ctx: ModuliContext) -> np.ndarray:
    """Rows <z+lam| and <z-lam|."""
    return np.array([ket(z + lam, ctx), ket(z - lam, ctx)])


def V_adjugate(lam: complex, z: complex, ctx: ModuliContext) -> np.ndarray:
    """Columns |z-lam>^perp, -|z+lam>^perp divided by 2 theta_1(2z).

    Equals theta_1(2 lam) times the inverse of :func:`V_matrix`.
    """
    a = ket_perp(z - lam, ctx)
    b = -ket_perp(z + lam, ctx)
    return np.column_stack([a, b]) / (2 * theta1(2 * z, ctx))


def V_inverse(lam: complex, z: complex, ctx: ModuliContext) -> np.ndarray:
    return np.linalg.inv(V_matrix(lam, z, ctx))
