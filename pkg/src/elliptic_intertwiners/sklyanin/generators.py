"""Sklyanin generators as two-term difference operators and their algebra relations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..combs import DifferenceOperator, SampledEqualityPolicy, operator_residuals, sample_points
from ..context import EPS_LATTICE, ModuliContext, near_integer
from ..elliptic import theta, theta1, theta_bar
from ..report import IdentityReport, ResidualLog, Stopwatch

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class Spin:
    ell: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "ell", complex(self.ell))

    @property
    def d(self) -> complex:
        return 2 * self.ell + 1

    @property
    def dimension(self) -> int | None:
        """d when it is a positive integer, else None."""
        k = near_integer(self.d, EPS_LATTICE)
        return k if k is not None and k > 0 else None

    @property
    def is_half_integer(self) -> bool:
        return self.dimension is not None

    def dual(self) -> Spin:
        """The spin -ell-1 the intertwiner maps to."""
        return Spin(-self.ell - 1)


@dataclass(frozen=True)
class StructureConstants:
    I: np.ndarray

    @classmethod
    def from_context(cls, ctx: ModuliContext) -> StructureConstants:
        I = np.array([[theta(a + 1, 0.0, ctx) * theta(b + 1, 2 * ctx.eta, ctx) for b in range(4)] for a in range(4)])
        return cls(I)

    def __getitem__(self, ab: tuple[int, int]) -> complex:
        return complex(self.I[ab])


def sklyanin_generator(a: int, spin: Spin, ctx: ModuliContext) -> DifferenceOperator:
    """s_a = theta_{a+1}(2z - 2 ell eta)/theta_1(2z) e^{eta d} - theta_{a+1}(-2z - 2 ell eta)/theta_1(2z) e^{-eta d}."""
    ell, eta = spin.ell, ctx.eta
    b = a + 1

    def up(z: complex) -> complex:
        return theta(b, 2 * z - 2 * ell * eta, ctx) / theta1(2 * z, ctx)

    def down(z: complex) -> complex:
        return -theta(b, -2 * z - 2 * ell * eta, ctx) / theta1(2 * z, ctx)

    return DifferenceOperator(-eta, {0: down, 1: up}, ctx)


@dataclass(frozen=True)
class SklyaninGenerators:
    s: tuple[DifferenceOperator, DifferenceOperator, DifferenceOperator, DifferenceOperator]
    spin: Spin
    ctx: ModuliContext

    def __getitem__(self, a: int) -> DifferenceOperator:
        return self.s[a]


def make_generators(spin: Spin, ctx: ModuliContext) -> SklyaninGenerators:
    return SklyaninGenerators(tuple(sklyanin_generator(a, spin, ctx) for a in range(4)), spin, ctx)


CYCLES = ((1, 2, 3), (2, 3, 1), (3, 1, 2))


def commutation_sides(gens: SklyaninGenerators, I: StructureConstants):
    """Yield (label, lhs, rhs) for the six quadratic relations."""
    s = gens.s
    for al, be, ga in CYCLES:
        sign = (-1) ** (al + 1)
        lhs1 = sign * I[al, 0] * (s[al] @ s[0])
        rhs1 = I[be, ga] * (s[be] @ s[ga]) - I[ga, be] * (s[ga] @ s[be])
        yield f"alpha={al} first", lhs1, rhs1
        lhs2 = sign * I[al, 0] * (s[0] @ s[al])
        rhs2 = I[ga, be] * (s[be] @ s[ga]) - I[be, ga] * (s[ga] @ s[be])
        yield f"alpha={al} second", lhs2, rhs2


def check_commutation(
    spin: Spin,
    pol: SampledEqualityPolicy,
    ctx: ModuliContext,
    constants: StructureConstants | None = None,
) -> IdentityReport:
    """All six relations of the algebra as sampled operator identities."""
    with Stopwatch() as sw:
        gens = make_generators(spin, ctx)
        I = constants or StructureConstants.from_context(ctx)
        zs = sample_points(pol, ctx)
        log = ResidualLog()
        per = {}
        for label, lhs, rhs in commutation_sides(gens, I):
            res = operator_residuals(lhs, rhs, zs)
            per[label] = max(res)
            log.extend(res)
        log.draws = len(zs)
    return IdentityReport.from_log(
        "sklyanin", f"quadratic relations, spin {_fmt(spin.ell)}", "Sklyanin algebra relations",
        log, pol.rel_tol, sw.ms, per_relation=per,
    )


def _fmt(x: complex) -> str:
    return f"{x.real:g}" if x.imag == 0 else f"{x.real:g}{x.imag:+g}i"


def basis_half(ctx: ModuliContext):
    """Basis (theta4bar, theta3bar) of even order-2 theta functions."""
    return (lambda z: theta_bar(4, z, ctx), lambda z: theta_bar(3, z, ctx))


def generator_matrices(ctx: ModuliContext, points: list[complex] | None = None) -> tuple[list[np.ndarray], float]:
    """Matrices of s_0..s_3 at spin 1/2 in the (theta4bar, theta3bar) basis.

    Column j holds the expansion of s_a applied to basis function j, fitted by
    least squares at sample points; the returned float is the largest fit
    residual (how far s_a e_j is from the span).
    """
    pts = points or [0.13 + 0.07j, -0.21 + 0.11j, 0.31 - 0.05j, 0.05 - 0.17j, -0.37 + 0.02j]
    gens = make_generators(Spin(0.5), ctx)
    basis = basis_half(ctx)
    A = np.array([[f(z) for f in basis] for z in pts])
    mats = []
    worst = 0.0
    for a in range(4):
        M = np.zeros((2, 2), dtype=complex)
        for j, f in enumerate(basis):
            y = np.array([gens[a](f)(z) for z in pts])
            coef, *_ = np.linalg.lstsq(A, y, rcond=None)
            M[:, j] = coef
            worst = max(worst, float(np.max(np.abs(A @ coef - y)) / max(np.max(np.abs(y)), 1e-300)))
        mats.append(M)
    return mats, worst


def expected_half_matrices(ctx: ModuliContext, scale: complex = 1.0) -> list[np.ndarray]:
    """scale * (-i)^{delta_{a,2}} sigma_a / theta_{a+1}(eta)."""
    out = []
    for a in range(4):
        ph = -1j if a == 2 else 1.0
        out.append(scale * ph * PAULI[a] / theta(a + 1, ctx.eta, ctx))
    return out


def perturbed_constants(ctx: ModuliContext, ab: tuple[int, int] = (1, 0), rel: float = 1e-4) -> StructureConstants:
    """Structure constants with a single entry I_ab scaled by (1 + rel).

    Scaling every entry at once is a symmetry of the relations, so only a
    single-entry perturbation is a genuine counterexample.
    """
    I = StructureConstants.from_context(ctx).I.copy()
    I[ab] *= 1 + rel
    return StructureConstants(I)


def check_half_matrices(ctx: ModuliContext, printed: bool = False, tol: float = 1e-9) -> IdentityReport:
    """Spin-1/2 matrices of s_a against (-i)^{delta_{a,2}} sigma_a / theta_{a+1}(eta).

    With the generators normalized as above the matrices carry an extra
    overall theta_1(2 eta); ``printed=True`` leaves it out.
    """
    with Stopwatch() as sw:
        mats, fit = generator_matrices(ctx)
        scale = 1.0 if printed else theta1(2 * ctx.eta, ctx)
        log = ResidualLog()
        for M, E in zip(mats, expected_half_matrices(ctx, scale)):
            log.add(max(float(np.max(np.abs(M - E))) / float(np.max(np.abs(E))), fit))
        log.draws = 4
    ident = "spin-1/2 generator matrices = " + ("sigma_a / theta_{a+1}(eta) (as displayed)" if printed else "theta_1(2 eta) sigma_a / theta_{a+1}(eta)")
    return IdentityReport.from_log("sklyanin", ident, "spin-1/2 representation", log, tol, sw.ms, fit_residual=fit)
