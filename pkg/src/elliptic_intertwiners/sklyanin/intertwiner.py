"""The intertwiner W between spins ell and -ell-1: finite and truncated-series forms."""

from __future__ import annotations

import cmath
import math
from typing import Callable, Iterable

import numpy as np

from ..combs import DifferenceOperator, SampledEqualityPolicy, operator_residuals, sample_points
from ..context import ModuliContext
from ..elliptic import (
    OmegaParams,
    dedekind_eta,
    elliptic_binomial,
    elliptic_gamma,
    gamma_constants,
    omega_terms,
    theta1,
    theta_bar,
)
from ..errors import DomainError
from ..report import IdentityReport, ResidualLog, Stopwatch, rel_residual
from ..vertex.weights import c_norm, comb_vertex_W, vertex_W
from .generators import Spin, make_generators
from .loperator import make_L

PI = math.pi


def make_W_finite(spin: Spin, ctx: ModuliContext) -> DifferenceOperator:
    """(d+1)-term intertwiner for d = 2 ell + 1 a positive integer."""
    d = spin.dimension
    if d is None:
        raise DomainError(f"d = 2 ell + 1 = {spin.d} is not a positive integer")
    e = ctx.eta
    pre = (1j * cmath.exp(1j * PI * (-e + ctx.tau / 6)) * dedekind_eta(ctx.tau, ctx.eps_term, ctx.k_max)) ** d
    binoms = [elliptic_binomial(d, k, ctx) for k in range(d + 1)]

    def coef(z: complex, k: int) -> complex:
        den = 1.0 + 0j
        for j in range(d + 1):
            den *= theta1(2 * z + 2 * (k - j) * e, ctx)
        return pre * (-1) ** k * binoms[k] * theta1(2 * z - 2 * (d - 2 * k) * e, ctx) / den

    return DifferenceOperator(-d * e, {k: (lambda z, k=k: coef(z, k)) for k in range(d + 1)}, ctx)


def W_series_prefactor(lam: complex, z: complex, ctx: ModuliContext) -> complex:
    e = ctx.eta
    G = elliptic_gamma
    return cmath.exp(-1j * PI * lam * lam / e + 2j * PI * lam * z / e) * G(2 * z - 2 * lam + 2 * e, ctx) / G(2 * z + 2 * e, ctx)


def make_W_series(lam: complex, N: int, ctx: ModuliContext) -> DifferenceOperator:
    """Normal-ordered 4omega3 series with operator argument, truncated after k = N.

    Term k shifts by -lam + 2k eta; its coefficient is the prefactor times
    the k-th term of 4omega3((z - lam)/eta; -lam/eta).
    """
    if N < 1:
        raise DomainError("truncation order N must be at least 1")
    lam = complex(lam)
    e = ctx.eta

    def batch(z: complex) -> dict:
        pre = W_series_prefactor(lam, z, ctx)
        terms = omega_terms(OmegaParams(3, (z - lam) / e, (-lam / e,)), N, ctx)
        return {k: pre * t for k, t in enumerate(terms)}

    return DifferenceOperator(-lam, None, ctx, batch=batch, indices=range(N + 1))


def make_W(spin: Spin, ctx: ModuliContext, N: int | None = None) -> DifferenceOperator:
    """Finite form when d is a positive integer, otherwise the series truncated at N."""
    if spin.dimension is not None and N is None:
        return make_W_finite(spin, ctx)
    if N is None:
        raise DomainError("non-integer d needs a truncation order N")
    return make_W_series(spin.d * ctx.eta, N, ctx)


def flip_sign(D: DifferenceOperator) -> DifferenceOperator:
    """Conjugation by z -> -z: sum c_k(-z) exp(-(mu + 2k eta) d/dz)."""
    src = D

    def batch(z: complex) -> dict:
        return {-k: v for k, v in src.coefficients(-z).items()}

    return DifferenceOperator(-src.mu, None, src.ctx, batch=batch, indices=[-k for k in src.indices])


def intertwining_pairs(W: DifferenceOperator, spin: Spin, ctx: ModuliContext):
    src = make_generators(spin, ctx)
    dst = make_generators(spin.dual(), ctx)
    for a in range(4):
        yield f"a={a}", (W @ src[a], dst[a] @ W)


def check_intertwining(
    spin: Spin,
    pol: SampledEqualityPolicy,
    ctx: ModuliContext,
    N: int | None = None,
    *,
    flipped: bool = False,
    matrix_form: bool = False,
    lam_L: complex = 0.11 + 0.04j,
) -> IdentityReport:
    """W s^(ell) = s^(-ell-1) W for a = 0..3, or W L^(ell) = L^(-ell-1) W entrywise.

    For a truncated series the comparison is restricted to indices where
    both truncated compositions are exact.
    """
    with Stopwatch() as sw:
        W = make_W(spin, ctx, N)
        if flipped:
            W = flip_sign(W)
        keep = None
        if N is not None:
            # W s and s W at index n only involve W_{n-1}, W_n (W_{n+1}, W_n when flipped)
            keep = range(-N, 1) if flipped else range(0, N + 1)
        if matrix_form:
            La, Lb = make_L(spin, lam_L, ctx), make_L(spin.dual(), lam_L, ctx)
            pairs = [(f"L{i}{j}", (W @ La[i, j], Lb[i, j] @ W)) for i in range(2) for j in range(2)]
        else:
            pairs = list(intertwining_pairs(W, spin, ctx))
        zs = sample_points(pol, ctx)
        log = ResidualLog()
        per = {}
        for label, (lhs, rhs) in pairs:
            res = operator_residuals(lhs, rhs, zs, keep)
            per[label] = max(res)
            log.extend(res)
        log.draws = len(zs)
    kind = "finite" if N is None else f"series N={N}"
    what = "W L = L W" if matrix_form else "W s_a = s_a W"
    ident = f"{what}, spin {_fmt(spin.ell)} ({kind}{', z -> -z' if flipped else ''})"
    return IdentityReport.from_log("intertwiner", ident, "intertwining of spins ell and -ell-1", log, pol.rel_tol, sw.ms, **per)


def _fmt(x: complex) -> str:
    return f"{x.real:g}" if x.imag == 0 else f"{x.real:g}{x.imag:+g}i"


def theta_plus_basis(spin: Spin, ctx: ModuliContext) -> list[Callable[[complex], complex]]:
    """A basis of even theta functions of order 4 ell.

    Spin 1/2 uses (theta4bar, theta3bar); higher spins use products
    prod_i theta_1(x - x_i) theta_1(x + x_i) over 2 ell fixed generic points.
    """
    d = spin.dimension
    if d is None:
        raise DomainError("the invariant subspace exists only for half-integer spin")
    if d == 2:
        return [lambda x: theta_bar(4, x, ctx), lambda x: theta_bar(3, x, ctx)]
    rng = np.random.default_rng([ctx.seed, 4242, d])
    out = []
    for _ in range(d):
        pts = [complex(*rng.uniform(-0.4, 0.4, 2)) for _ in range(d - 1)]

        def f(x, pts=pts):
            p = 1.0 + 0j
            for xi in pts:
                p *= theta1(x - xi, ctx) * theta1(x + xi, ctx)
            return p

        out.append(f)
    return out


def basis_rank(basis: list[Callable[[complex], complex]], points: Iterable[complex]) -> int:
    A = np.array([[f(z) for f in basis] for z in points])
    return int(np.linalg.matrix_rank(A, tol=1e-10 * np.abs(A).max()))


def check_annihilation(spin: Spin, pol: SampledEqualityPolicy, ctx: ModuliContext) -> IdentityReport:
    """W applied to each basis function of the invariant subspace vanishes.

    The residual is |W f(z)| relative to sum_k |c_k(z) f(z + s_k)|.
    """
    with Stopwatch() as sw:
        W = make_W_finite(spin, ctx)
        basis = theta_plus_basis(spin, ctx)
        zs = sample_points(pol, ctx)
        log = ResidualLog()
        for z in zs:
            cs = W.coefficients(z)
            for f in basis:
                parts = [c * f(z + W.shift(k)) for k, c in cs.items()]
                log.add(abs(sum(parts)) / max(sum(abs(p) for p in parts), 1e-300))
        log.draws = len(zs)
        rank = basis_rank(basis, zs[: len(basis) + 2])
    return IdentityReport.from_log(
        "intertwiner", f"W annihilates the invariant subspace, spin {_fmt(spin.ell)}",
        "annihilation of even theta functions", log, pol.rel_tol, sw.ms, basis_rank=rank,
    )


def check_W_forms(d: int, N: int, pol: SampledEqualityPolicy, ctx: ModuliContext) -> IdentityReport:
    """Series at lam = d eta (truncated at N >= d) against the finite form, term by term."""
    with Stopwatch() as sw:
        A = make_W_series(d * ctx.eta, N, ctx)
        B = make_W_finite(Spin((d - 1) / 2), ctx)
        zs = sample_points(pol, ctx)
        log = ResidualLog()
        log.extend(operator_residuals(A, B, zs))
        log.draws = len(zs)
    return IdentityReport.from_log("intertwiner", f"series W(d eta) = finite W, d={d}", "terminating series form", log, pol.rel_tol, sw.ms)


def check_comb_form(lam: complex, N: int, pol: SampledEqualityPolicy, ctx: ModuliContext) -> IdentityReport:
    """The operator with kernel W^z_zeta(lam) against the 4omega3 series form."""
    with Stopwatch() as sw:
        A = comb_vertex_W(lam, N, ctx).operator()
        B = make_W_series(lam, N, ctx)
        zs = sample_points(pol, ctx)
        log = ResidualLog()
        log.extend(operator_residuals(A, B, zs))
        log.draws = len(zs)
    return IdentityReport.from_log("intertwiner", "comb kernel W = series W", "comb kernel of the intertwiner", log, pol.rel_tol, sw.ms)


# --- W(lam) W(-lam) = id ------------------------------------------------------


def S_sum(n: int, z: complex, lam: complex, ctx: ModuliContext) -> complex:
    """S_n(z) = sum_k theta_1(2z - 2lam + 4k eta) / (W^{z-lam+2k eta, z}(lam + eta) W^{z+2n eta, z-lam+2k eta}(eta - lam))."""
    e = ctx.eta
    total = 0j
    for k in range(n + 1):
        x = z - lam + 2 * k * e
        total += theta1(2 * z - 2 * lam + 4 * k * e, ctx) / (vertex_W(x, z, lam + e, ctx) * vertex_W(z + 2 * n * e, x, e - lam, ctx))
    return total


def S0_closed(z: complex, lam: complex, ctx: ModuliContext) -> complex:
    """S_0 written out through gamma functions, before simplification."""
    e = ctx.eta
    G = elliptic_gamma
    ph = cmath.exp(4j * PI * z - 2j * PI * lam * (lam + e) / e)
    num = G(2 * lam, ctx) * G(-2 * lam, ctx) * G(2 * z, ctx) * G(2 * z - 2 * lam, ctx) * theta1(2 * z - 2 * lam, ctx)
    den = G(2 * e, ctx) ** 2 * G(2 * z + 2 * e, ctx) * G(2 * z - 2 * lam + 2 * e, ctx)
    return ph * num / den


def theta_S0_simplified(lam: complex, ctx: ModuliContext, power: int = 1) -> complex:
    """rho_0^{-power} e^{-2 pi i lam^2/eta} Gamma(2 lam) Gamma(-2 lam).

    power=1 is the displayed simplification; power=2 is what the
    normalization c(lam) and the unsimplified S_0 actually imply.
    """
    rho0 = gamma_constants(ctx).rho0
    G = elliptic_gamma
    return rho0 ** (-power) * cmath.exp(-2j * PI * lam * lam / ctx.eta) * G(2 * lam, ctx) * G(-2 * lam, ctx)


def check_WW_identity(lam: complex, N: int, pol: SampledEqualityPolicy, ctx: ModuliContext, n_max: int = 5) -> list[IdentityReport]:
    """Reports for the normalization sum: S_n/S_0 for n >= 1, the S_0 forms and W(lam)W(-lam) = id."""
    lam = complex(lam)
    tol = pol.rel_tol
    with Stopwatch() as sw:
        zs = sample_points(pol, ctx)
        ratio, unity, printed, implied, unsimpl = (ResidualLog() for _ in range(5))
        cc = c_norm(lam, ctx) * c_norm(-lam, ctx)
        simp1 = theta_S0_simplified(lam, ctx, 1)
        simp2 = theta_S0_simplified(lam, ctx, 2)
        for z in zs:
            S = [S_sum(n, z, lam, ctx) for n in range(n_max + 1)]
            ratio.add(max(abs(s / S[0]) for s in S[1:]))
            t = theta1(2 * z, ctx) * S[0]
            unity.add(rel_residual(cc * t, 1.0))
            printed.add(rel_residual(t, simp1))
            implied.add(rel_residual(t, simp2))
            unsimpl.add(rel_residual(S[0], S0_closed(z, lam, ctx)))
        for log in (ratio, unity, printed, implied, unsimpl):
            log.draws = len(zs)
    ms = sw.ms / 5
    anchor = "normalization of the comb kernel W"
    out = [
        IdentityReport.from_log("intertwiner", f"S_n/S_0 = 0 for n=1..{n_max}", anchor, ratio, tol, ms),
        IdentityReport.from_log("intertwiner", "c(lam) c(-lam) theta_1(2z) S_0 = 1", anchor, unity, tol, ms),
        IdentityReport.from_log("intertwiner", "S_0 = unsimplified gamma closed form", anchor, unsimpl, tol, ms),
        IdentityReport.from_log("intertwiner", "theta_1(2z) S_0 = rho_0^-1 e^{-2 pi i lam^2/eta} Gamma(2lam) Gamma(-2lam) (as displayed)", anchor, printed, tol, ms),
        IdentityReport.from_log("intertwiner", "theta_1(2z) S_0 = rho_0^-2 e^{-2 pi i lam^2/eta} Gamma(2lam) Gamma(-2lam)", anchor, implied, tol, ms),
    ]
    with Stopwatch() as sw:
        A = comb_vertex_W(lam, N, ctx).operator() @ comb_vertex_W(-lam, N, ctx).operator()
        ident = DifferenceOperator.identity(ctx)
        log = ResidualLog()
        log.extend(operator_residuals(A, ident, zs, indices=range(N + 1)))
        log.draws = len(zs)
    out.append(IdentityReport.from_log("intertwiner", f"W(lam) W(-lam) = id on indices 0..{N}", anchor, log, tol, sw.ms))
    return out


def check_W_zero(pol: SampledEqualityPolicy, ctx: ModuliContext, N: int = 4) -> IdentityReport:
    """W(0) is the identity operator."""
    with Stopwatch() as sw:
        zs = sample_points(pol, ctx)
        log = ResidualLog()
        log.extend(operator_residuals(make_W_series(0.0, N, ctx), DifferenceOperator.identity(ctx), zs))
        log.draws = len(zs)
    return IdentityReport.from_log("intertwiner", "W(0) = id", "zero spectral parameter", log, pol.rel_tol, sw.ms)


def check_normalization(lams: Iterable[complex], ctx: ModuliContext, tol: float = 1e-12) -> IdentityReport:
    """The two closed forms of rho_0 and hence of c(lam) agree."""
    with Stopwatch() as sw:
        g = gamma_constants(ctx)
        log = ResidualLog()
        log.add(rel_residual(g.rho0, g.rho0_alt))
        for lam in lams:
            log.add(rel_residual(c_norm(lam, ctx), c_norm(lam, ctx, alt=True)))
        log.draws = len(log.values)
    return IdentityReport.from_log("intertwiner", "rho_0 dual closed forms", "normalization constant rho_0", log, tol, sw.ms)
