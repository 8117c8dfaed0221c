"""Seeded checks of the comb calculus: pairing, action, transposition, composition."""

from __future__ import annotations

import zlib

import numpy as np

from ..context import ModuliContext
from ..elliptic.theta import theta1
from ..report import IdentityReport, ResidualLog, Stopwatch, rel_residual
from .comb import Comb, combs_residual, dumps, loads, pair
from .operator import (
    DifferenceOperator,
    SampledEqualityPolicy,
    apply,
    compose,
    from_kernel,
    operator_residuals,
    sample_points,
    transpose,
)

SUITE = "comb"


def _rng(pol: SampledEqualityPolicy, ctx: ModuliContext, label: str) -> np.random.Generator:
    return np.random.default_rng([ctx.seed, pol.salt, zlib.crc32(label.encode())])


def _c(rng: np.random.Generator, scale: float = 0.4) -> complex:
    return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))


def random_operator(rng: np.random.Generator, ctx: ModuliContext, n_terms: int = 3) -> DifferenceOperator:
    """Operator with coefficients a_k theta_1(z - b_k) + c_k on indices 0..n_terms-1."""
    mu = _c(rng, 0.2)
    terms = {}
    for k in range(n_terms):
        a, b, c = _c(rng, 1.0), _c(rng), _c(rng, 0.3)
        terms[k] = lambda z, a=a, b=b, c=c: a * theta1(z - b, ctx) + c
    return DifferenceOperator(mu, terms, ctx)


def random_comb(rng: np.random.Generator, ctx: ModuliContext, nu: complex, lo: int, hi: int, finiteness: str = "finite") -> Comb:
    return Comb(nu, {k: _c(rng, 1.0) for k in range(lo, hi + 1)}, finiteness, ctx.eta)


def probe_function(ctx: ModuliContext):
    return lambda z: theta1(z + 0.17 - 0.05j, ctx) * theta1(2 * z - 0.1j, ctx)


def _report(identity: str, anchor: str, log: ResidualLog, tol: float, ms: float) -> IdentityReport:
    return IdentityReport.from_log(SUITE, identity, anchor, log, tol, ms)


def check_pairing(pol: SampledEqualityPolicy, ctx: ModuliContext) -> IdentityReport:
    """(F, delta(z-a)) = F(a), delta-delta pairing and comb-comb pairing by enumeration."""
    with Stopwatch() as sw:
        rng = _rng(pol, ctx, "pairing")
        log = ResidualLog()
        F = lambda z: theta1(2 * z, ctx)
        log.add(rel_residual(pair(F, Comb.delta(0.3, ctx)), theta1(0.6, ctx)))
        log.add(rel_residual(pair(Comb.delta(0.3, ctx), Comb.delta(0.3, ctx)), 1.0))
        log.add(abs(pair(Comb.delta(0.3, ctx), Comb.delta(0.3 + 0.01, ctx))))
        for _ in range(pol.n_samples):
            nu = _c(rng)
            shift = int(rng.integers(-3, 4))
            f = random_comb(rng, ctx, nu, 0, 6, "left-finite")
            g = random_comb(rng, ctx, nu + 2 * shift * ctx.eta, -6, 0, "right-finite")
            brute = 0j
            # enumerate support points of f and g and match them explicitly
            for j, fj in f.coeffs.items():
                for k, gk in g.coeffs.items():
                    if abs(f.support(j) - g.support(k)) < 1e-9:
                        brute += fj * gk
            scale = sum(abs(v) for v in f.coeffs.values()) * max(abs(v) for v in g.coeffs.values())
            log.add(rel_residual(pair(f, g), brute, scale))
            # linearity: (F, sum_k f_k delta) = sum_k f_k F(support_k)
            expect = sum((c * F(f.support(k)) for k, c in f.coeffs.items()), 0j)
            log.add(rel_residual(pair(F, f), expect))
        log.draws = pol.n_samples
    return _report("delta pairing of functions and combs", "pairing of combs", log, 1e-12, sw.ms)


def check_adjoint(pol: SampledEqualityPolicy, ctx: ModuliContext, n: int = 20) -> IdentityReport:
    """(f, D g) = (D^t f, g) for random operators and combs f (left-finite), g (finite)."""
    with Stopwatch() as sw:
        rng = _rng(pol, ctx, "adjoint")
        log = ResidualLog()
        for _ in range(n):
            D = random_operator(rng, ctx)
            g = random_comb(rng, ctx, _c(rng), 0, 4)
            Dg = apply(D, g)
            # put f on the support lattice of D g so the pairing is non-trivial
            f = random_comb(rng, ctx, Dg.nu + 2 * int(rng.integers(-2, 3)) * ctx.eta, -2, 8, "left-finite")
            lhs = pair(f, Dg)
            rhs = pair(apply(transpose(D), f), g)
            scale = sum(abs(fv * dv) for fv in f.coeffs.values() for dv in Dg.coeffs.values())
            log.add(rel_residual(lhs, rhs, scale))
        log.draws = n
    return _report("(f, D g) = (D^t f, g)", "transposed difference operator", log, 1e-10, sw.ms)


def check_transpose_involution(pol: SampledEqualityPolicy, ctx: ModuliContext, n: int = 20) -> IdentityReport:
    with Stopwatch() as sw:
        rng = _rng(pol, ctx, "transpose")
        zs = sample_points(pol, ctx)
        log = ResidualLog()
        for _ in range(n):
            D = random_operator(rng, ctx)
            log.extend(operator_residuals(transpose(transpose(D)), D, zs))
        # (c(z) e^{a d})^t = e^{-a d} c(z): coefficient c(z - a) at shift -a
        a = 0.13 + 0.02j
        c = lambda z: theta1(z + 0.2, ctx)
        T = transpose(DifferenceOperator(a, {0: c}, ctx))
        log.extend(rel_residual(T.coefficient(0, z), c(z - a)) for z in zs)
        log.draws = n
    return _report("(D^t)^t = D", "transposition anti-automorphism", log, 1e-12, sw.ms)


def check_kernel_column(pol: SampledEqualityPolicy, ctx: ModuliContext, n: int = 20) -> IdentityReport:
    """D applied to delta(z - zeta_0) equals column zeta_0 of the kernel; kernel rows rebuild D."""
    with Stopwatch() as sw:
        rng = _rng(pol, ctx, "kernel")
        zs = sample_points(pol, ctx)
        log = ResidualLog()
        for _ in range(n):
            D = random_operator(rng, ctx)
            zeta0 = _c(rng)
            log.add(combs_residual(apply(D, Comb.delta(zeta0, ctx)), D.kernel_column(zeta0)))
            back = from_kernel(D.kernel, D.mu, D.indices, ctx)
            f = probe_function(ctx)
            log.extend(rel_residual(apply(back, f)(z), apply(D, f)(z)) for z in zs[:4])
        log.draws = n
    return _report("operator action on delta = kernel column; kernel -> operator round trip", "kernel of a difference operator", log, 1e-12, sw.ms)


def check_composition(pol: SampledEqualityPolicy, ctx: ModuliContext, n: int = 20) -> IdentityReport:
    """compose(D2, D1) against sequential application, and associativity."""
    with Stopwatch() as sw:
        rng = _rng(pol, ctx, "compose")
        zs = sample_points(pol, ctx)[:6]
        f = probe_function(ctx)
        log = ResidualLog()
        for _ in range(n):
            A, B, C = (random_operator(rng, ctx) for _ in range(3))
            seq = apply(A, apply(B, f))
            AB = compose(A, B)
            log.extend(rel_residual(apply(AB, f)(z), seq(z)) for z in zs)
            log.extend(operator_residuals(compose(AB, C), compose(A, compose(B, C)), zs))
            g = random_comb(rng, ctx, _c(rng), 0, 3)
            log.add(combs_residual(apply(AB, g), apply(A, apply(B, g))))
        log.draws = n
    return _report("D2 D1 = sequential application; associativity", "composition of difference operators", log, 1e-10, sw.ms)


def check_sandwich(pol: SampledEqualityPolicy, ctx: ModuliContext, n: int = 20) -> IdentityReport:
    """Kernel of F D G is F(z) D(z, zeta) G(zeta)."""
    with Stopwatch() as sw:
        rng = _rng(pol, ctx, "sandwich")
        zs = sample_points(pol, ctx)[:6]
        F = lambda z: theta1(z - 0.1, ctx)
        G = lambda z: theta1(2 * z + 0.3j, ctx)
        log = ResidualLog()
        for _ in range(n):
            D = random_operator(rng, ctx)
            FDG = compose(DifferenceOperator.multiplication(F, ctx), compose(D, DifferenceOperator.multiplication(G, ctx)))
            for z in zs:
                row, ref = FDG.kernel(z), D.kernel(z)
                ref = ref.map_coeffs(lambda zeta, c: F(z) * c * G(zeta))
                log.add(combs_residual(row, ref))
        log.draws = n
    return _report("kernel of F D G = F(z) D(z, zeta) G(zeta)", "kernel of a conjugated operator", log, 1e-12, sw.ms)


def check_serialization(pol: SampledEqualityPolicy, ctx: ModuliContext, n: int = 20) -> IdentityReport:
    """dumps/loads reproduce offsets and coefficients bit for bit."""
    with Stopwatch() as sw:
        rng = _rng(pol, ctx, "serialization")
        log = ResidualLog()
        for _ in range(n):
            c = random_comb(rng, ctx, _c(rng), int(rng.integers(-4, 1)), int(rng.integers(0, 5)))
            back = loads(dumps(c), ctx)
            log.add(0.0 if (back.nu == c.nu and back.coeffs == c.coeffs) else 1.0)
        log.draws = n
    return _report("comb text round trip", "comb serialization", log, 0.0, sw.ms)


CHECKS = (check_pairing, check_adjoint, check_transpose_involution, check_kernel_column, check_composition, check_sandwich, check_serialization)


def check_all(pol: SampledEqualityPolicy, ctx: ModuliContext) -> list[IdentityReport]:
    return [f(pol, ctx) for f in CHECKS]
