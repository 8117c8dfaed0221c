"""Seeded residual checks for the theta, gamma and hypergeometric layers."""

from __future__ import annotations

import cmath
import math
import zlib

import numpy as np

from ..context import ModuliContext
from ..report import IdentityReport, ResidualLog, Stopwatch, rel_residual
from .gamma import (
    elliptic_gamma,
    elliptic_gamma_general,
    gamma_constants,
    gamma_modular,
    gamma_ratio,
    gamma_reflection,
    gamma_residue,
    gamma_shift,
    modular_polynomial,
)
from .hypergeometric import (
    TERMINATING,
    OmegaParams,
    elliptic_binomial,
    elliptic_factorial,
    jackson_sum,
    omega_series,
    pochhammer,
)
from .theta import jacobi_theta, theta, theta1, theta_bar, theta_modular

PI = math.pi

#: second modulus for the modular check; (tau, 2 eta) itself has Im(tau'/tau) < 0
MODULAR_SIGMA = -0.1 + 0.5j


def rng_for(ctx: ModuliContext, label: str, salt: int = 0) -> np.random.Generator:
    return np.random.default_rng([ctx.seed, salt, zlib.crc32(label.encode())])


def draw(rng: np.random.Generator, n: int, re: float = 0.5, im: float = 0.5) -> list[complex]:
    return [complex(rng.uniform(-re, re), rng.uniform(-im, im)) for _ in range(n)]


def _report(suite: str, identity: str, anchor: str, log: ResidualLog, tol: float, ms: float, **details) -> IdentityReport:
    return IdentityReport.from_log(suite, identity, anchor, log, tol, ms, **details)


# --- theta functions ----------------------------------------------------------


def check_periods(ctx: ModuliContext, n: int = 200, tol: float = 1e-10, salt: int = 0) -> IdentityReport:
    """theta_a(x +- 1) and theta_a(x +- tau) against the quasi-periodicity factors."""
    tau = ctx.tau
    with Stopwatch() as sw:
        rng = rng_for(ctx, "periods", salt)
        log = ResidualLog()
        for x in draw(rng, n):
            for a in (1, 2, 3, 4):
                T = lambda w: jacobi_theta(a, w, tau, ctx.eps_term, ctx.k_max)
                base = T(x)
                s1 = -1 if a in (1, 2) else 1
                st = -1 if a in (1, 4) else 1
                res = [rel_residual(T(x + pm), s1 * base) for pm in (1, -1)]
                for pm in (1, -1):
                    factor = st * cmath.exp(-1j * PI * tau - pm * 2j * PI * x)
                    res.append(rel_residual(T(x + pm * tau), factor * base))
                log.add(max(res))
        log.draws = n
    return _report("theta", "theta_a(x +- 1), theta_a(x +- tau) quasi-periodicity", "shifts by the periods", log, tol, sw.ms)


def check_modular(ctx: ModuliContext, n: int = 100, tol: float = 1e-10, salt: int = 0) -> IdentityReport:
    """theta_a(z|tau) by direct series against the -1/tau side, for plain and barred variants."""
    from .theta import ThetaIndex

    with Stopwatch() as sw:
        rng = rng_for(ctx, "modular", salt)
        log = ResidualLog()
        for z in draw(rng, n):
            res = []
            for a in (1, 2, 3, 4):
                for half in (False, True):
                    idx = ThetaIndex(a, half)
                    res.append(rel_residual(theta(idx, z, ctx), theta_modular(idx, z, ctx)))
            log.add(max(res))
        log.draws = n
    return _report("theta", "theta_a(z|tau) = modular transform from -1/tau", "modular transformation of theta", log, tol, sw.ms)


def theta_product(z: complex, tau: complex, k_max: int = 200) -> complex:
    """theta_1 from its infinite product, an oracle independent of the series."""
    q = cmath.exp(2j * PI * tau)
    u = cmath.exp(2j * PI * z)
    prod = 1.0 + 0j
    qk = 1.0 + 0j
    for _ in range(k_max):
        # qk = q^{k-1}
        prod *= (1 - qk * q) * (1 - qk * u) * (1 - qk * q / u)
        qk *= q
        if abs(qk) < 1e-18:
            break
    return 1j * cmath.exp(1j * PI * tau / 4 - 1j * PI * z) * prod


def check_series_oracles(ctx: ModuliContext, n: int = 100, tol: float = 1e-10, salt: int = 0) -> IdentityReport:
    """Adaptive series against the product form of theta_1 and a fixed [-50, 50] sum of theta_3."""
    tau = ctx.tau
    with Stopwatch() as sw:
        rng = rng_for(ctx, "series-oracles", salt)
        log = ResidualLog()
        ks = np.arange(-50, 51)
        for z in draw(rng, n):
            brute3 = complex(np.sum(np.exp(1j * PI * tau * ks**2 + 2j * PI * z * ks)))
            log.add(max(rel_residual(theta1(z, ctx), theta_product(z, tau)), rel_residual(theta(3, z, ctx), brute3)))
        log.draws = n
    return _report("theta", "adaptive theta series = product form and brute-force sum", "theta function definitions", log, tol, sw.ms)


def theta34_sides(x: complex, y: complex, ctx: ModuliContext) -> list[tuple[complex, complex, float]]:
    """(lhs, rhs, scale) for the four bilinear relations between barred and plain thetas."""
    b3x, b4x, b3y, b4y = (theta_bar(a, w, ctx) for w in (x, y) for a in (3, 4))
    T = lambda a, w: theta(a, w, ctx)
    out = []
    for a, p, q, sign in (
        (4, b4x * b3y, b4y * b3x, 1),
        (1, b4x * b3y, b4y * b3x, -1),
        (3, b3x * b3y, b4y * b4x, 1),
        (2, b3x * b3y, b4y * b4x, -1),
    ):
        out.append((p + sign * q, 2 * T(a, x + y) * T(a, x - y), abs(p) + abs(q)))
    return out


def check_theta34(ctx: ModuliContext, n: int = 100, tol: float = 1e-10, salt: int = 0) -> IdentityReport:
    with Stopwatch() as sw:
        rng = rng_for(ctx, "theta34", salt)
        log = ResidualLog()
        for _ in range(n):
            x, y = draw(rng, 2)
            log.add(max(rel_residual(l, r, s) for l, r, s in theta34_sides(x, y, ctx)))
        log.draws = n
    return _report("theta", "bilinear barred-theta relations (four lines)", "theta-function product identities", log, tol, sw.ms)


def fay_sides(z: complex, a: complex, b: complex, c: complex, d: complex, ctx: ModuliContext) -> tuple[complex, complex, float]:
    T = lambda w: theta1(w, ctx)
    t1 = T(z - a - d) * T(z - b - c) * T(a - d) * T(c - b)
    t2 = T(z - b - d) * T(z - a - c) * T(b - d) * T(a - c)
    rhs = T(z - c - d) * T(z - a - b) * T(a - b) * T(c - d)
    return t1 + t2, rhs, abs(t1) + abs(t2)


def check_fay(ctx: ModuliContext, n: int = 100, tol: float = 1e-10, salt: int = 0) -> IdentityReport:
    with Stopwatch() as sw:
        rng = rng_for(ctx, "fay", salt)
        log = ResidualLog()
        for _ in range(n):
            log.add(rel_residual(*fay_sides(*draw(rng, 5), ctx)))
        log.draws = n
    return _report("theta", "three-term Fay identity", "Fay trisecant identity", log, tol, sw.ms)


def check_theta_space(ctx: ModuliContext, n: int = 100, tol: float = 1e-9, salt: int = 0) -> IdentityReport:
    """F = prod theta_1(x - x_i) with sum x_i = 0 picks up (-1)^n under x -> x+1 and the order-n multiplier under x -> x+tau.

    For even n (the only case the Sklyanin representations use) this is plain 1-periodicity.
    """
    tau = ctx.tau
    with Stopwatch() as sw:
        rng = rng_for(ctx, "theta-space", salt)
        log = ResidualLog()
        for _ in range(n):
            order = int(rng.integers(1, 7))
            pts = draw(rng, order, 0.4, 0.3)
            pts[-1] -= sum(pts)
            (x,) = draw(rng, 1)
            F = lambda w: math.prod((theta1(w - p, ctx) for p in pts), start=1.0 + 0j)
            mult = (-1) ** order * cmath.exp(-1j * PI * order * tau - 2j * PI * order * x)
            log.add(max(rel_residual(F(x + 1), (-1) ** order * F(x)), rel_residual(F(x + tau), mult * F(x))))
        log.draws = n
    return _report("theta", "products with zero-sum zeros lie in the order-n theta space", "theta functions of order n", log, tol, sw.ms)


# --- elliptic gamma function ----------------------------------------------------


def check_gamma_shifts(ctx: ModuliContext, n: int = 100, tol: float = 1e-10, salt: int = 0) -> IdentityReport:
    """Gamma(z+1) = Gamma(z); Gamma(z+tau), Gamma(z+2eta) by direct products against the shift factors."""
    with Stopwatch() as sw:
        rng = rng_for(ctx, "gamma-shifts", salt)
        log = ResidualLog()
        per = {"1": 0.0, "tau": 0.0, "2eta": 0.0}
        for z in draw(rng, n, 0.5, 0.2):
            for direction, step in (("1", 1.0), ("tau", ctx.tau), ("2eta", ctx.two_eta)):
                r = rel_residual(elliptic_gamma(z + step, ctx), gamma_shift(z, direction, ctx))
                per[direction] = max(per[direction], r)
            log.add(max(per.values()))
        log.draws = n
    return _report("gamma", "Gamma shifts by 1, tau and 2 eta", "quasi-periodicity of the elliptic gamma function", log, tol, sw.ms, per_shift=per)


def check_gamma_reflection(ctx: ModuliContext, n: int = 100, tol: float = 1e-10, salt: int = 0) -> IdentityReport:
    with Stopwatch() as sw:
        rng = rng_for(ctx, "gamma-reflection", salt)
        log = ResidualLog()
        for z in draw(rng, n, 0.5, 0.2):
            lhs = elliptic_gamma(z, ctx) * elliptic_gamma(ctx.two_eta - z, ctx)
            log.add(rel_residual(lhs, gamma_reflection(z, ctx)))
        log.draws = n
    return _report("gamma", "Gamma(z) Gamma(2eta - z) = theta_1 closed form", "reflection of the elliptic gamma function", log, tol, sw.ms)


def check_gamma_inversion(ctx: ModuliContext, n: int = 100, tol: float = 1e-10, salt: int = 0) -> IdentityReport:
    with Stopwatch() as sw:
        rng = rng_for(ctx, "gamma-inversion", salt)
        log = ResidualLog()
        for z in draw(rng, n, 0.5, 0.2):
            lhs = elliptic_gamma(z, ctx) * elliptic_gamma(ctx.tau + ctx.two_eta - z, ctx)
            log.add(rel_residual(lhs, 1.0))
        log.draws = n
    return _report("gamma", "Gamma(z) Gamma(tau + 2eta - z) = 1", "inversion of the elliptic gamma function", log, tol, sw.ms)


def check_gamma_ratios(ctx: ModuliContext, n: int = 100, k_max: int = 8, tol: float = 1e-9, salt: int = 0) -> IdentityReport:
    """Gamma(x +- 2k eta)/Gamma(x) closed forms against direct products, k = 0..k_max."""
    e = ctx.two_eta
    with Stopwatch() as sw:
        rng = rng_for(ctx, "gamma-ratios", salt)
        log = ResidualLog()
        for x in draw(rng, n, 0.5, 0.2):
            g = elliptic_gamma(x, ctx)
            res = []
            for k in range(k_max + 1):
                res.append(rel_residual(elliptic_gamma(x + k * e, ctx) / g, gamma_ratio(x, k, ctx)))
                res.append(rel_residual(elliptic_gamma(x - k * e, ctx) / g, gamma_ratio(x, -k, ctx)))
            log.add(max(res))
        log.draws = n
    return _report("gamma", f"Gamma(x +- 2k eta)/Gamma(x) closed forms, k <= {k_max}", "gamma ratios as theta products", log, tol, sw.ms)


def check_gamma_pochhammer(ctx: ModuliContext, n: int = 100, k_max: int = 8, tol: float = 1e-9, salt: int = 0) -> IdentityReport:
    """Ratios Gamma(2 alpha eta +- 2k eta)/Gamma(2 beta eta +- 2k eta) through Pochhammer symbols."""
    eta = ctx.eta
    G = lambda w: elliptic_gamma(w, ctx)
    with Stopwatch() as sw:
        rng = rng_for(ctx, "gamma-pochhammer", salt)
        log = ResidualLog()
        for _ in range(n):
            # alpha, beta in units of 2 eta; keep 2 alpha eta away from the real axis
            a, b = draw(rng, 2, 1.0, 0.6)
            base = G(2 * a * eta) / G(2 * b * eta)
            res = []
            for k in range(k_max + 1):
                up = G(2 * a * eta + 2 * k * eta) / G(2 * b * eta + 2 * k * eta)
                up_form = cmath.exp(2j * PI * (a - b) * k * eta) * base * pochhammer(a, k, ctx) / pochhammer(b, k, ctx)
                down = G(2 * a * eta - 2 * k * eta) / G(2 * b * eta - 2 * k * eta)
                down_form = cmath.exp(-2j * PI * (a - b) * k * eta) * base * pochhammer(1 - b, k, ctx) / pochhammer(1 - a, k, ctx)
                res += [rel_residual(up, up_form), rel_residual(down, down_form)]
            log.add(max(res))
        log.draws = n
    return _report("gamma", f"gamma ratios via Pochhammer symbols, k <= {k_max}", "gamma ratios as Pochhammer symbols", log, tol, sw.ms)


def residue_by_contour(pole: complex, radius: float, phase: float, ctx: ModuliContext, m: int = 16) -> complex:
    """(1/2 pi i) contour integral of Gamma around ``pole`` by the trapezoid rule on a circle."""
    total = 0j
    for j in range(m):
        w = radius * cmath.exp(1j * (phase + 2 * PI * j / m))
        total += w * elliptic_gamma(pole + w, ctx)
    return total / m


def check_gamma_residues(ctx: ModuliContext, n: int = 100, k_top: int = 4, tol: float = 1e-8, salt: int = 0) -> IdentityReport:
    """Closed-form residues at -2k eta against seeded circle quadratures (random radius and phase)."""
    with Stopwatch() as sw:
        rng = rng_for(ctx, "gamma-residues", salt)
        log = ResidualLog()
        for i in range(n):
            k = i % (k_top + 1)
            radius = float(rng.uniform(5e-3, 2e-2))
            phase = float(rng.uniform(0, 2 * PI))
            log.add(rel_residual(residue_by_contour(-2 * k * ctx.eta, radius, phase, ctx), gamma_residue(k, ctx)))
        log.draws = n
    return _report("gamma", f"residues of Gamma at -2k eta, k <= {k_top}", "residues of the elliptic gamma function", log, tol, sw.ms)


def check_gamma_modular(ctx: ModuliContext, n: int = 100, tol: float = 1e-8, sigma: complex = MODULAR_SIGMA, salt: int = 0) -> IdentityReport:
    """Gamma(z|tau, tau') through the modular formula against the double product."""
    tau = ctx.tau
    with Stopwatch() as sw:
        rng = rng_for(ctx, "gamma-modular", salt)
        log = ResidualLog()
        for z in draw(rng, n, 0.5, 0.2):
            direct = elliptic_gamma_general(z, tau, sigma, ctx.eps_term, ctx.k_max)
            log.add(rel_residual(gamma_modular(z, ctx, tau, sigma), direct))
        log.draws = n
    return _report("gamma", "modular transform of Gamma = double product", "modular transformation of the elliptic gamma function", log, tol, sw.ms, sigma=str(sigma))


def check_modular_polynomial(ctx: ModuliContext, tol: float = 1e-12) -> IdentityReport:
    """P(0) constant term and vanishing fourth divided difference of the cubic."""
    tau, s = ctx.tau, MODULAR_SIGMA
    with Stopwatch() as sw:
        log = ResidualLog()
        const = -(tau + s - 1) * (tau + s - tau * s) / (12 * tau * s)
        log.add(rel_residual(modular_polynomial(0, tau, s), const))
        h = 0.3
        vals = [modular_polynomial(0.1 + j * h, tau, s) for j in range(5)]
        fourth = vals[0] - 4 * vals[1] + 6 * vals[2] - 4 * vals[3] + vals[4]
        log.add(abs(fourth) / max(abs(v) for v in vals))
        log.draws = 2
    return _report("gamma", "P(0) constant term; P is cubic", "modular exponent polynomial", log, tol, sw.ms)


def product_oracle(z: complex, tau: complex, sigma: complex, size: int = 200) -> complex:
    """Fixed size x size truncation of the defining double product."""
    k = np.arange(size)[:, None]
    kp = np.arange(size)[None, :]
    num = 1 - np.exp(2j * PI * ((k + 1) * tau + (kp + 1) * sigma - z))
    den = 1 - np.exp(2j * PI * (k * tau + kp * sigma + z))
    return complex(np.prod(num / den))


def check_gamma_oracle(ctx: ModuliContext, n: int = 100, tol: float = 1e-10, salt: int = 0) -> IdentityReport:
    with Stopwatch() as sw:
        rng = rng_for(ctx, "gamma-oracle", salt)
        log = ResidualLog()
        zs = [0.4 + 0j] + draw(rng, n - 1, 0.5, 0.2)
        for z in zs:
            log.add(rel_residual(elliptic_gamma(z, ctx), product_oracle(z, ctx.tau, ctx.two_eta)))
        log.draws = n
    return _report("gamma", "adaptive Gamma product = fixed 200x200 truncation", "elliptic gamma function definition", log, tol, sw.ms)


def check_rho0(ctx: ModuliContext, tol: float = 1e-12) -> IdentityReport:
    with Stopwatch() as sw:
        g = gamma_constants(ctx)
        log = ResidualLog()
        log.add(rel_residual(g.rho0, g.rho0_alt))
        log.draws = 1
    return _report("gamma", "rho_0 by its two closed forms", "normalization constant rho_0", log, tol, sw.ms)


# --- Pochhammer symbols and elliptic hypergeometric series --------------------


def balanced_draw(rng: np.random.Generator, n: int) -> tuple[complex, complex, complex, complex, complex]:
    """(alpha_1, alpha_4..alpha_7) with 2 alpha_1 + 1 = alpha_4 + ... + alpha_7 - n."""
    a1, a4, a5, a6 = draw(rng, 4, 1.5, 1.0)
    a7 = 2 * a1 + 1 - a4 - a5 - a6 + n
    return a1, a4, a5, a6, a7


def eight_omega_seven(a1, a4, a5, a6, a7, n: int, ctx: ModuliContext):
    return omega_series(OmegaParams(7, a1, (a4, a5, a6, a7, -n)), TERMINATING, ctx)


def check_frenkel_turaev(ctx: ModuliContext, n_draws: int = 50, n_max: int = 10, tol: float = 1e-8, salt: int = 0) -> IdentityReport:
    """Terminating balanced 8omega7 against the Jackson closed form for n = 0..n_max."""
    with Stopwatch() as sw:
        rng = rng_for(ctx, "frenkel-turaev", salt)
        log = ResidualLog()
        for _ in range(n_draws):
            res = []
            for n in range(n_max + 1):
                a1, a4, a5, a6, a7 = balanced_draw(rng, n)
                s = eight_omega_seven(a1, a4, a5, a6, a7, n, ctx)
                res.append(rel_residual(s.value, jackson_sum(a1, a4, a5, a6, a7, n, ctx)))
            log.add(max(res))
        log.draws = n_draws
    return _report("hypergeo", f"Frenkel-Turaev sum, balanced terminating 8omega7, n <= {n_max}", "Jackson summation", log, tol, sw.ms)


def check_pochhammer_basics(ctx: ModuliContext, n: int = 100, tol: float = 1e-12, salt: int = 0) -> IdentityReport:
    """[x]_0 = 1, [x]_1 = theta_1(2x eta), factorial and binomial against direct products."""
    with Stopwatch() as sw:
        rng = rng_for(ctx, "pochhammer", salt)
        log = ResidualLog()
        fac = [elliptic_factorial(m, ctx) for m in range(7)]
        direct = [math.prod((theta1(2 * j * ctx.eta, ctx) for j in range(1, m + 1)), start=1.0 + 0j) for m in range(7)]
        log.add(rel_residual(fac, direct))
        for m in range(5):
            log.add(rel_residual(elliptic_binomial(4, m, ctx), direct[4] / (direct[m] * direct[4 - m])))
        for x in draw(rng, n, 1.5, 1.0):
            log.add(max(
                rel_residual(pochhammer(x, 0, ctx), 1.0),
                rel_residual(pochhammer(x, 1, ctx), theta1(2 * x * ctx.eta, ctx)),
                rel_residual(pochhammer(x, 5, ctx), pochhammer(x, 2, ctx) * pochhammer(x + 2, 3, ctx)),
            ))
        log.draws = n
    return _report("hypergeo", "elliptic Pochhammer symbols, factorials, binomials", "elliptic Pochhammer symbols", log, tol, sw.ms)


def check_two_term_sum(ctx: ModuliContext, n: int = 100, tol: float = 1e-10, salt: int = 0) -> IdentityReport:
    """n = 1: the explicit two-term 8omega7 equals the closed form."""
    with Stopwatch() as sw:
        rng = rng_for(ctx, "two-term", salt)
        log = ResidualLog()
        for _ in range(n):
            a1, a4, a5, a6, a7 = balanced_draw(rng, 1)
            B = lambda x: theta1(2 * x * ctx.eta, ctx)
            # k = 1 term: [a1+2]/[a1] * [a1][a4][a5][a6][a7][-1] / ([1][a1-a4+1]...[a1-a7+1][a1+2])
            num = B(a4) * B(a5) * B(a6) * B(a7) * B(-1)
            den = B(1) * B(a1 - a4 + 1) * B(a1 - a5 + 1) * B(a1 - a6 + 1) * B(a1 - a7 + 1)
            two = 1 + num / den
            log.add(rel_residual(two, jackson_sum(a1, a4, a5, a6, a7, 1, ctx)))
        log.draws = n
    return _report("hypergeo", "two-term 8omega7 = closed form at n = 1", "Jackson summation", log, tol, sw.ms)


def check_normalization_sum_vanishes(ctx: ModuliContext, n_max: int = 6, tol: float = 1e-12) -> IdentityReport:
    """With alpha_6 = alpha_1 - alpha_5 + n the closed form carries [1-n]_n, so both sides vanish for n >= 1."""
    with Stopwatch() as sw:
        rng = rng_for(ctx, "vanishing", 0)
        log = ResidualLog()
        for n in range(1, n_max + 1):
            a1, a4, a5 = draw(rng, 3, 1.5, 1.0)
            a6 = a1 - a5 + n
            a7 = 2 * a1 + 1 - a4 - a5 - a6 + n
            s = eight_omega_seven(a1, a4, a5, a6, a7, n, ctx)
            scale = sum(abs(t) for t in s.terms)
            log.add(max(abs(s.value) / scale, abs(jackson_sum(a1, a4, a5, a6, a7, n, ctx))))
        log.draws = n_max
    return _report("hypergeo", "8omega7 containing [1-n]_n vanishes for n >= 1", "vanishing terminating sums", log, tol, sw.ms)


def check_balancing_detector(ctx: ModuliContext, n: int = 100, salt: int = 0) -> IdentityReport:
    """is_balanced on balanced draws and on perturbed ones; residual counts misclassifications."""
    with Stopwatch() as sw:
        rng = rng_for(ctx, "balancing", salt)
        log = ResidualLog()
        for _ in range(n):
            m = int(rng.integers(0, 6))
            a1, a4, a5, a6, a7 = balanced_draw(rng, m)
            good = OmegaParams(7, a1, (a4, a5, a6, a7, -m))
            bad = OmegaParams(7, a1, (a4, a5, a6, a7 + 1e-3, -m))
            ok = good.is_balanced and not bad.is_balanced and good.termination_order == m
            log.add(0.0 if ok else 1.0)
        log.draws = n
    return _report("hypergeo", "balancing and termination detection", "balanced terminating series", log, 0.0, sw.ms)


THETA_CHECKS = (check_periods, check_modular, check_series_oracles, check_theta34, check_fay, check_theta_space)
GAMMA_CHECKS = (
    check_gamma_shifts,
    check_gamma_reflection,
    check_gamma_inversion,
    check_gamma_ratios,
    check_gamma_pochhammer,
    check_gamma_residues,
    check_gamma_modular,
    check_modular_polynomial,
    check_gamma_oracle,
    check_rho0,
)
HYPERGEO_CHECKS = (check_frenkel_turaev, check_two_term_sum, check_pochhammer_basics, check_normalization_sum_vanishes, check_balancing_detector)
