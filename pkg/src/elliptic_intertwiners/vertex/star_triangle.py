"""Star-triangle relations for the two kinds of W-vertices.

Both sides of either relation are combs in z'' supported on
z'' = z - lam + nu + 2n eta. The left side is a single product; the right
side is a finite sum over the intermediate support, exact for n <= N.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from ..combs import SampledEqualityPolicy
from ..context import ModuliContext
from ..elliptic import (
    TERMINATING,
    OmegaParams,
    elliptic_gamma,
    jackson_balanced,
    jackson_sum,
    omega_series,
    omega_terms,
    pochhammer,
    theta1,
)
from ..errors import BalanceViolation
from ..report import IdentityReport, ResidualLog, Stopwatch, rel_residual
from .draws import draw, rng_for
from .weights import c_norm, comb_vertex_W, vertex_W

SUITE = "star-triangle"
PI = math.pi


@dataclass(frozen=True)
class StarParams:
    z: complex
    zp: complex
    lam: complex
    mu: complex
    nu: complex

    @classmethod
    def draw(cls, rng) -> StarParams:
        return cls(*draw(rng, 5))


def lower(p: StarParams, n: int, ctx: ModuliContext) -> complex:
    return p.z - p.lam + p.nu + 2 * n * ctx.eta


# --- direct coefficients -----------------------------------------------------------


def first_sides(p: StarParams, n: int, ctx: ModuliContext) -> tuple[complex, complex, float]:
    """Coefficient n of both sides of the first relation, and the right side's magnitude."""
    z, zp, lam, mu, nu = p.z, p.zp, p.lam, p.mu, p.nu
    Wln = comb_vertex_W(lam - nu, n, ctx)
    Wlm = comb_vertex_W(lam - mu, n, ctx)
    Wmn = comb_vertex_W(mu - nu, n, ctx)
    zpp = lower(p, n, ctx)
    lhs = vertex_W(zp, z, mu - nu, ctx) * vertex_W(zp, zpp, lam - mu, ctx) * Wln.weight(z, zpp)
    terms = []
    for k in range(n + 1):
        zeta = Wlm.lower(z, k)
        terms.append(Wlm.weight(z, zeta) * vertex_W(zp, zeta, lam - nu, ctx) * Wmn.weight(zeta, zpp))
    return lhs, sum(terms), sum(abs(t) for t in terms)


def second_sides(p: StarParams, n: int, ctx: ModuliContext) -> tuple[complex, complex, float]:
    z, zp, lam, mu, nu = p.z, p.zp, p.lam, p.mu, p.nu
    Wln = comb_vertex_W(lam - nu, n, ctx)
    Wmn = comb_vertex_W(mu - nu, n, ctx)
    Wlm = comb_vertex_W(lam - mu, n, ctx)
    zpp = lower(p, n, ctx)
    lhs = vertex_W(z, zp, lam - mu, ctx) * vertex_W(zpp, zp, mu - nu, ctx) * Wln.weight(z, zpp)
    terms = []
    for k in range(n + 1):
        zeta = Wmn.lower(z, k)
        terms.append(Wmn.weight(z, zeta) * vertex_W(zeta, zp, lam - nu, ctx) * Wlm.weight(zeta, zpp))
    return lhs, sum(terms), sum(abs(t) for t in terms)


# --- expanded forms of the first relation ------------------------------------------------


def C_coefficient(p: StarParams, n: int, ctx: ModuliContext) -> complex:
    """Left coefficient with c(lam - nu) stripped, written through gamma functions and Pochhammers."""
    z, zp, lam, mu, nu, e = p.z, p.zp, p.lam, p.mu, p.nu, ctx.eta
    G = lambda x: elliptic_gamma(x, ctx)
    P = lambda x: pochhammer(x, n, ctx)
    ex = cmath.exp(-2j * PI / e * ((lam - nu) * zp - (lam - nu + e) * z + (lam - nu) * (lam - nu + e)))
    ex *= theta1(2 * z - 2 * lam + 2 * nu + 4 * n * e, ctx)
    g = G(2 * nu - 2 * lam) * G(2 * z - 2 * lam + 2 * nu) * G(z + zp + mu - nu + e) * G(zp - z + 2 * lam - mu - nu + e)
    g /= G(2 * e) * G(2 * z + 2 * e) * G(z + zp - 2 * lam + mu + nu + e) * G(zp - z - mu + nu + e)
    num = P((z - lam + nu) / e) * P((nu - lam) / e) * P((z + zp + nu - mu + e) / (2 * e)) * P((z - zp + nu - mu + e) / (2 * e))
    den = P(1) * P(z / e + 1) * P((z + zp - 2 * lam + nu + mu + e) / (2 * e)) * P((z - zp - 2 * lam + nu + mu + e) / (2 * e))
    return ex * g * num / den


def B_direct(p: StarParams, n: int, ctx: ModuliContext) -> complex:
    """Right coefficient with c(lam - mu) c(mu - nu) stripped, as the finite sum over k."""
    z, zp, lam, mu, nu, e = p.z, p.zp, p.lam, p.mu, p.nu, ctx.eta
    top = z - lam + nu + 2 * n * e
    s = 0j
    for k in range(n + 1):
        x = z - lam + mu + 2 * k * e
        s += (
            theta1(2 * x, ctx) * theta1(2 * top, ctx) * vertex_W(zp, x, lam - nu, ctx)
            / (vertex_W(x, z, lam - mu + e, ctx) * vertex_W(top, x, mu - nu + e, ctx))
        )
    return s


def jackson_alphas(p: StarParams, n: int, ctx: ModuliContext) -> tuple[complex, ...]:
    z, zp, lam, mu, nu, e = p.z, p.zp, p.lam, p.mu, p.nu, ctx.eta
    return (
        (z - lam + mu) / e,
        (mu - lam) / e,
        (z - lam + nu) / e + n,
        (z + zp + mu - nu + e) / (2 * e),
        (z - zp + mu - nu + e) / (2 * e),
    )


def B_prefactor(p: StarParams, n: int, ctx: ModuliContext, printed: bool = False) -> complex:
    """Gamma-function prefactor of the 8omega7 in B_n.

    The displayed prefactor lacks theta_1(2z - 2lam + 2nu + 4n eta) and has
    the sign of the bracketed exponent reversed; ``printed=True`` keeps it.
    """
    z, zp, lam, mu, nu, e = p.z, p.zp, p.lam, p.mu, p.nu, ctx.eta
    G = lambda x: elliptic_gamma(x, ctx)
    bracket = (lam - nu) * (zp - z) + (lam - mu) * (lam - mu + e) + (lam - nu) * (mu - nu + e)
    sign = 1 if printed else -1
    ex = cmath.exp(sign * 2j * PI / e * bracket + 4j * PI * z + 4j * PI * (mu - nu + e) * n)
    g = G(2 * mu - 2 * lam) * G(2 * z - 2 * lam + 2 * mu) * G(z + zp + mu - nu + e) * G(zp - z + 2 * lam - mu - nu + e)
    g /= G(2 * e) * G(2 * z + 2 * e) * G(z + zp - 2 * lam + mu + nu + e) * G(zp - z - mu + nu + e)
    g *= G(2 * z - 2 * lam + 2 * nu + 2 * n * e) * G(2 * nu - 2 * mu + 2 * n * e)
    g /= G(2 * e + 2 * n * e) * G(2 * z - 2 * lam + 2 * mu + 2 * e + 2 * n * e)
    g *= theta1(2 * z - 2 * lam + 2 * mu, ctx)
    if not printed:
        g *= theta1(2 * z - 2 * lam + 2 * nu + 4 * n * e, ctx)
    return ex * g


def B_closed(p: StarParams, n: int, ctx: ModuliContext, printed: bool = False) -> complex:
    """B_n as prefactor times the Frenkel-Turaev value of the balanced 8omega7."""
    a = jackson_alphas(p, n, ctx)
    if not jackson_balanced(*a, n):
        raise BalanceViolation("inner 8omega7 is not balanced")
    return B_prefactor(p, n, ctx, printed) * jackson_sum(*a, n, ctx)


def B_series(p: StarParams, n: int, ctx: ModuliContext) -> complex:
    """Same with the 8omega7 summed term by term."""
    a = jackson_alphas(p, n, ctx)
    series = omega_series(OmegaParams(7, a[0], (*a[1:], -n)), TERMINATING, ctx)
    return B_prefactor(p, n, ctx) * series.value


def six_omega_five(p: StarParams, n: int, ctx: ModuliContext, which: str = "a") -> complex:
    """Coefficient n of the 6omega5 operator form of either relation."""
    z, zp, lam, mu, nu, e = p.z, p.zp, p.lam, p.mu, p.nu, ctx.eta
    G = lambda x: elliptic_gamma(x, ctx)
    if which == "a":
        ex = cmath.exp(2j * PI / e * (lam - nu) * (z - zp) - 1j * PI / e * (lam - nu) ** 2)
        g = G(2 * z - 2 * lam + 2 * nu + 2 * e) * G(z + zp + mu - nu + e) * G(zp - z + 2 * lam - mu - nu + e)
        g /= G(2 * z + 2 * e) * G(z + zp - 2 * lam + mu + nu + e) * G(zp - z - mu + nu + e)
        b6, b7 = (z + zp + nu - mu + e) / (2 * e), (z - zp + nu - mu + e) / (2 * e)
    else:
        ex = cmath.exp(1j * PI / e * (lam - nu) * (2 * mu - lam - nu))
        g = G(2 * z - 2 * lam + 2 * nu + 2 * e) * G(z + zp + lam - mu + e) * G(z - zp + lam - mu + e)
        g /= G(2 * z + 2 * e) * G(z + zp + 2 * nu - lam - mu + e) * G(z - zp + 2 * nu - lam - mu + e)
        b6, b7 = (z + zp - lam + mu + e) / (2 * e), (z - zp - lam + mu + e) / (2 * e)
    params = OmegaParams(5, (z - lam + nu) / e, ((nu - lam) / e, b6, b7))
    return ex * g * omega_terms(params, n, ctx)[n]


# --- reports --------------------------------------------------------------------------


def _run(label, identity, anchor, pol, ctx, per_draw, **details) -> IdentityReport:
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, label)
        log = ResidualLog()
        for _ in range(pol.n_samples):
            log.add(per_draw(StarParams.draw(rng)))
        log.draws = pol.n_samples
    return IdentityReport.from_log(SUITE, identity, anchor, log, pol.rel_tol, sw.ms, **details)


def check_star_triangle(which: str, pol: SampledEqualityPolicy, ctx: ModuliContext, n_max: int = 5) -> IdentityReport:
    sides = first_sides if which == "a" else second_sides

    def per_draw(p):
        out = []
        for n in range(n_max + 1):
            lhs, rhs, mag = sides(p, n, ctx)
            out.append(rel_residual(lhs, rhs, mag))
        return max(out)

    name = "first" if which == "a" else "second"
    return _run(f"st1{which}", f"{name} star-triangle relation, coefficients n <= {n_max}", f"star-triangle relation ({name})", pol, ctx, per_draw, n_max=n_max)


def check_operator_form(which: str, pol: SampledEqualityPolicy, ctx: ModuliContext, k_max: int = 4) -> IdentityReport:
    """Both sides against the 6omega5 operator coefficients."""
    sides = first_sides if which == "a" else second_sides

    def per_draw(p):
        out = []
        for k in range(k_max + 1):
            lhs, rhs, mag = sides(p, k, ctx)
            op = six_omega_five(p, k, ctx, which)
            out += [rel_residual(lhs, op), rel_residual(rhs, op, mag)]
        return max(out)

    name = "first" if which == "a" else "second"
    return _run(f"st2{which}", f"{name} star-triangle sides = 6omega5 operator kernel, k <= {k_max}", f"6omega5 form of the {name} star-triangle relation", pol, ctx, per_draw, k_max=k_max)


def check_C_expansion(pol: SampledEqualityPolicy, ctx: ModuliContext, n_max: int = 5) -> IdentityReport:
    def per_draw(p):
        c = c_norm(p.lam - p.nu, ctx)
        return max(rel_residual(c * C_coefficient(p, n, ctx), first_sides(p, n, ctx)[0]) for n in range(n_max + 1))

    return _run("C-expansion", "left coefficients C_n in gamma/Pochhammer form", "left side of the first star-triangle relation", pol, ctx, per_draw)


def check_B_closed(pol: SampledEqualityPolicy, ctx: ModuliContext, n_max: int = 5, printed: bool = False) -> IdentityReport:
    """B_n as a k-sum vs prefactor times Frenkel-Turaev; also vs the summed 8omega7."""

    def per_draw(p):
        out = []
        for n in range(n_max + 1):
            direct = B_direct(p, n, ctx)
            out.append(rel_residual(B_closed(p, n, ctx, printed), direct))
            if not printed:
                out.append(rel_residual(B_series(p, n, ctx), direct))
        return max(out)

    ident = "B_n = prefactor x balanced 8omega7 (Frenkel-Turaev)" + (" (as displayed)" if printed else "")
    return _run("B-closed", ident, "right side of the first star-triangle relation", pol, ctx, per_draw)


def check_CB_ratio(pol: SampledEqualityPolicy, ctx: ModuliContext, n_max: int = 5) -> IdentityReport:
    """C_n / B_n = c(lam-mu) c(mu-nu) / c(lam-nu) with B_n from the closed form."""

    def per_draw(p):
        target = c_norm(p.lam - p.mu, ctx) * c_norm(p.mu - p.nu, ctx) / c_norm(p.lam - p.nu, ctx)
        return max(rel_residual(C_coefficient(p, n, ctx) / B_closed(p, n, ctx), target) for n in range(n_max + 1))

    return _run("CB-ratio", "C_n/B_n = c(lam-mu)c(mu-nu)/c(lam-nu)", "normalization cancellation in the star-triangle relation", pol, ctx, per_draw)


def check_balancing(pol: SampledEqualityPolicy, ctx: ModuliContext, n_max: int = 5) -> IdentityReport:
    """Balancing 2 alpha_1 + 1 = alpha_4 + ... + alpha_7 - n of the inner series."""

    def per_draw(p):
        out = []
        for n in range(n_max + 1):
            a = jackson_alphas(p, n, ctx)
            lhs, rhs = 2 * a[0] + 1, sum(a[1:]) - n
            out.append(abs(lhs - rhs) / max(1.0, abs(lhs)))
        return max(out)

    return _run("balancing", "inner 8omega7 is balanced and terminating", "balancing of the inner series", pol, ctx, per_draw)


def check_all(pol: SampledEqualityPolicy, ctx: ModuliContext, n_max: int = 5, k_max: int = 4) -> list[IdentityReport]:
    return [
        check_star_triangle("a", pol, ctx, n_max),
        check_star_triangle("b", pol, ctx, n_max),
        check_operator_form("a", pol, ctx, k_max),
        check_operator_form("b", pol, ctx, k_max),
        check_C_expansion(pol, ctx, n_max),
        check_B_closed(pol, ctx, n_max),
        check_B_closed(pol, ctx, n_max, printed=True),
        check_CB_ratio(pol, ctx, n_max),
        check_balancing(pol, ctx, n_max),
    ]
