"""The composite R-operator, the dual S-kernel and the one-site transfer matrix.

Spectral parameters come as (lam_+, lam_-, mu_+, mu_-). The R kernel is the
product of two meromorphic and two comb-valued W-vertices; all truncated
combs are used only on supports where the truncation is exact.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ..combs import Keyed, Pin, SampledEqualityPolicy, Weight, contract, keyed_residuals
from ..context import ModuliContext, near_integer
from ..elliptic import (
    TERMINATING,
    OmegaParams,
    dedekind_eta,
    elliptic_gamma,
    jacobi_theta,
    omega_series,
    omega_terms,
    theta1,
)
from ..errors import BalanceViolation, DomainError
from ..report import IdentityReport, ResidualLog, Stopwatch, rel_residual
from ..sklyanin.loperator import LOperator, make_L_pm
from .draws import draw, rng_for
from .weights import c_norm, comb_vertex_W, vertex_W

SUITE_R = "r-operator"
SUITE_S = "s-operator"
PI = math.pi


@dataclass(frozen=True)
class Spectral:
    lp: complex
    lm: complex
    mp: complex
    mm: complex

    @classmethod
    def draw(cls, rng) -> Spectral:
        return cls(*draw(rng, 4))

    def swapped(self) -> Spectral:
        """lam_+ and lam_- exchanged."""
        return Spectral(self.lm, self.lp, self.mp, self.mm)


# --- R-operator --------------------------------------------------------------------


@dataclass(frozen=True)
class RKernel:
    """R^{z z'}_{zeta zeta'} = W^{z,z'}(l+ - m-) W^{z'}_{zeta'}(l- - m-) W^z_zeta(l+ - m+) W^{zeta,zeta'}(l- - m+)."""

    sp: Spectral
    N: int
    ctx: ModuliContext

    @property
    def comb_z(self):
        return comb_vertex_W(self.sp.lp - self.sp.mp, self.N, self.ctx)

    @property
    def comb_zp(self):
        return comb_vertex_W(self.sp.lm - self.sp.mm, self.N, self.ctx)

    def factors(self, u: str, up: str, v: str, vp: str) -> list:
        """Network factors with upper variables (u, up) and lower (v, vp)."""
        sp, ctx = self.sp, self.ctx
        return [
            Weight([u, up], lambda x, y: vertex_W(x, y, sp.lp - sp.mm, ctx)),
            self.comb_zp.pin(up, vp),
            self.comb_z.pin(u, v),
            Weight([v, vp], lambda x, y: vertex_W(x, y, sp.lm - sp.mp, ctx)),
        ]

    def coefficient(self, z: complex, zp: complex, k: int, kp: int) -> complex:
        sp, ctx = self.sp, self.ctx
        A, B = self.comb_z, self.comb_zp
        zeta, zetap = A.lower(z, k), B.lower(zp, kp)
        return (
            vertex_W(z, zp, sp.lp - sp.mm, ctx) * B.weight(zp, zetap) * A.weight(z, zeta)
            * vertex_W(zeta, zetap, sp.lm - sp.mp, ctx)
        )

    def operator_coefficient(self, z: complex, zp: complex, k: int, kp: int) -> complex:
        """Coefficient of e^{shift_k d_z} e^{shift_k' d_z'} in the normal-ordered 4omega3 form."""
        sp, ctx, e = self.sp, self.ctx, self.ctx.eta
        G = lambda x: elliptic_gamma(x, ctx)
        a, b = sp.lp - sp.mp, sp.lm - sp.mm
        ex = cmath.exp(-1j * PI / e * (a * a + b * b) + 2j * PI / e * (a * z + b * zp))
        g = G(2 * zp - 2 * b + 2 * e) / G(2 * zp + 2 * e) * G(2 * z - 2 * a + 2 * e) / G(2 * z + 2 * e)
        wz = omega_terms(OmegaParams(3, (z - a) / e, (-a / e,)), k, ctx)[k]
        wzp = omega_terms(OmegaParams(3, (zp - b) / e, (-b / e,)), kp, ctx)[kp]
        zeta, zetap = z - a + 2 * k * e, zp - b + 2 * kp * e
        return (
            vertex_W(z, zp, sp.lp - sp.mm, ctx) * ex * g * wzp * wz
            * vertex_W(zeta, zetap, sp.lm - sp.mp, ctx)
        )


def build_R(lp: complex, lm: complex, mp: complex, mm: complex, N: int, ctx: ModuliContext) -> RKernel:
    return RKernel(Spectral(complex(lp), complex(lm), complex(mp), complex(mm)), int(N), ctx)


def check_R_forms(pol: SampledEqualityPolicy, ctx: ModuliContext, k_max: int = 3) -> IdentityReport:
    """Product-of-vertices kernel against the explicit 4omega3 operator, k, k' <= k_max."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "R-forms")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            R = RKernel(Spectral.draw(rng), k_max, ctx)
            z, zp = draw(rng, 2)
            log.add(max(
                rel_residual(R.coefficient(z, zp, k, kp), R.operator_coefficient(z, zp, k, kp))
                for k in range(k_max + 1) for kp in range(k_max + 1)
            ))
        log.draws = pol.n_samples
    return IdentityReport.from_log(SUITE_R, "R kernel = explicit 4omega3 operator form", "R-operator as a product of four W-vertices", log, pol.rel_tol, sw.ms)


def check_R_trivial(pol: SampledEqualityPolicy, ctx: ModuliContext, k_max: int = 3) -> IdentityReport:
    """At lam_+- = mu_+- the operator form collapses to the identity."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "R-trivial")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            lp, lm = draw(rng, 2)
            R = RKernel(Spectral(lp, lm, lp, lm), k_max, ctx)
            z, zp = draw(rng, 2)
            res = []
            for k in range(k_max + 1):
                for kp in range(k_max + 1):
                    c = R.operator_coefficient(z, zp, k, kp)
                    res.append(abs(c - (1.0 if k == kp == 0 else 0.0)))
            log.add(max(res))
        log.draws = pol.n_samples
    return IdentityReport.from_log(SUITE_R, "R(lam|lam) = identity", "R-operator at coinciding spectral parameters", log, pol.rel_tol, sw.ms)


def rewriting_sides(z: complex, zeta: complex, lam: complex, mu: complex, k: int, ctx: ModuliContext) -> tuple[complex, complex]:
    """Coefficient k of :4omega3: e^{-lam d} W^{zeta,z}(mu) and of W^{zeta,z-lam}(mu) :6omega5: e^{-lam d}."""
    e = ctx.eta
    lhs = omega_terms(OmegaParams(3, (z - lam) / e, (-lam / e,)), k, ctx)[k] * vertex_W(zeta, z - lam + 2 * k * e, mu, ctx)
    p6 = OmegaParams(5, (z - lam) / e, (-lam / e, (z + zeta + mu - lam + e) / (2 * e), (z - zeta + mu - lam + e) / (2 * e)))
    rhs = vertex_W(zeta, z - lam, mu, ctx) * omega_terms(p6, k, ctx)[k]
    return lhs, rhs


def check_rewriting(pol: SampledEqualityPolicy, ctx: ModuliContext, k_max: int = 4) -> IdentityReport:
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "R4id")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            z, zeta, lam, mu = draw(rng, 4)
            log.add(max(rel_residual(*rewriting_sides(z, zeta, lam, mu, k, ctx)) for k in range(k_max + 1)))
        log.draws = pol.n_samples
    return IdentityReport.from_log(SUITE_R, f"4omega3 x W = W x 6omega5, k <= {k_max}", "6omega5 rewriting of the R-operator", log, pol.rel_tol, sw.ms, k_max=k_max)


def _L_pin(L: LOperator, a: str, b: str) -> Pin:
    e = L.ctx.eta
    return Pin(a, b, [(e, lambda x, y: L.kernel(x)[1]), (-e, lambda x, y: L.kernel(x)[-1])])


def rll_sides(R: RKernel, z: complex, zp: complex) -> tuple[Keyed, Keyed]:
    """Kernels of R (L(lam) . L(mu)) and (L(mu) . L(lam)) R over (xi, xi').

    The two L-operators act in the two quantum spaces and are multiplied as
    2x2 matrices in the common auxiliary space.
    """
    sp, ctx = R.sp, R.ctx
    La = make_L_pm(sp.lp, sp.lm, ctx)
    Lb = make_L_pm(sp.mp, sp.mm, ctx)
    lhs = contract(
        R.factors("z", "zp", "zeta", "zetap") + [_L_pin(La, "zeta", "xi"), _L_pin(Lb, "zetap", "xip")],
        {"z": z, "zp": zp}, ["xi", "xip"],
        lambda v: v[0] * v[1] * v[2] * v[3] * (v[4] @ v[5]),
    )
    rhs = contract(
        [_L_pin(Lb, "z", "zeta"), _L_pin(La, "zp", "zetap")] + R.factors("zeta", "zetap", "xi", "xip"),
        {"z": z, "zp": zp}, ["xi", "xip"],
        lambda v: v[2] * v[3] * v[4] * v[5] * (v[0] @ v[1]),
    )
    return lhs, rhs


def check_rll(pol: SampledEqualityPolicy, ctx: ModuliContext, N: int = 3, ell: float = 0.5, ell_p: float = 0.5) -> IdentityReport:
    """Kernel RLL relation; output (xi, xi') is exact once both comb indices are <= N."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "RLL")
        log = ResidualLog()
        e = ctx.eta
        for _ in range(pol.n_samples):
            lam, mu, z, zp = draw(rng, 4)
            sp = Spectral(lam + (ell + 0.5) * e, lam - (ell + 0.5) * e, mu + (ell_p + 0.5) * e, mu - (ell_p + 0.5) * e)
            R = RKernel(sp, N, ctx)
            base, base_p = z - (sp.lp - sp.mp) - e, zp - (sp.lm - sp.mm) - e

            def keep(key):
                j = near_integer((key[0] - base) / (2 * e))
                jp = near_integer((key[1] - base_p) / (2 * e))
                return j is not None and jp is not None and j <= N and jp <= N

            log.add(max(keyed_residuals(*rll_sides(R, z, zp), keep=keep)))
        log.draws = pol.n_samples
    return IdentityReport.from_log(
        SUITE_R, f"R L L = L L R, spins ({ell}, {ell_p})", "intertwining of two L-operators", log, pol.rel_tol, sw.ms, N=N
    )


# --- S-kernel --------------------------------------------------------------------------


def xi_support(sp: Spectral, z: complex, n: int, ctx: ModuliContext) -> complex:
    return z - sp.lp - sp.lm + sp.mp + sp.mm + 2 * n * ctx.eta


def S_direct(sp: Spectral, z: complex, zp: complex, zpp: complex, n: int, ctx: ModuliContext) -> tuple[complex, float]:
    """Coefficient n of the S kernel from the zeta-convolution, and its magnitude."""
    A = comb_vertex_W(sp.lp - sp.mm, n, ctx)
    B = comb_vertex_W(sp.lm - sp.mp, n, ctx)
    xi = xi_support(sp, z, n, ctx)
    terms = []
    for k in range(n + 1):
        zeta = A.lower(z, k)
        terms.append(
            A.weight(z, zeta) * vertex_W(zp, zeta, sp.lp - sp.mp, ctx) * vertex_W(zeta, zpp, sp.lm - sp.mm, ctx) * B.weight(zeta, xi)
        )
    return sum(terms), sum(abs(t) for t in terms)


def S_from_A(sp: Spectral, z: complex, zp: complex, zpp: complex, n: int, ctx: ModuliContext) -> complex:
    """Same coefficient through the rearranged sum A_n."""
    e = ctx.eta
    xi = xi_support(sp, z, n, ctx)
    s = 0j
    for k in range(n + 1):
        x = z - sp.lp + sp.mm + 2 * k * e
        s += (
            theta1(2 * x, ctx) * vertex_W(zp, x, sp.lp - sp.mp, ctx) * vertex_W(x, zpp, sp.lm - sp.mm, ctx)
            / (vertex_W(x, z, sp.lp - sp.mm + e, ctx) * vertex_W(xi, x, sp.lm - sp.mp + e, ctx))
        )
    return c_norm(sp.lp - sp.mm, ctx) * c_norm(sp.lm - sp.mp, ctx) * theta1(2 * xi, ctx) * s


def S_alphas(sp: Spectral, z: complex, zp: complex, zpp: complex, n: int, ctx: ModuliContext) -> OmegaParams:
    e = ctx.eta
    xi = xi_support(sp, z, n, ctx)
    a1 = (z + sp.mm - sp.lp) / e
    s = sp.mp + sp.mm - sp.lp - sp.lm
    alphas = (
        (sp.mm - sp.lp) / e,
        (z + xi + s) / (2 * e),
        (z - xi + s) / (2 * e),
        (z + zp + sp.mm - sp.mp + e) / (2 * e),
        (z - zp + sp.mm - sp.mp + e) / (2 * e),
        (z + zpp + sp.lm - sp.lp + e) / (2 * e),
        (z - zpp + sp.lm - sp.lp + e) / (2 * e),
    )
    return OmegaParams(9, a1, alphas)


def S_closed(sp: Spectral, z: complex, zp: complex, zpp: complex, n: int, ctx: ModuliContext, printed: bool = False) -> complex:
    """Coefficient n of the S kernel via the terminating balanced 10omega9, with C = 1.

    The displayed exponential carries e^{2 pi i xi}; with it the constant C
    would depend on n through e^{4 pi i n eta}. The default uses e^{2 pi i z}.
    The vanishing theta~(z - xi + ...) multiplies the pole Gamma(2 alpha_6 eta);
    their product is taken as a Gamma value shifted by tau.
    """
    e, tau = ctx.eta, ctx.tau
    G = lambda x: elliptic_gamma(x, ctx)
    tt = lambda x: jacobi_theta(1, x, 2 * e, ctx.eps_term, ctx.k_max)
    p = S_alphas(sp, z, zp, zpp, n, ctx)
    if not p.is_balanced:
        raise BalanceViolation("10omega9 of the S kernel is not balanced")
    if p.termination_order != n:
        raise DomainError(f"10omega9 should terminate at {n}, found {p.termination_order}")
    xi = xi_support(sp, z, n, ctx)
    a1, a5, a6, *rest = p.alpha1, *p.alphas[1:]
    rest = [a5, *rest]
    phase = xi if printed else z
    ex = cmath.exp(2j * PI * phase + 2j * PI / e * ((sp.lp - sp.lm) * z + (sp.lm - sp.mp) * xi + (sp.mp - sp.lp) * zp))
    x6 = 2 * a6 * e
    theta_gamma = G(x6 + tau) * 1j * cmath.exp(1j * PI * 2 * e / 6) * dedekind_eta(2 * e, ctx.eps_term, ctx.k_max) * cmath.exp(-1j * PI * x6)
    frac = tt(z - zp + sp.mm - sp.mp + e) / (tt(z - zp + sp.mm + sp.mp - 2 * sp.lp + e) * tt(z - xi - sp.mp + sp.mm - sp.lp + sp.lm))
    g = G(2 * z + 2 * sp.mm - 2 * sp.lp + 2 * e) / G(2 * z + 2 * e)
    g *= theta_gamma / G(2 * (a1 - a6 + 1) * e)
    for a in rest:
        g *= G(2 * a * e) / G(2 * (a1 - a + 1) * e)
    w = omega_series(p, TERMINATING, ctx).value
    return theta1(2 * xi, ctx) * ex * frac * g * w


def fit_S_constant(sp: Spectral, rng, ctx: ModuliContext, printed: bool = False) -> complex:
    """C from the n = 0 coefficient at an independent draw of (z, z', z'')."""
    z, zp, zpp = draw(rng, 3)
    return S_direct(sp, z, zp, zpp, 0, ctx)[0] / S_closed(sp, z, zp, zpp, 0, ctx, printed)


def check_S_sum_forms(pol: SampledEqualityPolicy, ctx: ModuliContext, n_max: int = 4) -> IdentityReport:
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "S-A")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            sp = Spectral.draw(rng)
            z, zp, zpp = draw(rng, 3)
            res = []
            for n in range(n_max + 1):
                d, mag = S_direct(sp, z, zp, zpp, n, ctx)
                res.append(rel_residual(S_from_A(sp, z, zp, zpp, n, ctx), d, mag))
            log.add(max(res))
        log.draws = pol.n_samples
    return IdentityReport.from_log(SUITE_S, "S kernel: convolution = rearranged double sum A_n", "S-kernel as a double sum", log, pol.rel_tol, sw.ms)


def check_S_closed(pol: SampledEqualityPolicy, ctx: ModuliContext, n_max: int = 4, printed: bool = False) -> IdentityReport:
    """Double sum against C x 10omega9 form for n <= n_max, C fitted once per spectral draw."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "S-closed")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            sp = Spectral.draw(rng)
            C = fit_S_constant(sp, rng, ctx, printed)
            z, zp, zpp = draw(rng, 3)
            res = []
            for n in range(n_max + 1):
                d, mag = S_direct(sp, z, zp, zpp, n, ctx)
                res.append(rel_residual(C * S_closed(sp, z, zp, zpp, n, ctx, printed), d, mag))
            log.add(max(res))
        log.draws = pol.n_samples
    ident = f"S kernel = C x balanced terminating 10omega9, n <= {n_max}" + (" (as displayed)" if printed else "")
    return IdentityReport.from_log(SUITE_S, ident, "S-kernel through the 10omega9 series", log, pol.rel_tol, sw.ms, n_max=n_max)


def check_S_balancing(pol: SampledEqualityPolicy, ctx: ModuliContext, n_max: int = 4) -> IdentityReport:
    """Balancing residual of the 10omega9; termination is asserted at alpha_6 = -n."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "S-balance")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            sp = Spectral.draw(rng)
            z, zp, zpp = draw(rng, 3)
            res = []
            for n in range(n_max + 1):
                p = S_alphas(sp, z, zp, zpp, n, ctx)
                if p.termination_order != n or near_integer(p.alphas[2]) != -n:
                    res.append(math.inf)
                    continue
                lhs, rhs = 4 + 6 * p.alpha1, 2 * sum(p.alphas)
                res.append(abs(lhs - rhs) / max(1.0, abs(lhs)))
            log.add(max(res))
        log.draws = pol.n_samples
    return IdentityReport.from_log(SUITE_S, "10omega9 is balanced and terminates at alpha_6 = -n", "balancing of the S-kernel series", log, pol.rel_tol, sw.ms)


# --- transfer matrix on one site -----------------------------------------------------


def transfer_direct(sp: Spectral, z: complex, n: int, ctx: ModuliContext) -> tuple[complex, float]:
    """Coefficient of T^z_xi at xi = z - lam_+ - lam_- + mu_+ + mu_- + 2n eta from int dzeta R^{zeta z}_{xi zeta}."""
    R = RKernel(sp, n, ctx)
    xi = xi_support(sp, z, n, ctx)
    out = contract(R.factors("zeta", "z", "xi", "zeta"), {"z": z}, ["xi"])
    key = [k for k in out.keys() if abs(k[0] - xi) < 1e-9]
    if not key:
        return 0j, 0.0
    return out.get(key[0]), float(out.magnitude(key[0]))


def check_transfer(pol: SampledEqualityPolicy, ctx: ModuliContext, n_max: int = 3) -> IdentityReport:
    """T^z_xi(l+, l-|m+, m-) = S^z_xi(xi, z)(l-, l+|m+, m-), closed form with C fitted elsewhere."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "transfer")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            sp = Spectral.draw(rng)
            sw_sp = sp.swapped()
            C = fit_S_constant(sw_sp, rng, ctx)
            (z,) = draw(rng, 1)
            res = []
            for n in range(n_max + 1):
                t, mag = transfer_direct(sp, z, n, ctx)
                xi = xi_support(sw_sp, z, n, ctx)
                res.append(rel_residual(t, C * S_closed(sw_sp, z, xi, z, n, ctx), mag))
            log.add(max(res))
        log.draws = pol.n_samples
    return IdentityReport.from_log(SUITE_S, f"one-site transfer matrix = S kernel with lam_+ <-> lam_-, n <= {n_max}", "transfer matrix on one site", log, pol.rel_tol, sw.ms, n_max=n_max)


def check_r_operator(pol: SampledEqualityPolicy, ctx: ModuliContext) -> list[IdentityReport]:
    return [
        check_R_forms(pol, ctx),
        check_R_trivial(pol, ctx),
        check_rewriting(pol, ctx),
        check_rll(pol, ctx),
    ]


def check_s_operator(pol: SampledEqualityPolicy, ctx: ModuliContext) -> list[IdentityReport]:
    return [
        check_S_sum_forms(pol, ctx),
        check_S_balancing(pol, ctx),
        check_S_closed(pol, ctx),
        check_S_closed(pol, ctx, printed=True),
        check_transfer(pol, ctx),
    ]
