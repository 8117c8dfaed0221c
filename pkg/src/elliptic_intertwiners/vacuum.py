"""The K-operator, right and left vacuum vectors and the relations among them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .combs import Comb, DifferenceOperator, Keyed, SampledEqualityPolicy, Weight, apply, contract, keyed_residuals, transpose
from .context import ModuliContext, near_integer
from .elliptic import theta1
from .report import IdentityReport, ResidualLog, Stopwatch, rel_residual
from .sklyanin.loperator import LOperator, make_L_pm
from .vertex.draws import draw, rng_for
from .vertex.vectors import bra, co_phi, ket_perp, phi_bar
from .vertex.weights import c_norm, comb_vertex_W, vertex_W

SUITE = "vacuum"

# -2 relates the entrywise sandwich of L to the rho-form of K (see check_K_forms)
SANDWICH_FACTOR = -2.0


def rho(z: complex, zeta: complex, xi: complex, lp: complex, lm: complex, ctx: ModuliContext) -> complex:
    e = ctx.eta
    p = 1.0 + 0j
    for s in (1, -1):
        p *= theta1(z + s * zeta - lp + e / 2, ctx) * theta1(z + s * xi + lm + e / 2, ctx)
    return p / theta1(2 * z, ctx)


@dataclass(frozen=True)
class KOperator:
    """rho(z) e^{eta d} + rho(-z) e^{-eta d}."""

    zeta: complex
    xi: complex
    lp: complex
    lm: complex
    ctx: ModuliContext

    def rho(self, z: complex) -> complex:
        return rho(z, self.zeta, self.xi, self.lp, self.lm, self.ctx)

    def operator(self) -> DifferenceOperator:
        return DifferenceOperator(-self.ctx.eta, {0: lambda z: self.rho(-z), 1: self.rho}, self.ctx)

    def sandwich(self) -> DifferenceOperator:
        """<zeta| L(lam_+, lam_-) |xi>^perp assembled from the L entries."""
        L = make_L_pm(self.lp, self.lm, self.ctx)
        u, v = bra(self.zeta, self.ctx), ket_perp(self.xi, self.ctx)
        total = None
        for i in range(2):
            for j in range(2):
                term = complex(u[i] * v[j]) * L[i, j]
                total = term if total is None else total + term
        return total


def build_K(zeta: complex, xi: complex, lp: complex, lm: complex, ctx: ModuliContext) -> KOperator:
    return KOperator(complex(zeta), complex(xi), complex(lp), complex(lm), ctx)


@dataclass(frozen=True)
class VacuumVector:
    """X_R^{xi,xi'}(z | lam_+, lam_-) = W^{xi,z}(lam_+ - eta/2) W^z_{xi'}(lam_- - eta/2), left-finite in z."""

    xi: complex
    xip: complex
    lp: complex
    lm: complex
    N: int
    ctx: ModuliContext

    def comb(self) -> Comb:
        e = self.ctx.eta
        col = comb_vertex_W(self.lm - e / 2, self.N, self.ctx).column(self.xip)
        coeffs = {k: vertex_W(self.xi, col.support(k), self.lp - e / 2, self.ctx) * c for k, c in col.coeffs.items()}
        return Comb(col.nu, coeffs, "left-finite", e)


def _vacuum_draw(rng) -> tuple[complex, complex, complex, complex]:
    return tuple(draw(rng, 4))


def comb_residual(lhs: Comb, rhs: Comb, indices, mags: dict[int, float] | None = None) -> float:
    """Entrywise relative residual on the lattice of ``lhs`` over ``indices``."""
    r = rhs.rebase(lhs.nu)
    out = 0.0
    for n in indices:
        a, b = lhs.coeffs.get(n, 0j), r.coeffs.get(n, 0j)
        scale = max(abs(a), abs(b), (mags or {}).get(n, 0.0))
        if scale > 0:
            out = max(out, abs(a - b) / scale)
    return out


def _local(mags: dict[int, float], n: int) -> float:
    """Scale of entry n taken from its neighbourhood.

    The edge entry of a left-finite solution vanishes through a theta zero,
    so its own magnitude is rounding noise; the neighbours set the scale.
    """
    return max(mags.get(m, 0.0) for m in (n - 1, n, n + 1))


def _magnitudes(D: DifferenceOperator, X: Comb) -> dict[int, float]:
    """Sum of |coefficient x value| contributing to each entry of apply(D, X)."""
    nu = X.nu - D.mu
    out: dict[int, float] = {}
    for j, fj in X.coeffs.items():
        for k in D.indices:
            n = j + k
            c = D.coefficients(nu - 2 * n * D.ctx.eta).get(k, 0j)
            out[n] = out.get(n, 0.0) + abs(c * fj)
    return out


def check_K_forms(pol: SampledEqualityPolicy, ctx: ModuliContext, factor: float = SANDWICH_FACTOR) -> IdentityReport:
    """Sandwich of L against ``factor`` times the rho-form; factor 1 is the unnormalized statement."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, f"K-forms-{factor}")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            zeta, xi, lp, lm = _vacuum_draw(rng)
            K = build_K(zeta, xi, lp, lm, ctx)
            A, B = K.sandwich(), K.operator()
            (z,) = draw(rng, 1)
            ca, cb = A.coefficients(z), B.coefficients(z)
            log.add(max(rel_residual(ca[k], factor * cb[k]) for k in (0, 1)))
        log.draws = pol.n_samples
    ident = f"<zeta|L|xi>^perp = {factor:g} x (rho(z) e^(eta d) + rho(-z) e^(-eta d))"
    if factor == 1.0:
        ident += " (as displayed)"
    return IdentityReport.from_log(SUITE, ident, "explicit form of the K-operator", log, pol.rel_tol, sw.ms, factor=factor)


def check_right_vacuum(pol: SampledEqualityPolicy, ctx: ModuliContext, N: int = 6) -> IdentityReport:
    """K(xi, xi') X_R^{xi,xi'} = 0 with the same lam_+-; entries n <= N are exact."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "right-vacuum")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            xi, xip, lp, lm = _vacuum_draw(rng)
            K = build_K(xi, xip, lp, lm, ctx).operator()
            X = VacuumVector(xi, xip, lp, lm, N, ctx).comb()
            Y = apply(K, X)
            mags = _magnitudes(K, X)
            log.add(max(abs(Y.coeffs.get(n, 0j)) / _local(mags, n) for n in range(N + 1)))
        log.draws = pol.n_samples
    return IdentityReport.from_log(SUITE, "rho(z) X_R(z+eta) + rho(-z) X_R(z-eta) = 0", "right vacuum vector", log, pol.rel_tol, sw.ms, N=N)


def vac_coefficients(xi: complex, xip: complex, lp: complex, lm: complex, mu: complex, ctx: ModuliContext) -> tuple[complex, ...]:
    e = ctx.eta
    T = lambda x: theta1(x, ctx)
    a = -T(xi + xip - lp + lm + e) * T(xi - xip - lp - lm - 2 * mu) / T(2 * xip + 2 * e)
    b = T(xi - xip - lp + lm + e) * T(xi + xip - lp - lm - 2 * mu) / T(2 * xip - 2 * e)
    c = -T(xi - xip + lp - lm - e) * T(xi + xip + lp + lm + 2 * mu) / T(2 * xip + 2 * e)
    d = T(xi + xip + lp - lm - e) * T(xi - xip + lp + lm + 2 * mu) / T(2 * xip - 2 * e)
    return a, b, c, d


def vac3_sides(xi, xip, lp, lm, N, ctx) -> tuple[Comb, Comb, dict[int, float]]:
    e = ctx.eta
    a, b, c, d = vac_coefficients(xi, xip, lp, lm, 0.0, ctx)
    X = lambda s, t: VacuumVector(xi + s, xip + t, lp, lm, N, ctx).comb()
    terms_l = [X(e, e) * a, X(e, -e) * b]
    terms_r = [X(-e, e) * c, X(-e, -e) * d]
    lhs = terms_l[0] + terms_l[1]
    rhs = terms_r[0] + terms_r[1]
    mags: dict[int, float] = {}
    for t in terms_l + terms_r:
        for n, v in t.rebase(lhs.nu).coeffs.items():
            mags[n] = mags.get(n, 0.0) + abs(v)
    return lhs, rhs, mags


def check_vac3(pol: SampledEqualityPolicy, ctx: ModuliContext, N: int = 6) -> IdentityReport:
    """a0 X^{xi+eta,xi'+eta} + b0 X^{xi+eta,xi'-eta} = c0 X^{xi-eta,xi'+eta} + d0 X^{xi-eta,xi'-eta}."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "vac3")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            xi, xip, lp, lm = _vacuum_draw(rng)
            lhs, rhs, mags = vac3_sides(xi, xip, lp, lm, N, ctx)
            log.add(comb_residual(lhs, rhs, range(N + 1), mags))
        log.draws = pol.n_samples
    return IdentityReport.from_log(SUITE, "four-term relation among shifted vacuum vectors", "consistency of the vacuum equations", log, pol.rel_tol, sw.ms, N=N)


def vac4_sides(xi, xip, lp, lm, N, ctx, printed: bool = False) -> tuple[list[Comb], list[Comb], list[dict[int, float]]]:
    """Components j of <xi| L(lam_+, lam_-) X_R(lam_+-) and theta_1(2 lam_- + eta) <xi'| X_R(lam_+- + eta).

    X_R carries the normalization c of its comb factor, which changes under
    lam_- -> lam_- + eta; the right side therefore gets c(lam_- - eta/2)/c(lam_- + eta/2).
    ``printed=True`` drops that ratio.
    """
    e = ctx.eta
    L = make_L_pm(lp, lm, ctx)
    X = VacuumVector(xi, xip, lp, lm, N, ctx).comb()
    Xs = VacuumVector(xi, xip, lp + e, lm + e, N, ctx).comb()
    u, w = bra(xi, ctx), bra(xip, ctx)
    t = theta1(2 * lm + e, ctx)
    if not printed:
        t *= c_norm(lm - e / 2, ctx) / c_norm(lm + e / 2, ctx)
    lhs, rhs, mags = [], [], []
    for j in range(2):
        total, mag = None, {}
        for i in range(2):
            D = complex(u[i]) * L[i, j]
            Y = apply(D, X)
            total = Y if total is None else total + Y
            for n, m in _magnitudes(D, X).items():
                mag[n] = mag.get(n, 0.0) + m
        lhs.append(total)
        rhs.append(Xs * (t * w[j]))
        mags.append(mag)
    return lhs, rhs, mags


def check_vac4(pol: SampledEqualityPolicy, ctx: ModuliContext, N: int = 6, printed: bool = False) -> IdentityReport:
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "vac4")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            xi, xip, lp, lm = _vacuum_draw(rng)
            lhs, rhs, mags = vac4_sides(xi, xip, lp, lm, N, ctx, printed)
            log.add(max(comb_residual(lhs[j], rhs[j], range(N + 1), mags[j]) for j in range(2)))
        log.draws = pol.n_samples
    ident = "<xi| L X_R(lam_+, lam_-) = theta_1(2 lam_- + eta) <xi'| X_R(lam_+ + eta, lam_- + eta)"
    ident += " (as displayed, without the c ratio)" if printed else " x c(lam_- - eta/2)/c(lam_- + eta/2)"
    return IdentityReport.from_log(
        SUITE, ident,
        "action of L on the vacuum vector", log, pol.rel_tol, sw.ms, N=N,
    )


def vac1_sides(z, zp, lp, lm, mu, N, ctx) -> tuple[Keyed, Keyed]:
    """Both zeta-convolutions as 2-covectors over (xi, xi')."""
    e = ctx.eta
    Wc = comb_vertex_W(lm - mu, N, ctx)

    def comb(v):
        return np.dot(v[0], v[1]) * v[2] * v[3] * v[4]

    lhs = contract(
        [
            co_phi(mu + e / 2, ctx).pin("zp", "xi"),
            phi_bar(lp - e / 2, ctx).pin("z", "zeta"),
            co_phi(lm + e / 2, ctx).pin("z", "zeta"),
            Weight(["xi", "zeta"], lambda a, b: vertex_W(a, b, lp - mu, ctx)),
            Wc.pin("zeta", "xip"),
        ],
        {"z": z, "zp": zp}, ["xi", "xip"], comb,
    )
    rhs = contract(
        [
            co_phi(lp + e / 2, ctx).pin("zp", "xi"),
            phi_bar(lm - e / 2, ctx).pin("zeta", "xip"),
            co_phi(mu + e / 2, ctx).pin("zeta", "xip"),
            Weight(["zp", "z"], lambda a, b: vertex_W(a, b, lp - mu, ctx)),
            Wc.pin("z", "zeta"),
        ],
        {"z": z, "zp": zp}, ["xi", "xip"], comb,
    )
    return lhs, rhs


def _lattice_keys(t: Keyed, zp: complex, base: complex, e: complex) -> set:
    return {(near_integer((k[0] - zp) / e), near_integer((k[1] - base) / (2 * e))) for k in t.keys()}


def check_vac1(pol: SampledEqualityPolicy, ctx: ModuliContext, N: int = 4) -> IdentityReport:
    """Keys xi' = z - (lam_- - mu) - eta + 2j eta with j <= N are exact on both sides."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "vac1")
        log = ResidualLog()
        e = ctx.eta
        for _ in range(pol.n_samples):
            z, zp, lp, lm, mu = draw(rng, 5)
            base = z - (lm - mu) - e

            def keep(key):
                j = near_integer((key[1] - base) / (2 * e))
                return j is not None and j <= N

            lhs, rhs = vac1_sides(z, zp, lp, lm, mu, N, ctx)
            if _lattice_keys(lhs.filtered(keep), zp, base, e) != _lattice_keys(rhs.filtered(keep), zp, base, e):
                log.add(float("inf"))
                continue
            log.add(max(keyed_residuals(lhs, rhs, keep=keep)))
        log.draws = pol.n_samples
    return IdentityReport.from_log(SUITE, "L acting on W^{xi,zeta} W^zeta_xi' through intertwining vectors", "L-operator on a pair of W-vertices", log, pol.rel_tol, sw.ms, N=N)


def left_vacuum(K: KOperator, nu: complex, N: int) -> Comb:
    """X_L on the lattice nu - 2k eta, k = 0..N, from x_{k+1} = -rho(-w_k) x_k / rho(w_k - 2 eta)."""
    e = K.ctx.eta
    x = {0: 1.0 + 0j}
    for k in range(N):
        w = nu - 2 * k * e
        x[k + 1] = -K.rho(-w) * x[k] / K.rho(w - 2 * e)
    return Comb(nu, x, "finite", e)


def check_left_vacuum(pol: SampledEqualityPolicy, ctx: ModuliContext, N: int = 6) -> IdentityReport:
    """X_L K = 0, i.e. K^t X_L = 0, on interior entries via the generic transpose."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "left-vacuum")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            zeta, xi, lp, lm, nu = draw(rng, 5)
            K = build_K(zeta, xi, lp, lm, ctx)
            Kt = transpose(K.operator())
            X = left_vacuum(K, nu, N)
            Y = apply(Kt, X)
            mags = _magnitudes(Kt, X)
            # entries touching the truncation edges see one neighbour only
            interior = [n for n in Y.coeffs if all(n - k in X.coeffs for k in Kt.indices)]
            log.add(max(abs(Y.coeffs[n]) / mags[n] for n in interior))
        log.draws = pol.n_samples
    return IdentityReport.from_log(SUITE, "rho(-z-eta) X_L(z+eta) + rho(z-eta) X_L(z-eta) = 0", "left vacuum vector", log, pol.rel_tol, sw.ms, N=N)


def check_all(pol: SampledEqualityPolicy, ctx: ModuliContext) -> list[IdentityReport]:
    return [
        check_K_forms(pol, ctx),
        check_K_forms(pol, ctx, factor=1.0),
        check_right_vacuum(pol, ctx),
        check_vac3(pol, ctx),
        check_vac4(pol, ctx),
        check_vac4(pol, ctx, printed=True),
        check_vac1(pol, ctx),
        check_left_vacuum(pol, ctx),
    ]
