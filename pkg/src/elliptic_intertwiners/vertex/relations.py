"""Orthogonality, intertwining and difference relations of the vertex layer."""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..combs import Keyed, Pin, SampledEqualityPolicy, Weight, contract, keyed_from, keyed_residuals
from ..context import ModuliContext, near_integer
from ..elliptic import theta1
from ..report import IdentityReport, ResidualLog, Stopwatch, rel_residual
from .draws import draw, rng_for
from .vectors import co_phi, ket, ket_perp, phi_bar, scalar_product_perp
from .weights import comb_vertex_W, vertex_W

SUITE = "vertex"


def _dot(vals):
    return vals[0] * np.dot(vals[1], vals[2]) if len(vals) == 3 else np.dot(vals[0], vals[1])


def _report(identity: str, anchor: str, log: ResidualLog, pol: SampledEqualityPolicy, ms: float, tol: float | None = None, **details) -> IdentityReport:
    return IdentityReport.from_log(SUITE, identity, anchor, log, pol.rel_tol if tol is None else tol, ms, **details)


# --- building blocks -----------------------------------------------------------


def check_theta_vectors(pol: SampledEqualityPolicy, ctx: ModuliContext) -> IdentityReport:
    """<xi|zeta>^perp = 2 theta_1(xi+zeta) theta_1(xi-zeta) = -perp<xi|zeta>, and <zeta|zeta>^perp = 0."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "theta-vectors")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            xi, zeta = draw(rng, 2)
            a = np.dot(ket(xi, ctx), ket_perp(zeta, ctx))
            b = -np.dot(ket_perp(xi, ctx), ket(zeta, ctx))
            c = scalar_product_perp(xi, zeta, ctx)
            self_scale = float(np.dot(np.abs(ket(zeta, ctx)), np.abs(ket_perp(zeta, ctx))))
            log.add(max(rel_residual(a, c), rel_residual(b, c), abs(np.dot(ket(zeta, ctx), ket_perp(zeta, ctx))) / self_scale))
        log.draws = pol.n_samples
    return _report("<xi|zeta>^perp = 2 theta_1(xi+zeta) theta_1(xi-zeta)", "scalar product of theta vectors", log, pol, sw.ms)


# --- scalar products -----------------------------------------------------------


def scalar_product(co, v, z: complex, zeta: complex) -> Keyed:
    """<co^z_{z'}|v^zeta_{zeta'}> as a table over (z', zeta')."""
    return contract([co.pin("z", "zp"), v.pin("zeta", "zetap")], {"z": z, "zeta": zeta}, ["zp", "zetap"], _dot)


def scalar_product_formula(lam: complex, mu: complex, z: complex, zeta: complex, ctx: ModuliContext, printed: bool = False) -> Keyed:
    """Four-term closed form of <phi^z_{z'}(lam)|phi_bar^zeta_{zeta'}(mu)>.

    The displayed prefactor 1/sqrt(4 theta_1(2z) theta_1(2 zeta)) is half of
    what the vectors give (and of what orthogonality needs at lam = mu);
    ``printed=True`` keeps it.
    """
    e = ctx.eta
    T = lambda x: theta1(x, ctx)
    pre = 1 / cmath.sqrt(T(2 * z)) / cmath.sqrt(T(2 * zeta))
    if printed:
        pre /= 2
    return keyed_from(["zp", "zetap"], [
        ((z + e, zeta + e), pre * T(z + zeta + lam - mu) * T(z - zeta + lam + mu)),
        ((z + e, zeta - e), -pre * T(z + zeta + lam + mu) * T(z - zeta + lam - mu)),
        ((z - e, zeta + e), pre * T(z + zeta - lam - mu) * T(z - zeta - lam + mu)),
        ((z - e, zeta - e), -pre * T(z + zeta - lam + mu) * T(z - zeta - lam - mu)),
    ])


def check_scalar_product(pol: SampledEqualityPolicy, ctx: ModuliContext, printed: bool = False) -> IdentityReport:
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "scalar-product")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            lam, mu, z, zeta = draw(rng, 4)
            lhs = scalar_product(co_phi(lam, ctx), phi_bar(mu, ctx), z, zeta)
            log.add(max(keyed_residuals(lhs, scalar_product_formula(lam, mu, z, zeta, ctx, printed))))
        log.draws = pol.n_samples
    ident = "general scalar product of intertwining vectors" + (" (as displayed)" if printed else "")
    return _report(ident, "scalar product of intertwining vectors", log, pol, sw.ms)


def orthogonality_sides(which: int, lam: complex, z: complex, ctx: ModuliContext) -> tuple[Keyed, Keyed]:
    """Both sides of the four orthogonality / completeness relations."""
    e = ctx.eta
    T = lambda x: theta1(x, ctx)
    t = T(2 * lam)
    if which == 1:
        lhs = contract([co_phi(lam, ctx).pin("z", "zp"), phi_bar(lam, ctx).pin("z", "zpp")], {"z": z}, ["zp", "zpp"], _dot)
        rhs = keyed_from(["zp", "zpp"], [((z + e, z + e), t), ((z - e, z - e), t)])
    elif which == 2:
        lhs = contract([co_phi(lam + e, ctx).pin("zp", "z"), phi_bar(lam - e, ctx).pin("zpp", "z")], {"z": z}, ["zp", "zpp"], _dot)
        rhs = keyed_from(["zp", "zpp"], [((w, w), t * T(2 * z) / T(2 * w)) for w in (z + e, z - e)])
    elif which == 3:
        lhs = contract(
            [phi_bar(lam, ctx).pin("z", "zeta"), co_phi(lam, ctx).pin("z", "zeta")], {"z": z}, [],
            lambda v: np.outer(v[0], v[1]),
        )
        rhs = keyed_from([], [((), t * np.eye(2))])
    elif which == 4:
        lhs = contract(
            [
                phi_bar(lam - e, ctx).pin("zeta", "z"),
                co_phi(lam + e, ctx).pin("zeta", "z"),
                Weight(["zeta", "z"], lambda a, b: T(2 * a) / T(2 * b)),
            ],
            {"z": z}, [],
            lambda v: v[2] * np.outer(v[0], v[1]),
        )
        rhs = keyed_from([], [((), t * np.eye(2))])
    else:
        raise ValueError("which must be 1..4")
    return lhs, rhs


_ORTH_NAMES = {
    1: "<phi(lam)|phi_bar(lam)> = theta_1(2 lam) delta delta",
    2: "<phi(lam+eta)|phi_bar(lam-eta)> = theta_1(2 lam) theta_1(2z)/theta_1(2z') delta delta",
    3: "int |phi_bar(lam)><phi(lam)| = theta_1(2 lam) Id",
    4: "int theta_1(2 zeta)/theta_1(2z) |phi_bar(lam-eta)><phi(lam+eta)| = theta_1(2 lam) Id",
}


def check_orthogonality(which: int, pol: SampledEqualityPolicy, ctx: ModuliContext) -> IdentityReport:
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, f"orth{which}")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            lam, z = draw(rng, 2)
            log.add(max(keyed_residuals(*orthogonality_sides(which, lam, z, ctx))))
        log.draws = pol.n_samples
    anchor = "orthogonality of intertwining vectors" if which <= 2 else "completeness of intertwining vectors"
    return _report(_ORTH_NAMES[which], anchor, log, pol, sw.ms)


# --- the meromorphic vertex ------------------------------------------------------


def check_WW(pol: SampledEqualityPolicy, ctx: ModuliContext) -> IdentityReport:
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "WW")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            z, zeta, lam = draw(rng, 3)
            log.add(rel_residual(vertex_W(z, zeta, lam, ctx) * vertex_W(z, zeta, -lam, ctx), 1.0))
        log.draws = pol.n_samples
    return _report("W(lam) W(-lam) = 1", "inversion of the vertex function", log, pol, sw.ms)


def check_asymmetry(pol: SampledEqualityPolicy, ctx: ModuliContext, threshold: float = 1e-3) -> IdentityReport:
    """Passes when some draw has |W^{z,zeta} - W^{zeta,z}| above threshold relative."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "asymmetry")
        best = 0.0
        for _ in range(pol.n_samples):
            z, zeta, lam = draw(rng, 3)
            best = max(best, rel_residual(vertex_W(z, zeta, lam, ctx), vertex_W(zeta, z, lam, ctx)))
        log = ResidualLog()
        # residual is how far the largest asymmetry stays below the threshold
        log.add(threshold / best if best > 0 else math.inf)
        log.draws = pol.n_samples
    return _report("W^{z,zeta} differs from W^{zeta,z}", "asymmetry of the vertex function", log, pol, sw.ms, tol=1.0, max_asymmetry=best)


def vertex_shift_ratios(z: complex, zeta: complex, lam: complex, ctx: ModuliContext, printed: bool = False) -> tuple[complex, complex]:
    """Ratios for (z, zeta) -> (z+eta, zeta+eta) and (z+eta, zeta-eta).

    ``printed`` gives the ratios as displayed; by default the ones that
    follow from the gamma-function form through its 2 eta shift.
    """
    e = ctx.eta
    T = lambda x: theta1(x, ctx)
    if printed:
        return T(z + zeta + lam + e) / T(z + zeta + lam + e), T(z - zeta + lam + e) / T(z + zeta + lam + e)
    return T(z + zeta + lam + e) / T(z + zeta - lam + e), T(z - zeta + lam + e) / T(z - zeta - lam + e)


def check_vertex_difference(pol: SampledEqualityPolicy, ctx: ModuliContext, printed: bool = False) -> IdentityReport:
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "vertex-difference")
        log = ResidualLog()
        e = ctx.eta
        for _ in range(pol.n_samples):
            z, zeta, lam = draw(rng, 3)
            w = vertex_W(z, zeta, lam, ctx)
            r1, r2 = vertex_shift_ratios(z, zeta, lam, ctx, printed)
            log.add(max(
                rel_residual(vertex_W(z + e, zeta + e, lam, ctx), r1 * w),
                rel_residual(vertex_W(z + e, zeta - e, lam, ctx), r2 * w),
            ))
        log.draws = pol.n_samples
    ident = "difference equations of W^{z,zeta}" + (" (as displayed)" if printed else "")
    return _report(ident, "difference equations of the vertex function", log, pol, sw.ms)


def vertex_intertwining_sides(z, zeta, lam, mu, ctx) -> tuple[Keyed, Keyed]:
    """W^{z,zeta}(lam-mu) <phi(lam+eta/2)|phi_bar(mu-eta/2)> vs W^{z',zeta'}(lam-mu) <phi(mu+eta/2)|phi_bar(lam-eta/2)>."""
    e = ctx.eta
    nu = lam - mu

    def side(a, b, at):
        return contract(
            [co_phi(a, ctx).pin("z", "zp"), phi_bar(b, ctx).pin("zeta", "zetap"), Weight(at, lambda x, y: vertex_W(x, y, nu, ctx))],
            {"z": z, "zeta": zeta}, ["zp", "zetap"],
            lambda v: v[2] * np.dot(v[0], v[1]),
        )

    return side(lam + e / 2, mu - e / 2, ["z", "zeta"]), side(mu + e / 2, lam - e / 2, ["zp", "zetap"])


def check_vertex_intertwining(pol: SampledEqualityPolicy, ctx: ModuliContext) -> IdentityReport:
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "intertwining-relation")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            z, zeta, lam, mu = draw(rng, 4)
            log.add(max(keyed_residuals(*vertex_intertwining_sides(z, zeta, lam, mu, ctx))))
        log.draws = pol.n_samples
    return _report("W^{z,zeta} <phi|phi_bar> intertwining relation", "intertwining relation of the vertex function", log, pol, sw.ms)


# --- the comb vertex -------------------------------------------------------------


def _index(w: complex, base: complex, ctx: ModuliContext) -> int | None:
    return near_integer((w - base) / (2 * ctx.eta))


def dual_intertwining_sides(z, lam, mu, N, ctx) -> tuple[Keyed, Keyed]:
    """Both sides of the zeta-convolution relation dual to the intertwining relation, over z'."""
    e = ctx.eta
    Wc = comb_vertex_W(lam - mu, N, ctx)
    outer = lambda v: v[0] * np.outer(v[1], v[2])
    lhs = contract(
        [Wc.pin("z", "zeta"), phi_bar(lam - e / 2, ctx).pin("zeta", "zp"), co_phi(mu + e / 2, ctx).pin("zeta", "zp")],
        {"z": z}, ["zp"], outer,
    )
    rhs = contract(
        [phi_bar(mu - e / 2, ctx).pin("z", "zeta"), co_phi(lam + e / 2, ctx).pin("z", "zeta"), Wc.pin("zeta", "zp")],
        {"z": z}, ["zp"], lambda v: v[2] * np.outer(v[0], v[1]),
    )
    return lhs, rhs


def check_dual_intertwining(pol: SampledEqualityPolicy, ctx: ModuliContext, N: int = 4) -> IdentityReport:
    """Only keys z' = z - (lam-mu) - eta + 2j eta with j <= N are complete on both sides."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "dual-intertwining")
        log = ResidualLog()
        e = ctx.eta
        for _ in range(pol.n_samples):
            z, lam, mu = draw(rng, 3)
            base = z - (lam - mu) - e

            def keep(key):
                j = _index(key[0], base, ctx)
                return j is not None and j <= N

            log.add(max(keyed_residuals(*dual_intertwining_sides(z, lam, mu, N, ctx), keep=keep)))
        log.draws = pol.n_samples
    return _report("int W^z_zeta |phi_bar><phi| = int W^zeta_z' |phi_bar><phi|", "dual intertwining relation", log, pol, sw.ms, N=N)


def contracted_dual_sides(z, lam, mu, N, ctx) -> tuple[Keyed, Keyed]:
    """The dual relation contracted with orthogonality, over (z'', z', zeta')."""
    e = ctx.eta
    T = lambda x: theta1(x, ctx)
    Wc = comb_vertex_W(lam - mu, N, ctx)
    comb = lambda v: v[0] * v[1] * np.dot(v[2], v[3])
    lhs = contract(
        [
            Wc.pin("z", "zpp"),
            Weight(["zpp"], lambda x: 1 / T(2 * x)),
            co_phi(mu + e / 2, ctx).pin("zpp", "zp"),
            phi_bar(lam + e / 2, ctx).pin("z", "zetap"),
        ],
        {"z": z}, ["zpp", "zp", "zetap"], comb,
    )
    rhs = contract(
        [
            phi_bar(mu - e / 2, ctx).pin("z", "zetap"),
            Wc.pin("zetap", "zp"),
            Weight(["zp"], lambda x: 1 / T(2 * x)),
            co_phi(lam + 3 * e / 2, ctx).pin("zpp", "zp"),
        ],
        {"z": z}, ["zpp", "zp", "zetap"],
        lambda v: v[1] * v[2] * np.dot(v[3], v[0]),
    )
    return lhs, rhs


def check_contracted_dual(pol: SampledEqualityPolicy, ctx: ModuliContext, N: int = 4) -> IdentityReport:
    """Each key involves one comb index per side; keep keys where both are <= N."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "contracted-dual")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            z, lam, mu = draw(rng, 3)
            nu = lam - mu

            def keep(key):
                zpp, zp, zetap = key
                kl = _index(zpp, z - nu, ctx)
                kr = _index(zp, zetap - nu, ctx)
                return kl is not None and kr is not None and kl <= N and kr <= N

            log.add(max(keyed_residuals(*contracted_dual_sides(z, lam, mu, N, ctx), keep=keep)))
        log.draws = pol.n_samples
    return _report("W^z_z''/theta_1(2z'') <phi|phi_bar> = W^zeta'_z'/theta_1(2z') <phi|phi_bar>", "dual relation after orthogonality", log, pol, sw.ms, N=N)


def check_comb_difference(pol: SampledEqualityPolicy, ctx: ModuliContext, k_max: int = 3) -> IdentityReport:
    """Difference equations of the comb vertex on its supports k = 0..k_max."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "comb-difference")
        log = ResidualLog()
        e = ctx.eta
        T = lambda x: theta1(x, ctx)
        for _ in range(pol.n_samples):
            z, lam = draw(rng, 2)
            Wc = comb_vertex_W(lam, k_max + 1, ctx)
            res = []
            for k in range(k_max + 1):
                zeta = Wc.lower(z, k)
                w = Wc.weight(z, zeta)
                pre = T(2 * zeta + 2 * e) / T(2 * zeta)
                r1 = pre * T(z + zeta - lam) / T(z + zeta + lam + 2 * e)
                r2 = pre * T(zeta - z - lam) / T(zeta - z + lam + 2 * e)
                res.append(rel_residual(Wc.weight(z + e, zeta + e), r1 * w))
                res.append(rel_residual(Wc.weight(z - e, zeta + e), r2 * w))
            log.add(max(res))
        log.draws = pol.n_samples
    return _report("difference equations of W^z_zeta", "difference equations of the comb vertex", log, pol, sw.ms)


def check_comb_vertex_forms(pol: SampledEqualityPolicy, ctx: ModuliContext, k_max: int = 4) -> IdentityReport:
    """W^z_zeta(lam) W^{zeta,z}(lam+eta) = c(lam) theta_1(2 zeta), against the expanded gamma form."""
    with Stopwatch() as sw:
        rng = rng_for(pol, ctx, "comb-forms")
        log = ResidualLog()
        for _ in range(pol.n_samples):
            z, lam = draw(rng, 2)
            Wc = comb_vertex_W(lam, k_max, ctx)
            log.add(max(rel_residual(Wc.weight(z, Wc.lower(z, k)), Wc.weight_gamma_form(z, k)) for k in range(k_max + 1)))
        log.draws = pol.n_samples
    return _report("comb vertex coefficients: theta/W form = gamma form", "coefficients of the comb vertex", log, pol, sw.ms)
