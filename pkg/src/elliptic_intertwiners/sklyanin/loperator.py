"""The elliptic L-operator, its kernel and the 8-vertex R-matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..combs import DifferenceOperator, SampledEqualityPolicy, sample_points
from ..context import ModuliContext
from ..elliptic import theta, theta1
from ..report import IdentityReport, ResidualLog, Stopwatch, rel_residual
from ..vertex.vectors import V_adjugate, V_inverse, V_matrix, co_phi, phi_bar
from .generators import PAULI, Spin, generator_matrices, make_generators


@dataclass(frozen=True)
class LOperator:
    """2x2 matrix of difference operators in the quantum variable z."""

    entries: tuple[tuple[DifferenceOperator, DifferenceOperator], tuple[DifferenceOperator, DifferenceOperator]]
    spin: Spin
    lam: complex
    ctx: ModuliContext

    @property
    def lam_plus(self) -> complex:
        return self.lam + (self.spin.ell + 0.5) * self.ctx.eta

    @property
    def lam_minus(self) -> complex:
        return self.lam - (self.spin.ell + 0.5) * self.ctx.eta

    def __getitem__(self, ij: tuple[int, int]) -> DifferenceOperator:
        return self.entries[ij[0]][ij[1]]

    def kernel(self, z: complex) -> dict[int, np.ndarray]:
        """{+1, -1}: 2x2 coefficient of delta(z - zeta +/- eta) in the direct form."""
        out = {}
        for sign in (1, -1):
            k = 1 if sign == 1 else 0
            out[sign] = np.array([[self[i, j].coefficient(k, z) for j in range(2)] for i in range(2)])
        return out


def make_L(spin: Spin, lam: complex, ctx: ModuliContext) -> LOperator:
    g = make_generators(spin, ctx)
    t = [theta(b, 2 * lam, ctx) for b in range(1, 5)]
    s = g.s
    half = 0.5
    entries = (
        ((half * t[0]) * s[0] + (half * t[3]) * s[3], (half * t[1]) * s[1] + (half * t[2]) * s[2]),
        ((half * t[1]) * s[1] - (half * t[2]) * s[2], (half * t[0]) * s[0] - (half * t[3]) * s[3]),
    )
    return LOperator(entries, spin, complex(lam), ctx)


def make_L_pm(lam_plus: complex, lam_minus: complex, ctx: ModuliContext) -> LOperator:
    """L in the (lambda_+, lambda_-) parametrization."""
    lam = (lam_plus + lam_minus) / 2
    ell = (lam_plus - lam_minus) / (2 * ctx.eta) - 0.5
    return make_L(Spin(ell), lam, ctx)


def kernel_sandwich(spin: Spin, lam: complex, z: complex, ctx: ModuliContext, printed_inverse: bool = False) -> dict[int, np.ndarray]:
    """theta_1(2 lam + 2 ell eta) V^{-1}(lam + ell eta, z) diag(delta_+, delta_-) V(lam - ell eta, z).

    ``printed_inverse`` substitutes the displayed explicit matrix, which is
    the adjugate over 2 theta_1(2z) (theta_1(2 lam) times the inverse).
    """
    ell, e = spin.ell, ctx.eta
    pre = theta1(2 * lam + 2 * ell * e, ctx)
    A = V_adjugate(lam + ell * e, z, ctx) if printed_inverse else V_inverse(lam + ell * e, z, ctx)
    B = V_matrix(lam - ell * e, z, ctx)
    return {1: pre * np.outer(A[:, 0], B[0, :]), -1: pre * np.outer(A[:, 1], B[1, :])}


def kernel_factorized(spin: Spin, lam: complex, z: complex, ctx: ModuliContext) -> dict[int, np.ndarray]:
    """|phi_bar(lam_+ - eta/2)> <phi(lam_- + eta/2)| with coinciding delta supports."""
    e = ctx.eta
    lp = lam + (spin.ell + 0.5) * e
    lm = lam - (spin.ell + 0.5) * e
    ket = phi_bar(lp - e / 2, ctx).components(z)
    bra = co_phi(lm + e / 2, ctx).components(z)
    return {1: np.outer(ket[0][1], bra[0][1]), -1: np.outer(ket[1][1], bra[1][1])}


def check_L_kernel(
    spin: Spin,
    lam: complex,
    pol: SampledEqualityPolicy,
    ctx: ModuliContext,
    form: str = "factorized",
) -> IdentityReport:
    """Direct L kernel against the sandwich ("sandwich", "sandwich-printed") or factorized form."""
    with Stopwatch() as sw:
        L = make_L(spin, lam, ctx)
        log = ResidualLog()
        zs = sample_points(pol, ctx)
        for z in zs:
            K = L.kernel(z)
            if form == "factorized":
                K2 = kernel_factorized(spin, lam, z, ctx)
            else:
                K2 = kernel_sandwich(spin, lam, z, ctx, printed_inverse=(form == "sandwich-printed"))
            scale = max(np.abs(K[1]).max(), np.abs(K[-1]).max())
            log.add(max(rel_residual(K[s], K2[s], scale) for s in (1, -1)))
        log.draws = len(zs)
    names = {
        "factorized": ("L kernel = product of intertwining vectors", "L kernel factorization"),
        "sandwich": ("L kernel = V^-1 diag V sandwich", "L kernel via V matrices"),
        "sandwich-printed": ("L kernel = V^-1 diag V sandwich (as displayed)", "L kernel via V matrices"),
    }
    ident, anchor = names[form]
    return IdentityReport.from_log("sklyanin", ident, anchor, log, pol.rel_tol, sw.ms)


def r_matrix(lam: complex, ctx: ModuliContext) -> np.ndarray:
    """8-vertex R(lambda) = sum_a theta_{a+1}(2 lam + eta)/theta_{a+1}(eta) sigma_a (x) sigma_a."""
    e = ctx.eta
    return sum(theta(a + 1, 2 * lam + e, ctx) / theta(a + 1, e, ctx) * np.kron(PAULI[a], PAULI[a]) for a in range(4))


def L_half_matrix(lam: complex, ctx: ModuliContext, mats: list[np.ndarray] | None = None) -> np.ndarray:
    """L(lambda) at spin 1/2 as a 4x4 matrix (auxiliary (x) quantum) from generator matrices."""
    S = mats if mats is not None else generator_matrices(ctx)[0]
    t = [theta(b, 2 * lam, ctx) for b in range(1, 5)]
    blocks = [
        [t[0] * S[0] + t[3] * S[3], t[1] * S[1] + t[2] * S[2]],
        [t[1] * S[1] - t[2] * S[2], t[0] * S[0] - t[3] * S[3]],
    ]
    return 0.5 * np.block(blocks)


def rll_sides(lam: complex, mu: complex, ctx: ModuliContext):
    """Both sides of R(lam - mu) L1(lam) L2(mu) = L2(mu) L1(lam) R(lam - mu) at spin 1/2.

    Entries are difference operators indexed by (i j), (k l) in the 4-dim
    auxiliary space.
    """
    half = Spin(0.5)
    La, Lb = make_L(half, lam, ctx), make_L(half, mu, ctx)
    R = r_matrix(lam - mu, ctx)
    pairs = [(i, j) for i in range(2) for j in range(2)]
    P12 = {(a, b): La[p[0], q[0]] @ Lb[p[1], q[1]] for a, p in enumerate(pairs) for b, q in enumerate(pairs)}
    P21 = {(a, b): Lb[p[1], q[1]] @ La[p[0], q[0]] for a, p in enumerate(pairs) for b, q in enumerate(pairs)}
    lhs, rhs = {}, {}
    for a in range(4):
        for b in range(4):
            lhs[a, b] = _lin([(R[a, m], P12[m, b]) for m in range(4)])
            rhs[a, b] = _lin([(R[m, b], P21[a, m]) for m in range(4)])
    return lhs, rhs


def _lin(terms):
    out = None
    for c, D in terms:
        if c == 0:
            continue
        out = c * D if out is None else out + c * D
    return out


def check_rll(lam: complex, mu: complex, pol: SampledEqualityPolicy, ctx: ModuliContext) -> IdentityReport:
    with Stopwatch() as sw:
        lhs, rhs = rll_sides(lam, mu, ctx)
        zs = sample_points(pol, ctx)
        log = ResidualLog()
        for z in zs:
            # one scale for the whole 4x4 block so structurally small entries do not dominate
            diffs, scale = [], 0.0
            for key in lhs:
                ca = lhs[key].coefficients(z) if lhs[key] is not None else {}
                cb = rhs[key].coefficients(z) if rhs[key] is not None else {}
                for k in set(ca) | set(cb):
                    x, y = ca.get(k, 0j), cb.get(k, 0j)
                    diffs.append(abs(x - y))
                    scale = max(scale, abs(x), abs(y))
            log.add(max(diffs) / scale)
        log.draws = len(zs)
    return IdentityReport.from_log("sklyanin", "RLL = LLR at spin 1/2", "RLL relation", log, pol.rel_tol, sw.ms)


def check_L_half(ctx: ModuliContext, printed: bool = False, n: int = 10, tol: float = 1e-9) -> IdentityReport:
    """L(lam) at spin 1/2 against theta_1(2 eta)/2 R(lam - eta/2); ``printed`` drops the factor."""
    with Stopwatch() as sw:
        rng = np.random.default_rng([ctx.seed, 1212])
        mats = generator_matrices(ctx)[0]
        scale = 1.0 if printed else theta1(2 * ctx.eta, ctx) / 2
        log = ResidualLog()
        for _ in range(n):
            lam = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.3, 0.3))
            log.add(rel_residual(L_half_matrix(lam, ctx, mats), scale * r_matrix(lam - ctx.eta / 2, ctx)))
        log.draws = n
    ident = "L(lam) = " + ("R(lam - eta/2) (as displayed)" if printed else "theta_1(2 eta)/2 R(lam - eta/2)") + " at spin 1/2"
    return IdentityReport.from_log("sklyanin", ident, "L-operator at spin 1/2", log, tol, sw.ms)
