"""Registry of identity suites: what each runs, with which defaults, and how it is explained."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .. import vacuum
from ..combs import SampledEqualityPolicy
from ..combs import identities as comb_ids
from ..context import ModuliContext
from ..elliptic import identities as ell
from ..report import IdentityReport
from ..sklyanin import (
    Spin,
    check_annihilation,
    check_comb_form,
    check_commutation,
    check_half_matrices,
    check_intertwining,
    check_L_half,
    check_L_kernel,
    check_normalization,
    check_rll,
    check_W_forms,
    check_W_zero,
    check_WW_identity,
)
from ..vertex import relations as vx
from ..vertex import roperator as ro
from ..vertex import star_triangle as st

Runner = Callable[[SampledEqualityPolicy, ModuliContext], "IdentityReport | list[IdentityReport]"]


@dataclass(frozen=True)
class Check:
    identity: str
    anchor: str
    run: Runner
    displayed: bool = False
    rel_tol: float | None = None


@dataclass(frozen=True)
class Suite:
    name: str
    summary: str
    samples: int
    rel_tol: float
    checks: tuple[Check, ...]
    explain: str = field(repr=False, default="")


def _n(fn, **kw) -> Runner:
    """Adapter for the special-function checks, which take a draw count instead of a policy."""
    return lambda pol, ctx: fn(ctx, n=pol.n_samples, salt=pol.salt, **kw)


SPINS = (0.5, 1.0, 1.5, 0.37 + 0.21j)


def _spin_label(x: complex) -> str:
    x = complex(x)
    return f"{x.real:g}" if x.imag == 0 else f"{x.real:g}{x.imag:+g}i"


THETA = Suite(
    "theta", "Jacobi theta functions: periods, modular transform, product identities, Fay, order-n spaces", 100, 1e-10,
    (
        Check("quasi-periodicity", "shifts by the periods", lambda pol, ctx: ell.check_periods(ctx, n=2 * pol.n_samples, salt=pol.salt)),
        Check("modular transform", "modular transformation of theta", _n(ell.check_modular)),
        Check("series vs product and brute-force oracles", "theta function definitions", _n(ell.check_series_oracles)),
        Check("barred-theta bilinear relations", "theta-function product identities", _n(ell.check_theta34)),
        Check("Fay identity", "Fay trisecant identity", _n(ell.check_fay)),
        Check("order-n theta space", "theta functions of order n", _n(ell.check_theta_space)),
    ),
    """Jacobi theta functions theta_1..theta_4 (and the barred variants at modulus tau/2).

Identities: quasi-periodicity under x -> x +- 1, x +- tau at 2*samples points; the
-1/tau modular transformation; the adaptive series against the infinite product of
theta_1 and a fixed 101-term sum of theta_3; the four bilinear relations between
barred and plain theta functions; the three-term Fay identity; membership of
products prod theta_1(x - x_i), sum x_i = 0, in the order-n theta space.

Method: seeded uniform draws in |Re|, |Im| <= 0.5; residual |lhs - rhs| relative
to the larger side (or to the sum of the magnitudes of the added terms).
Default tolerance 1e-10 (1e-9 for the order-n products).""",
)

GAMMA = Suite(
    "gamma", "elliptic gamma function: shifts, reflection, inversion, ratio formulas, residues, modular transform", 100, 1e-10,
    (
        Check("shifts by 1, tau, 2 eta", "quasi-periodicity of the elliptic gamma function", _n(ell.check_gamma_shifts)),
        Check("reflection", "reflection of the elliptic gamma function", _n(ell.check_gamma_reflection)),
        Check("Gamma(z) Gamma(tau + 2eta - z) = 1", "inversion of the elliptic gamma function", _n(ell.check_gamma_inversion)),
        Check("ratio products k <= 8", "gamma ratios as theta products", _n(ell.check_gamma_ratios)),
        Check("ratios via Pochhammer symbols", "gamma ratios as Pochhammer symbols", _n(ell.check_gamma_pochhammer)),
        Check("residues", "residues of the elliptic gamma function", _n(ell.check_gamma_residues)),
        Check("modular transform", "modular transformation of the elliptic gamma function", _n(ell.check_gamma_modular)),
        Check("modular polynomial", "modular exponent polynomial", lambda pol, ctx: ell.check_modular_polynomial(ctx)),
        Check("fixed-truncation oracle", "elliptic gamma function definition", _n(ell.check_gamma_oracle)),
        Check("rho_0 closed forms", "normalization constant rho_0", lambda pol, ctx: ell.check_rho0(ctx)),
    ),
    """Elliptic gamma function Gamma(z|tau, 2 eta) from its double product.

Identities: Gamma(z+1) = Gamma(z) and the theta_1 shift factors for z -> z+tau,
z -> z+2eta (direct products on both sides); the reflection Gamma(z)Gamma(2eta-z)
and Gamma(z)Gamma(tau+2eta-z) = 1; closed forms of Gamma(x +- 2k eta)/Gamma(x) and
their Pochhammer versions for k <= 8; residues at -2k eta, k <= 4, against a
16-point trapezoid contour integral on seeded circles; the modular formula with
cubic P(z) at tau' = -0.1+0.5i (the default (tau, 2 eta) has Im(tau'/tau) < 0);
the adaptive product against a fixed 200x200 truncation; both closed forms of rho_0.

Default tolerance 1e-10 (1e-9 for ratios, 1e-8 for residues and the modular form).""",
)

HYPERGEO = Suite(
    "hypergeo", "elliptic Pochhammer symbols and the Frenkel-Turaev summation", 50, 1e-8,
    (
        Check("Frenkel-Turaev sum", "Jackson summation", lambda pol, ctx: ell.check_frenkel_turaev(ctx, n_draws=pol.n_samples, salt=pol.salt)),
        Check("two-term sum", "Jackson summation", lambda pol, ctx: ell.check_two_term_sum(ctx, n=2 * pol.n_samples, salt=pol.salt)),
        Check("Pochhammer basics", "elliptic Pochhammer symbols", lambda pol, ctx: ell.check_pochhammer_basics(ctx, n=2 * pol.n_samples, salt=pol.salt)),
        Check("vanishing sums", "vanishing terminating sums", lambda pol, ctx: ell.check_normalization_sum_vanishes(ctx)),
        Check("balancing detection", "balanced terminating series", lambda pol, ctx: ell.check_balancing_detector(ctx, n=2 * pol.n_samples, salt=pol.salt)),
    ),
    """Elliptic hypergeometric series {r+1}omega_r with [x] = theta_1(2 x eta).

Identities: for `samples` seeded balanced draws (alpha_7 fixed by the balancing
condition) and every n = 0..10, the terminating 8omega7(alpha_1; alpha_4..alpha_7, -n)
summed term by term equals the Frenkel-Turaev (elliptic Jackson) product of four
Pochhammer ratios, relative error < 1e-8; the explicit two-term sum at n = 1;
Pochhammer, factorial and binomial basics; sums whose closed form contains
[1-n]_n vanish; the balancing/termination detector.""",
)

COMB = Suite(
    "comb", "comb calculus: pairing, operator action, kernels, transposition, composition, serialization", 24, 1e-10,
    tuple(Check(f.__name__.removeprefix("check_").replace("_", " "), "comb calculus", f) for f in comb_ids.CHECKS),
    """Combs sum_k f_k delta(z - nu + 2k eta) and difference operators sum_k c_k(z) e^{(mu+2k eta) d}.

Identities: pairing of functions and combs (against explicit enumeration of
matching supports); (f, D g) = (D^t f, g) for 20 random triples; (D^t)^t = D;
action on delta(z - zeta_0) equals the kernel column and kernel rows rebuild the
operator; composition equals sequential application and is associative; the
kernel of F D G is F(z) D(z, zeta) G(zeta); the text serialization round trip.

Random operators have coefficients a theta_1(z - b) + c on three lattice indices.""",
)


def _commutation(spin: complex) -> Check:
    return Check(f"Sklyanin relations spin {_spin_label(spin)}", "Sklyanin algebra relations", lambda pol, ctx: check_commutation(Spin(spin), pol, ctx))


SKLYANIN = Suite(
    "sklyanin", "Sklyanin algebra relations, spin-1/2 matrices, L-operator kernel and RLL", 24, 1e-9,
    (
        *(_commutation(s) for s in SPINS),
        Check("spin-1/2 generator matrices", "spin-1/2 representation", lambda pol, ctx: check_half_matrices(ctx)),
        Check("spin-1/2 generator matrices (as displayed)", "spin-1/2 representation", lambda pol, ctx: check_half_matrices(ctx, printed=True), displayed=True),
        Check("L = R at spin 1/2", "L-operator at spin 1/2", lambda pol, ctx: check_L_half(ctx)),
        Check("L = R at spin 1/2 (as displayed)", "L-operator at spin 1/2", lambda pol, ctx: check_L_half(ctx, printed=True), displayed=True),
        Check("L kernel factorization", "L kernel factorization", lambda pol, ctx: check_L_kernel(Spin(0.37 + 0.21j), 0.13 + 0.05j, pol, ctx)),
        Check("L kernel via V matrices", "L kernel via V matrices", lambda pol, ctx: check_L_kernel(Spin(0.37 + 0.21j), 0.13 + 0.05j, pol, ctx, form="sandwich")),
        Check("L kernel via V matrices (as displayed)", "L kernel via V matrices", lambda pol, ctx: check_L_kernel(Spin(0.37 + 0.21j), 0.13 + 0.05j, pol, ctx, form="sandwich-printed"), displayed=True),
        Check("RLL at spin 1/2", "RLL relation", lambda pol, ctx: check_rll(0.21 + 0.03j, -0.08 + 0.06j, pol, ctx)),
    ),
    """Sklyanin generators s_0..s_3 as two-term difference operators
theta_{a+1}(+-2z - 2 ell eta)/theta_1(2z) e^{+-eta d}.

Identities: the six quadratic relations with structure constants
I_ab = theta_{a+1}(0) theta_{b+1}(2 eta) for ell in {1/2, 1, 3/2, 0.37+0.21i} as
sampled operator identities (compose both sides, compare coefficients shift by
shift at pole-guarded points); the spin-1/2 matrices in the (theta4bar, theta3bar)
basis and L(lam) = R(lam - eta/2) (both hold with the overall factors theta_1(2 eta)
and theta_1(2 eta)/2; the bare forms are run with displayed = true); the L kernel
against its vector factorization and the V-matrix sandwich; RLL at spin 1/2.

Residuals are relative to the cancellation magnitude of each coefficient.""",
)


def _fin(d: int) -> Check:
    return Check(f"intertwining d={d}", "intertwining of spins ell and -ell-1", lambda pol, ctx: check_intertwining(Spin((d - 1) / 2), pol, ctx))


def _ww(pol: SampledEqualityPolicy, ctx: ModuliContext) -> list[IdentityReport]:
    return check_WW_identity(0.23 + 0.11j, 6, pol, ctx)


INTERTWINER = Suite(
    "intertwiner", "the intertwiner W: annihilation, intertwining, series forms, normalization sums", 24, 1e-8,
    (
        Check("annihilation spin 1/2", "annihilation of even theta functions", lambda pol, ctx: check_annihilation(Spin(0.5), pol, ctx)),
        Check("annihilation spin 1", "annihilation of even theta functions", lambda pol, ctx: check_annihilation(Spin(1.0), pol, ctx)),
        *(_fin(d) for d in (1, 2, 3, 4)),
        Check("intertwining generic spin", "intertwining of spins ell and -ell-1", lambda pol, ctx: check_intertwining(Spin(0.3), pol, ctx, N=12), rel_tol=1e-7),
        Check("intertwining d=2 flipped", "intertwining of spins ell and -ell-1", lambda pol, ctx: check_intertwining(Spin(0.5), pol, ctx, flipped=True)),
        Check("matrix intertwining d=2", "intertwining of spins ell and -ell-1", lambda pol, ctx: check_intertwining(Spin(0.5), pol, ctx, matrix_form=True)),
        Check("series = finite W", "terminating series form", lambda pol, ctx: check_W_forms(1, 4, pol, ctx)),
        Check("series = finite W d=3", "terminating series form", lambda pol, ctx: check_W_forms(3, 5, pol, ctx)),
        Check("comb kernel = series", "comb kernel of the intertwiner", lambda pol, ctx: check_comb_form(0.23 + 0.11j, 6, pol, ctx)),
        Check("W(0) = id", "zero spectral parameter", check_W_zero),
        Check("normalization sums", "normalization of the comb kernel W", _ww),
        Check("rho_0 dual forms", "normalization constant rho_0", lambda pol, ctx: check_normalization([0.23 + 0.11j, -0.17 + 0.06j, 0.31 - 0.02j], ctx)),
    ),
    """The intertwiner W between spins ell and -ell-1.

Identities: W annihilates a basis of the even theta functions of order 4 ell for
ell = 1/2, 1; W s_a^(ell) = s_a^(-ell-1) W for d = 2 ell + 1 = 1..4 (finite sum form),
for ell = 0.3 with the series truncated at N = 12 (compared only on indices where
the truncated composition is exact, tolerance 1e-7), for the z -> -z variant and in
matrix form with the L-operator; the series at lam = d eta against the finite sum;
the comb kernel W^z_zeta against the series; the normalization sums S_n with
|S_n/S_0| -> 0 for n = 1..5, c(lam)c(-lam) theta_1(2z) S_0 = 1, and the closed form
of theta_1(2z) S_0 (with rho_0^-2; the bare rho_0^-1 form runs with displayed = true);
W(lam) W(-lam) = id; both closed forms of rho_0 and of c(lam) to 1e-12.""",
)


def _orth(k: int) -> Check:
    return Check(f"orthogonality {k}", "orthogonality of intertwining vectors", lambda pol, ctx: vx.check_orthogonality(k, pol, ctx))


VERTEX = Suite(
    "vertex", "intertwining vectors and vertex functions: orthogonality, intertwining, difference relations", 30, 1e-9,
    (
        Check("theta vector scalar products", "scalar product of theta vectors", vx.check_theta_vectors),
        Check("general scalar product", "scalar product of intertwining vectors", vx.check_scalar_product),
        Check("general scalar product (as displayed)", "scalar product of intertwining vectors", lambda pol, ctx: vx.check_scalar_product(pol, ctx, printed=True), displayed=True),
        *(_orth(k) for k in (1, 2, 3, 4)),
        Check("W W = 1", "inversion of the vertex function", vx.check_WW),
        Check("asymmetry", "asymmetry of the vertex function", vx.check_asymmetry),
        Check("vertex difference equations", "difference equations of the vertex function", vx.check_vertex_difference),
        Check("vertex difference equations (as displayed)", "difference equations of the vertex function", lambda pol, ctx: vx.check_vertex_difference(pol, ctx, printed=True), displayed=True),
        Check("vertex intertwining", "intertwining relation of the vertex function", vx.check_vertex_intertwining),
        Check("dual intertwining", "dual intertwining relation", vx.check_dual_intertwining),
        Check("contracted dual intertwining", "contracted dual intertwining relation", vx.check_contracted_dual),
        Check("comb difference relation", "difference relation of the comb vertex", vx.check_comb_difference),
        Check("comb vertex forms", "comb vertex function", vx.check_comb_vertex_forms),
    ),
    """Intertwining (co)vectors phi, phi_bar and the vertex functions W^{z,zeta}(lam)
(gamma-function ratio) and W^z_zeta(lam) (comb kernel).

Identities over `samples` seeded draws of (z, zeta, lam, mu): scalar products of
theta vectors; the four-term general scalar product (with prefactor
1/sqrt(theta_1(2z) theta_1(2 zeta)); the displayed half of it runs with
displayed = true); the four orthogonality/completeness relations; W(lam)W(-lam) = 1;
non-symmetry under z <-> zeta; the difference equations of W^{z,zeta}; the
vertex intertwining relation; the dual and contracted dual relations (half-infinite
combs truncated at N = 4, compared on exactly computed supports); the comb
difference relation; comb kernel forms. Contractions run through a delta-network
evaluator; residuals are relative to the magnitude of the summed products.""",
)

STAR = Suite(
    "star-triangle", "star-triangle relations and their operator forms", 10, 1e-8,
    (
        Check("first star-triangle relation", "star-triangle relation", lambda pol, ctx: st.check_star_triangle("a", pol, ctx)),
        Check("second star-triangle relation", "star-triangle relation", lambda pol, ctx: st.check_star_triangle("b", pol, ctx)),
        Check("first operator form", "6omega5 operator form", lambda pol, ctx: st.check_operator_form("a", pol, ctx)),
        Check("second operator form", "6omega5 operator form", lambda pol, ctx: st.check_operator_form("b", pol, ctx)),
        Check("C_n expansion", "coefficient expansion", st.check_C_expansion),
        Check("B_n closed form", "Frenkel-Turaev evaluation of B_n", st.check_B_closed),
        Check("B_n closed form (as displayed)", "Frenkel-Turaev evaluation of B_n", lambda pol, ctx: st.check_B_closed(pol, ctx, printed=True), displayed=True),
        Check("C_n / B_n ratio", "coefficient expansion", st.check_CB_ratio),
        Check("inner series balanced", "balancing of the inner series", st.check_balancing),
    ),
    """Star-triangle relations for the comb vertex W^z_zeta(lam).

Both sides are expanded as delta combs in (z, z'); the coefficients of
delta(z - z' + ... + 2n eta) for n <= 5 are compared at `samples` seeded draws of
(z, z', lam, mu, nu). On one side the inner sum over the middle vertex is a
terminating balanced 8omega7, evaluated in closed form with the Frenkel-Turaev
summation (the method used for the normalization sums); the operator forms, as
6omega5 series with operator argument, are compared coefficientwise for k <= 4.
The closed form of B_n carries theta_1(2z - 2lam + 2nu + 4n eta) and the bracketed
exponent with the opposite sign to the displayed one (displayed = true runs it).""",
)

ROP = Suite(
    "r-operator", "composite R-operator: kernel forms, trivial point, rewriting, RLL", 10, 1e-8,
    (
        Check("R kernel = operator form", "composite R-operator", ro.check_R_forms),
        Check("R(lam|lam) = id", "composite R-operator at coinciding parameters", ro.check_R_trivial),
        Check("rewriting identity", "operator rewriting of the R kernel", ro.check_rewriting),
        Check("RLL for the composite R", "R-operator intertwines L-operators", ro.check_rll),
    ),
    """The composite R-operator built from four comb vertices.

Identities: its kernel product against the explicit 4omega3 operator form; R = id
at coinciding spectral parameters; the rewriting identity for k <= 4; RLL at
ell = ell' = 1/2 (auxiliary-space matrix product, truncation N = 3, compared on
exactly computed supports), tolerance 1e-8. Yang-Baxter reduces to the
star-triangle suite.""",
)

SOP = Suite(
    "s-operator", "face-type S-operator kernel and the one-site transfer matrix", 10, 1e-8,
    (
        Check("S double sum = A_n form", "S-operator kernel", ro.check_S_sum_forms),
        Check("10omega9 balanced and terminating", "S-operator kernel", ro.check_S_balancing),
        Check("S kernel closed form", "S-operator kernel", ro.check_S_closed),
        Check("S kernel closed form (as displayed)", "S-operator kernel", lambda pol, ctx: ro.check_S_closed(pol, ctx, printed=True), displayed=True),
        Check("transfer matrix", "transfer matrix on one site", ro.check_transfer),
    ),
    """The S-operator kernel: a double sum over two vertex contractions, its single-sum
A_n form and the closed form through a terminating balanced 10omega9 for n <= 4
(balancing and termination asserted). The overall constant is fitted at n = 0 from
an independent draw; with the exponential e^{2 pi i z} it is constant in n (the
displayed e^{2 pi i xi} leaves a factor e^{-4 pi i eta n}; displayed = true runs it).
The one-site transfer matrix equals the S kernel with lam_+ and lam_- swapped, n <= 3.""",
)

VACUUM = Suite(
    "vacuum", "the K-operator and the vacuum vectors", 20, 1e-8,
    (
        Check("K sandwich = rho form", "explicit form of the K-operator", vacuum.check_K_forms),
        Check("K sandwich = rho form (as displayed)", "explicit form of the K-operator", lambda pol, ctx: vacuum.check_K_forms(pol, ctx, factor=1.0), displayed=True),
        Check("K X_R = 0", "right vacuum vector", vacuum.check_right_vacuum),
        Check("vacuum propagation", "vacuum vector through a vertex", vacuum.check_vac3),
        Check("vacuum exchange", "vacuum vector exchange relation", vacuum.check_vac4),
        Check("vacuum exchange (as displayed)", "vacuum vector exchange relation", lambda pol, ctx: vacuum.check_vac4(pol, ctx, printed=True), displayed=True),
        Check("vacuum pairing", "vacuum vector identity", vacuum.check_vac1),
        Check("left vacuum", "left vacuum vector", vacuum.check_left_vacuum),
    ),
    """The K-operator <zeta|L|xi>^perp, a two-term difference operator with
coefficients rho(+-z), and its vacuum vectors.

Identities over `samples` draws: the sandwich equals -2 times the rho form;
K X_R = 0 for the right vacuum built from two vertex functions (truncated at
N = 6, compared on interior supports against the local magnitude); the propagation
and exchange relations (the latter with the normalization ratio
c(lam_- - eta/2)/c(lam_- + eta/2)); the vacuum pairing identity; the left vacuum by
recursion against the transposed K.""",
)

SUITES: dict[str, Suite] = {s.name: s for s in (THETA, GAMMA, HYPERGEO, COMB, SKLYANIN, INTERTWINER, VERTEX, STAR, ROP, SOP, VACUUM)}
SUITE_NAMES: tuple[str, ...] = tuple(SUITES)

#: explain-only topics that refer to single identities inside a suite
TOPICS: dict[str, str] = {
    "star-triangle-a": """First star-triangle relation (suite star-triangle).

Two gamma-ratio vertices W^{z',z}(mu-nu) W^{z',z''}(lam-mu) times the comb vertex
W(lam-nu) from z to z'' equal the comb vertex W(lam-mu) from z to zeta, the
gamma-ratio vertex W^{z',zeta}(lam-nu) and the comb vertex W(mu-nu) from zeta to
z'', summed over the intermediate support zeta. Both sides are combs in z''
supported on z - lam + nu + 2n eta; coefficients n <= 5 are compared at 10 seeded
draws of (z, z', lam, mu, nu), relative error < 1e-8.
Method: the intermediate sum is a terminating balanced 8omega7, summed in closed
form with the Frenkel-Turaev formula, the same technique as for the normalization
sums S_n of the intertwiner; C_n/B_n = c(lam-mu)c(mu-nu)/c(lam-nu) is checked
separately and the 6omega5 operator form is compared for k <= 4.""",
    "star-triangle-b": """Second star-triangle relation (suite star-triangle).

The mirror relation W^{z,z'}(lam-mu) W^{z'',z'}(mu-nu) W(lam-nu) = sum over zeta of
W(mu-nu) W^{zeta,z'}(lam-nu) W(lam-mu), with the comb vertices in the same
positions as in the first relation. Expanded and compared the same way, n <= 5,
10 draws; its 6omega5 operator form is cross-checked for k <= 4.""",
    "frenkel-turaev": """Frenkel-Turaev summation (suite hypergeo), the elliptic Jackson sum.

For 2 alpha_1 + 1 = alpha_4 + alpha_5 + alpha_6 + alpha_7 - n the terminating
8omega7(alpha_1; alpha_4, ..., alpha_7, -n) equals
[alpha_1+1]_n [alpha_1-alpha_4-alpha_5+1]_n [alpha_1-alpha_4-alpha_6+1]_n [alpha_1-alpha_5-alpha_6+1]_n
divided by
[alpha_1-alpha_4+1]_n [alpha_1-alpha_5+1]_n [alpha_1-alpha_6+1]_n [alpha_1-alpha_4-alpha_5-alpha_6+1]_n.
Checked at 50 seeded balanced draws for every n <= 10, relative error < 1e-8.
Both sides accumulate ratios factor by factor so large theta values do not overflow.""",
}


def explain(name: str) -> str:
    from ..errors import UnknownSuite

    if name in SUITES:
        s = SUITES[name]
        lines = [f"{s.name}: {s.summary}", "", s.explain, "", f"default samples: {s.samples}, default tolerance: {s.rel_tol:g}", "checks:"]
        for c in s.checks:
            lines.append(f"  - {c.identity} [{c.anchor}]" + (" (runs with displayed = true)" if c.displayed else ""))
        return "\n".join(lines)
    if name in TOPICS:
        return TOPICS[name]
    valid = ", ".join((*SUITE_NAMES, *TOPICS))
    raise UnknownSuite(f"unknown suite {name!r}; valid names: {valid}")
