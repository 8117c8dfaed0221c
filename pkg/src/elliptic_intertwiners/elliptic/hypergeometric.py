"""Elliptic Pochhammer symbols, the omega series and the Frenkel-Turaev sum."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..context import EPS_LATTICE, ModuliContext, near_integer, near_lattice_point
from ..errors import BalanceViolation, DomainError
from .theta import jacobi_theta


class _Terminating:
    def __repr__(self) -> str:
        return "TERMINATING"


#: pass as ``n_terms`` to sum a terminating series up to its natural end
TERMINATING = _Terminating()


def bracket(x: complex, ctx: ModuliContext) -> complex:
    """[x] = theta_1(2 x eta); exact zero when 2 x eta sits on the period lattice."""
    w = 2 * complex(x) * ctx.eta
    if near_lattice_point(w, ctx.tau):
        return 0j
    return jacobi_theta(1, w, ctx.tau, ctx.eps_term, ctx.k_max)


def pochhammer(x: complex, k: int, ctx: ModuliContext) -> complex:
    """[x]_k = [x][x+1]...[x+k-1]."""
    if k < 0:
        raise DomainError("Pochhammer order must be non-negative")
    prod = 1.0 + 0j
    for j in range(k):
        prod *= bracket(x + j, ctx)
    return prod


def elliptic_factorial(n: int, ctx: ModuliContext) -> complex:
    return pochhammer(1, n, ctx)


def elliptic_binomial(n: int, m: int, ctx: ModuliContext) -> complex:
    if m < 0 or m > n:
        raise DomainError(f"elliptic binomial needs 0 <= m <= n, got n={n}, m={m}")
    return elliptic_factorial(n, ctx) / (elliptic_factorial(m, ctx) * elliptic_factorial(n - m, ctx))


def _balance_ok(lhs: complex, rhs: complex) -> bool:
    return abs(lhs - rhs) < 1e-9 * max(1.0, abs(lhs), abs(rhs))


@dataclass(frozen=True)
class OmegaParams:
    """Parameters of {r+1}omega_r(alpha_1; alpha_4, ..., alpha_{r+1}; z)."""

    r: int
    alpha1: complex
    alphas: tuple[complex, ...]
    z_arg: complex = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "alphas", tuple(complex(a) for a in self.alphas))
        if self.r < 3:
            raise DomainError("omega series needs r >= 3")
        if len(self.alphas) != self.r - 2:
            raise DomainError(f"r={self.r} needs {self.r - 2} parameters alpha_4..alpha_{self.r + 1}, got {len(self.alphas)}")

    @property
    def termination_order(self) -> int | None:
        orders = []
        for a in self.alphas:
            k = near_integer(a, EPS_LATTICE)
            if k is not None and k <= 0:
                orders.append(-k)
        return min(orders) if orders else None

    @property
    def is_terminating(self) -> bool:
        return self.termination_order is not None

    @property
    def is_balanced(self) -> bool:
        if abs(self.z_arg - 1) > EPS_LATTICE:
            return False
        r = self.r
        return _balance_ok(r - 5 + (r - 3) * self.alpha1, 2 * sum(self.alphas))


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    last_term: float
    n_terms: int
    terms: tuple[complex, ...] = field(default=(), repr=False)


def omega_terms(p: OmegaParams, n_max: int, ctx: ModuliContext) -> list[complex]:
    """Terms c_0..c_{n_max} of the omega series, built from consecutive ratios."""
    a1 = p.alpha1
    base = bracket(a1, ctx)
    if base == 0:
        raise DomainError("[alpha_1] vanishes; the well-poised factor is undefined")
    ups = [a1, *p.alphas]
    downs = [1.0 + 0j, *(a1 - a + 1 for a in p.alphas)]
    terms = []
    c = 1.0 + 0j
    for k in range(n_max + 1):
        terms.append(c * bracket(a1 + 2 * k, ctx) / base)
        if k == n_max:
            break
        # pair numerator and denominator brackets so the running product stays in range
        step = p.z_arg
        for a, b in zip(ups, downs):
            d = bracket(b + k, ctx)
            if d == 0:
                raise DomainError(f"Pochhammer denominator vanishes at k={k + 1}")
            step *= bracket(a + k, ctx) / d
        c *= step
    return terms


def omega_series(p: OmegaParams, n_terms, ctx: ModuliContext) -> SeriesResult:
    """Partial sum of the omega series.

    ``n_terms=TERMINATING`` sums a terminating series up to its last non-zero
    term; an integer sums k = 0..n_terms-1 and reports the size of the last
    term as a tail indicator.
    """
    if n_terms is TERMINATING:
        order = p.termination_order
        if order is None:
            raise DomainError("series is not terminating; give an explicit truncation order")
        n_max = order
    else:
        if n_terms < 1:
            raise DomainError("need at least one term")
        n_max = int(n_terms) - 1
    terms = omega_terms(p, n_max, ctx)
    return SeriesResult(sum(terms), abs(terms[-1]), len(terms), tuple(terms))


def jackson_balanced(alpha1: complex, a4: complex, a5: complex, a6: complex, a7: complex, n: int) -> bool:
    return _balance_ok(2 * alpha1 + 1, a4 + a5 + a6 + a7 - n)


def jackson_sum(alpha1: complex, a4: complex, a5: complex, a6: complex, a7: complex, n: int, ctx: ModuliContext) -> complex:
    """Closed form of the terminating balanced 8omega7(alpha_1; a4, a5, a6, a7, -n)."""
    if n < 0:
        raise DomainError("termination order must be non-negative")
    if not jackson_balanced(alpha1, a4, a5, a6, a7, n):
        raise BalanceViolation(
            f"2 alpha_1 + 1 = {2 * alpha1 + 1} differs from alpha_4+...+alpha_7-n = {a4 + a5 + a6 + a7 - n}"
        )
    ups = (alpha1 + 1, alpha1 - a4 - a5 + 1, alpha1 - a4 - a6 + 1, alpha1 - a5 - a6 + 1)
    downs = (alpha1 - a4 + 1, alpha1 - a5 + 1, alpha1 - a6 + 1, alpha1 - a4 - a5 - a6 + 1)
    # ratio of Pochhammer products, accumulated factor by factor to avoid overflow
    out = 1.0 + 0j
    for j in range(n):
        for a, b in zip(ups, downs):
            d = bracket(b + j, ctx)
            if d == 0:
                raise DomainError("Jackson denominator vanishes")
            out *= bracket(a + j, ctx) / d
    return out
