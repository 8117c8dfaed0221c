"""Difference operators sum_k c_k(z) exp((mu + 2k eta) d/dz) and their calculus."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from ..context import EPS_LATTICE, ModuliContext, near_integer
from ..elliptic.theta import theta1
from ..errors import DomainError, LatticeMismatch
from ..report import IdentityReport, ResidualLog, Stopwatch
from .comb import Comb

Evaluator = Callable[[complex], complex]
Batch = Callable[[complex], dict]


class DifferenceOperator:
    """Operator with base offset ``mu`` and coefficient evaluators per lattice index.

    Term k multiplies by c_k(z) and shifts the argument by mu + 2k eta.
    Elementary operators are built from a mapping k -> evaluator; composite
    ones from a batch function z -> {k: c_k(z)} so that shared
    sub-expressions are evaluated once per point.
    """

    __slots__ = ("mu", "ctx", "indices", "_terms", "_batch", "_mag")

    def __init__(
        self,
        mu: complex,
        terms: Mapping[int, Evaluator] | None,
        ctx: ModuliContext,
        *,
        batch: Batch | None = None,
        indices: Iterable[int] | None = None,
        magnitude: Batch | None = None,
    ):
        self.mu = complex(mu)
        self.ctx = ctx
        self._mag = magnitude
        if terms is not None:
            self._terms = {int(k): f for k, f in terms.items()}
            self.indices = tuple(sorted(self._terms))
            self._batch = None
        else:
            if batch is None or indices is None:
                raise DomainError("either terms or (batch, indices) is required")
            self._terms = None
            self._batch = batch
            self.indices = tuple(sorted(indices))

    # construction helpers -------------------------------------------------
    @classmethod
    def identity(cls, ctx: ModuliContext) -> DifferenceOperator:
        return cls(0, {0: lambda z: 1.0 + 0j}, ctx)

    @classmethod
    def multiplication(cls, fn: Evaluator, ctx: ModuliContext) -> DifferenceOperator:
        return cls(0, {0: fn}, ctx)

    @classmethod
    def from_shifts(cls, pairs: Iterable[tuple[complex, Evaluator]], ctx: ModuliContext) -> DifferenceOperator:
        """Build from (shift, evaluator) pairs whose shifts lie on one 2 eta lattice."""
        pairs = list(pairs)
        mu = pairs[0][0]
        terms: dict[int, Evaluator] = {}
        for s, f in pairs:
            k = near_integer((s - mu) / (2 * ctx.eta), EPS_LATTICE)
            if k is None:
                raise LatticeMismatch(f"shift {s} is not on the lattice of {mu}")
            if k in terms:
                g = terms[k]
                terms[k] = lambda z, f=f, g=g: f(z) + g(z)
            else:
                terms[k] = f
        return cls(mu, terms, ctx)

    # evaluation -----------------------------------------------------------
    @property
    def eta(self) -> complex:
        return self.ctx.eta

    def shift(self, k: int) -> complex:
        return self.mu + 2 * k * self.ctx.eta

    def coefficients(self, z: complex) -> dict[int, complex]:
        z = complex(z)
        if self._batch is not None:
            return self._batch(z)
        return {k: complex(f(z)) for k, f in self._terms.items()}

    def magnitudes(self, z: complex) -> dict[int, float]:
        """Per index, the sum of absolute values of the products that were added up.

        For an elementary operator this is just |c_k(z)|; composites track it
        through composition, sums and scaling so residuals can be judged
        against the cancellation scale.
        """
        z = complex(z)
        if self._mag is not None:
            return self._mag(z)
        return {k: abs(v) for k, v in self.coefficients(z).items()}

    def coefficient(self, k: int, z: complex) -> complex:
        if self._terms is not None:
            f = self._terms.get(k)
            return 0j if f is None else complex(f(complex(z)))
        return self._batch(complex(z)).get(k, 0j)

    @property
    def terms(self) -> dict[int, Evaluator]:
        if self._terms is not None:
            return dict(self._terms)
        return {k: (lambda z, k=k: self.coefficient(k, z)) for k in self.indices}

    def __call__(self, f):
        return apply(self, f)

    # algebra ----------------------------------------------------------------
    def _offset_of(self, other: DifferenceOperator) -> int:
        d = near_integer((other.mu - self.mu) / (2 * self.ctx.eta), EPS_LATTICE)
        if d is None:
            raise LatticeMismatch(f"offsets {self.mu} and {other.mu} differ by a non-lattice amount")
        return d

    def __add__(self, other: DifferenceOperator) -> DifferenceOperator:
        d = self._offset_of(other)
        a, b = self, other
        idx = set(a.indices) | {k + d for k in b.indices}

        def batch(z: complex) -> dict:
            out = dict(a.coefficients(z))
            for k, v in b.coefficients(z).items():
                out[k + d] = out.get(k + d, 0j) + v
            return out

        def mag(z: complex) -> dict:
            out = dict(a.magnitudes(z))
            for k, v in b.magnitudes(z).items():
                out[k + d] = out.get(k + d, 0.0) + v
            return out

        return DifferenceOperator(a.mu, None, a.ctx, batch=batch, indices=idx, magnitude=mag)

    def __neg__(self) -> DifferenceOperator:
        return self.scaled(-1.0)

    def __sub__(self, other: DifferenceOperator) -> DifferenceOperator:
        return self + (-other)

    def scaled(self, factor: complex) -> DifferenceOperator:
        factor = complex(factor)
        src = self
        af = abs(factor)
        return DifferenceOperator(
            src.mu, None, src.ctx,
            batch=lambda z: {k: factor * v for k, v in src.coefficients(z).items()},
            indices=src.indices,
            magnitude=lambda z: {k: af * v for k, v in src.magnitudes(z).items()},
        )

    def __rmul__(self, factor: complex) -> DifferenceOperator:
        return self.scaled(factor)

    def __mul__(self, factor: complex) -> DifferenceOperator:
        return self.scaled(factor)

    def __matmul__(self, other: DifferenceOperator) -> DifferenceOperator:
        return compose(self, other)

    def restricted(self, indices: Iterable[int]) -> DifferenceOperator:
        keep = set(indices)
        src = self
        return DifferenceOperator(
            src.mu, None, src.ctx,
            batch=lambda z: {k: v for k, v in src.coefficients(z).items() if k in keep},
            indices=[k for k in src.indices if k in keep],
            magnitude=lambda z: {k: v for k, v in src.magnitudes(z).items() if k in keep},
        )

    def kernel(self, z: complex) -> Comb:
        """Row z of the kernel: sum_k c_k(z) delta(zeta - z - mu - 2k eta) as a comb in zeta."""
        z = complex(z)
        cs = self.coefficients(z)
        return Comb(z + self.mu, {-k: v for k, v in cs.items()}, "finite", self.ctx.eta)

    def kernel_column(self, zeta: complex) -> Comb:
        """Column zeta of the kernel as a comb in z (equal to the action on delta(z - zeta))."""
        zeta = complex(zeta)
        nu = zeta - self.mu
        return Comb(nu, {k: self.coefficient(k, nu - 2 * k * self.ctx.eta) for k in self.indices}, "finite", self.ctx.eta)

    def __repr__(self) -> str:
        return f"DifferenceOperator(mu={self.mu}, indices={self.indices})"


def from_kernel(row: Callable[[complex], Comb], mu: complex, indices: Iterable[int], ctx: ModuliContext) -> DifferenceOperator:
    """Rebuild an operator from its kernel rows z -> comb in zeta."""
    mu = complex(mu)

    def batch(z: complex) -> dict:
        comb = row(z)
        return {k: comb.coefficient_at(z + mu + 2 * k * ctx.eta) for k in idx}

    idx = tuple(indices)
    return DifferenceOperator(mu, None, ctx, batch=batch, indices=idx)


def apply(D: DifferenceOperator, f):
    """(D f)(z) = sum_k c_k(z) f(z + mu + 2k eta), for a function or a comb."""
    if isinstance(f, Comb):
        nu = f.nu - D.mu
        eta = D.ctx.eta
        out: dict[int, complex] = {}
        cache: dict[int, dict] = {}
        for j, fj in f.coeffs.items():
            for k in D.indices:
                n = j + k
                if n not in cache:
                    cache[n] = D.coefficients(nu - 2 * n * eta)
                out[n] = out.get(n, 0j) + cache[n].get(k, 0j) * fj
        return Comb(nu, out, f.finiteness, eta)

    def g(z: complex) -> complex:
        z = complex(z)
        cs = D.coefficients(z)
        return sum((c * f(z + D.shift(k)) for k, c in cs.items()), 0j)

    return g


def transpose(D: DifferenceOperator) -> DifferenceOperator:
    """D^t = sum_k c_k(z - mu - 2k eta) exp(-(mu + 2k eta) d/dz)."""
    src = D
    shifts = {k: src.shift(k) for k in src.indices}
    terms = {-k: (lambda z, k=k: src.coefficient(k, z - shifts[k])) for k in src.indices}
    return DifferenceOperator(-src.mu, terms, src.ctx)


def compose(D2: DifferenceOperator, D1: DifferenceOperator) -> DifferenceOperator:
    """D2 D1: coefficient of index n is sum_{j+k=n} c2_j(z) c1_k(z + mu2 + 2j eta)."""
    mu = D2.mu + D1.mu
    idx = {j + k for j in D2.indices for k in D1.indices}

    def batch(z: complex) -> dict:
        out: dict[int, complex] = {}
        for j, c2 in D2.coefficients(z).items():
            if c2 == 0:
                continue
            for k, c1 in D1.coefficients(z + D2.shift(j)).items():
                out[j + k] = out.get(j + k, 0j) + c2 * c1
        return out

    def mag(z: complex) -> dict:
        out: dict[int, float] = {}
        for j, m2 in D2.magnitudes(z).items():
            if m2 == 0:
                continue
            for k, m1 in D1.magnitudes(z + D2.shift(j)).items():
                out[j + k] = out.get(j + k, 0.0) + m2 * m1
        return out

    return DifferenceOperator(mu, None, D2.ctx, batch=batch, indices=idx, magnitude=mag)


def left_multiply(fn: Evaluator, D: DifferenceOperator) -> DifferenceOperator:
    return compose(DifferenceOperator.multiplication(fn, D.ctx), D)


def right_multiply(D: DifferenceOperator, fn: Evaluator) -> DifferenceOperator:
    return compose(D, DifferenceOperator.multiplication(fn, D.ctx))


def zero_operator(mu: complex, ctx: ModuliContext) -> DifferenceOperator:
    return DifferenceOperator(mu, None, ctx, batch=lambda z: {}, indices=())


@dataclass(frozen=True)
class SampledEqualityPolicy:
    """How operator identities are sampled: count, window, pole guard and tolerance.

    ``window`` is (re_min, re_max, im_min, im_max).
    """

    n_samples: int = 24
    window: tuple[float, float, float, float] = (-0.45, 0.45, -0.3, 0.3)
    pole_guard: float = 1e-4
    rel_tol: float = 1e-9
    salt: int = 0


def sample_points(pol: SampledEqualityPolicy, ctx: ModuliContext, guard: Callable[[complex], bool] | None = None) -> list[complex]:
    """Deterministic draws in the window with |theta_1(2z)| above the pole guard."""
    rng = np.random.default_rng([ctx.seed, pol.salt])
    lo_r, hi_r, lo_i, hi_i = pol.window
    pts: list[complex] = []
    attempts = 0
    while len(pts) < pol.n_samples:
        attempts += 1
        if attempts > 100 * pol.n_samples + 100:
            raise RuntimeError("could not draw enough pole-free sample points")
        z = complex(rng.uniform(lo_r, hi_r), rng.uniform(lo_i, hi_i))
        if abs(theta1(2 * z, ctx)) <= pol.pole_guard:
            continue
        if guard is not None and not guard(z):
            continue
        pts.append(z)
    return pts


def operator_residuals(A: DifferenceOperator, B: DifferenceOperator, zs: Iterable[complex], indices: Iterable[int] | None = None) -> list[float]:
    """Per-sample max residual between the coefficients of A and B (indexed on A's lattice).

    Index k contributes |a_k - b_k| / max(|a_k|, |b_k|, m_k) where m_k is the
    larger of the two cancellation magnitudes, so coefficients that vanish
    through exact cancellation are judged against the size of what cancelled.
    """
    d = A._offset_of(B)
    keep = None if indices is None else set(indices)
    out = []
    for z in zs:
        ca = A.coefficients(z)
        cb = {k + d: v for k, v in B.coefficients(z).items()}
        ma = A.magnitudes(z)
        mb = {k + d: v for k, v in B.magnitudes(z).items()}
        keys = set(ca) | set(cb)
        if keep is not None:
            keys &= keep
        worst = 0.0
        for k in keys:
            a, b = ca.get(k, 0j), cb.get(k, 0j)
            diff = abs(a - b)
            if not math.isfinite(diff):
                worst = math.inf
                break
            denom = max(abs(a), abs(b), ma.get(k, 0.0), mb.get(k, 0.0))
            if diff > 0:
                worst = max(worst, diff / max(denom, 1e-300))
        out.append(worst)
    return out


def operators_equal(
    A: DifferenceOperator,
    B: DifferenceOperator,
    pol: SampledEqualityPolicy = SampledEqualityPolicy(),
    *,
    indices: Iterable[int] | None = None,
    suite: str = "comb",
    identity: str = "operator equality",
    anchor: str = "sampled coefficient comparison",
) -> IdentityReport:
    """Compare A and B shift by shift at pole-guarded random samples."""
    A._offset_of(B)
    with Stopwatch() as sw:
        zs = sample_points(pol, A.ctx)
        log = ResidualLog()
        log.extend(operator_residuals(A, B, zs, indices))
        log.draws = len(zs)
    return IdentityReport.from_log(suite, identity, anchor, log, pol.rel_tol, sw.ms)


def max_residual(values: Iterable[float]) -> float:
    vals = list(values)
    return max(vals) if vals else math.nan
