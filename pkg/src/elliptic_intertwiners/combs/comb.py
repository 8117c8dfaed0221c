"""Combs: formal sums of delta functions on a shifted 2-eta lattice."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

from ..context import EPS_LATTICE, ModuliContext, near_integer
from ..errors import DomainError, InfiniteSum
from ..report import rel_residual

FINITENESS = ("finite", "left-finite", "right-finite")


@dataclass(frozen=True)
class Comb:
    """sum_k f_k delta(z - nu + 2k eta); support points are nu - 2k eta.

    Only finitely many coefficients are stored. ``finiteness`` records which
    ideal object the stored data truncates: finite from the left means
    f_k = 0 below some index, finite from the right means f_k = 0 above it.
    """

    nu: complex
    coeffs: Mapping[int, complex]
    finiteness: str = "finite"
    eta: complex = field(default=0.05 + 0.25j, compare=False)

    def __post_init__(self) -> None:
        if self.finiteness not in FINITENESS:
            raise DomainError(f"finiteness must be one of {FINITENESS}")
        object.__setattr__(self, "nu", complex(self.nu))
        object.__setattr__(self, "coeffs", {int(k): complex(v) for k, v in self.coeffs.items()})

    @classmethod
    def delta(cls, a: complex, ctx: ModuliContext) -> Comb:
        return cls(a, {0: 1.0}, "finite", ctx.eta)

    def support(self, k: int) -> complex:
        return self.nu - 2 * k * self.eta

    def points(self) -> list[tuple[complex, complex]]:
        return [(self.support(k), c) for k, c in sorted(self.coeffs.items())]

    def index_of(self, w: complex) -> int | None:
        """Lattice index k with support(k) = w within the lattice tolerance."""
        return near_integer((self.nu - w) / (2 * self.eta), EPS_LATTICE)

    def coefficient_at(self, w: complex) -> complex:
        k = self.index_of(w)
        if k is None:
            return 0j
        return self.coeffs.get(k, 0j)

    def rebase(self, nu: complex) -> Comb:
        """Same distribution written with offset ``nu`` (must be lattice-commensurate)."""
        d = near_integer((nu - self.nu) / (2 * self.eta), EPS_LATTICE)
        if d is None:
            raise DomainError("offsets are not commensurate with the 2 eta lattice")
        return Comb(nu, {k + d: c for k, c in self.coeffs.items()}, self.finiteness, self.eta)

    def scale(self, factor: complex) -> Comb:
        return Comb(self.nu, {k: factor * c for k, c in self.coeffs.items()}, self.finiteness, self.eta)

    def map_coeffs(self, fn: Callable[[complex, complex], complex]) -> Comb:
        """Multiply by a function: coefficient at support w becomes fn(w, f)."""
        return Comb(self.nu, {k: fn(self.support(k), c) for k, c in self.coeffs.items()}, self.finiteness, self.eta)

    def __add__(self, other: Comb) -> Comb:
        o = other.rebase(self.nu)
        out = dict(self.coeffs)
        for k, c in o.coeffs.items():
            out[k] = out.get(k, 0j) + c
        fin = self.finiteness if self.finiteness == o.finiteness else _join(self.finiteness, o.finiteness)
        return Comb(self.nu, out, fin, self.eta)

    def __sub__(self, other: Comb) -> Comb:
        return self + other.scale(-1.0)

    def __mul__(self, factor: complex) -> Comb:
        return self.scale(factor)

    __rmul__ = __mul__

    def __call__(self, shift: complex) -> Comb:
        """The comb in z of f(z + shift)."""
        return Comb(self.nu - shift, self.coeffs, self.finiteness, self.eta)


def _join(a: str, b: str) -> str:
    kinds = {a, b} - {"finite"}
    if len(kinds) == 1:
        return kinds.pop()
    if not kinds:
        return "finite"
    raise InfiniteSum("sum of a left-finite and a right-finite comb is finite on neither side")


def pair(f, g: Comb):
    """The pairing (f, g) against a comb g.

    For a function f this is sum_k g_k f(support_k). For two combs the
    supports are matched on the lattice; two combs that are both infinite on
    the same side have no well-defined pairing.
    """
    if not isinstance(g, Comb):
        raise DomainError("second argument of pair must be a Comb")
    if isinstance(f, Comb):
        if f.finiteness == g.finiteness and f.finiteness != "finite":
            raise InfiniteSum(f"pairing two {f.finiteness} combs sums over an infinite set")
        d = near_integer((f.nu - g.nu) / (2 * g.eta), EPS_LATTICE)
        if d is None:
            return 0j
        # f.support(j) == g.support(k)  <=>  j = k + d
        return sum((c * f.coeffs.get(k + d, 0j) for k, c in g.coeffs.items()), 0j)
    return sum((c * f(g.support(k)) for k, c in g.coeffs.items()), 0j)


def combs_residual(a: Comb, b: Comb, indices=None) -> float:
    """Max relative coefficient difference over the union of supports (or ``indices`` of a)."""
    bb = b.rebase(a.nu)
    keys = set(a.coeffs) | set(bb.coeffs) if indices is None else set(indices)
    scale = max([abs(v) for v in a.coeffs.values()] + [abs(v) for v in bb.coeffs.values()] + [0.0])
    worst = 0.0
    for k in keys:
        worst = max(worst, rel_residual(a.coeffs.get(k, 0j), bb.coeffs.get(k, 0j), scale))
    return worst


def dumps(c: Comb) -> str:
    lines = [f"nu={c.nu.real!r},{c.nu.imag!r}"]
    for k in sorted(c.coeffs):
        v = c.coeffs[k]
        lines.append(f"{k} {v.real!r} {v.imag!r}")
    return "\n".join(lines) + "\n"


def loads(text: str, ctx: ModuliContext | None = None, finiteness: str = "finite") -> Comb:
    """Parse the line format written by :func:`dumps`; '#' starts a comment."""
    nu = None
    coeffs: dict[int, complex] = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if nu is None:
            if not line.startswith("nu="):
                raise DomainError(f"line {n}: expected 'nu=<re>,<im>'")
            try:
                re_s, im_s = line[3:].split(",")
                nu = complex(float(re_s), float(im_s))
            except ValueError:
                raise DomainError(f"line {n}: malformed offset {line!r}") from None
            continue
        parts = line.split()
        if len(parts) != 3:
            raise DomainError(f"line {n}: expected 'k <re> <im>'")
        try:
            k, v = int(parts[0]), complex(float(parts[1]), float(parts[2]))
        except ValueError:
            raise DomainError(f"line {n}: malformed coefficient {line!r}") from None
        if k in coeffs:
            raise DomainError(f"line {n}: duplicate index {k}")
        coeffs[k] = v
    if nu is None:
        raise DomainError("empty comb text")
    eta = ctx.eta if ctx is not None else Comb.__dataclass_fields__["eta"].default
    return Comb(nu, coeffs, finiteness, eta)
