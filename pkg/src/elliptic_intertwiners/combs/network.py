"""Contraction of products of delta-comb kernels in several variables.

A kernel expression is a list of factors over named complex variables.
:class:`Pin` is a finite sum of terms coef(a, b) delta(a - b + shift): once one
end is known it fixes the other, one branch per term. :class:`Weight` is an
ordinary (meromorphic) function of variables that must already be fixed.
:func:`contract` enumerates all branches, which performs every integration
over non-output variables exactly, and groups the result by the values of
the output variables.
"""

from __future__ import annotations

import functools
import operator
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from ..context import EPS_LATTICE
from ..errors import DomainError

_KEY_SCALE = 1e8


@dataclass(frozen=True)
class Pin:
    """sum over terms of coef(a, b) delta(a - b + shift)."""

    a: str
    b: str
    terms: tuple[tuple[complex, Callable[[complex, complex], Any]], ...]

    def __init__(self, a: str, b: str, terms: Iterable[tuple[complex, Callable[[complex, complex], Any]]]):
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "terms", tuple((complex(s), f) for s, f in terms))

    def ready(self, bound: dict) -> bool:
        return self.a in bound or self.b in bound

    def branches(self, bound: dict):
        if self.a in bound and self.b in bound:
            va, vb = bound[self.a], bound[self.b]
            for s, f in self.terms:
                if abs(va - vb + s) < EPS_LATTICE * (1.0 + abs(va) + abs(vb)):
                    yield {}, f(va, vb)
        elif self.a in bound:
            va = bound[self.a]
            for s, f in self.terms:
                vb = va + s
                yield {self.b: vb}, f(va, vb)
        else:
            vb = bound[self.b]
            for s, f in self.terms:
                va = vb - s
                yield {self.a: va}, f(va, vb)


def delta(a: str, b: str, shift: complex = 0.0) -> Pin:
    """Plain delta(a - b + shift)."""
    return Pin(a, b, [(shift, lambda x, y: 1.0)])


@dataclass(frozen=True)
class Weight:
    """A function of already fixed variables."""

    variables: tuple[str, ...]
    fn: Callable[..., Any]

    def __init__(self, variables: Sequence[str], fn: Callable[..., Any]):
        object.__setattr__(self, "variables", tuple(variables))
        object.__setattr__(self, "fn", fn)

    def ready(self, bound: dict) -> bool:
        return all(v in bound for v in self.variables)

    def branches(self, bound: dict):
        yield {}, self.fn(*(bound[v] for v in self.variables))


def _qkey(values: Sequence[complex]) -> tuple:
    return tuple((round(v.real * _KEY_SCALE), round(v.imag * _KEY_SCALE)) for v in values)


class Keyed:
    """Sum of contributions grouped by the values of the output variables.

    Alongside each value the sum of absolute values of its contributions is
    kept, the scale against which cancellations are judged.
    """

    def __init__(self, outputs: Sequence[str]):
        self.outputs = tuple(outputs)
        self._data: dict[tuple, list] = {}

    def add(self, key: Sequence[complex], value: Any, magnitude: Any = None) -> None:
        q = _qkey(key)
        mag = np.abs(value) if magnitude is None else magnitude
        slot = self._data.get(q)
        if slot is None:
            self._data[q] = [tuple(key), value, mag]
        else:
            slot[1] = slot[1] + value
            slot[2] = slot[2] + mag

    def items(self) -> list[tuple[tuple, Any]]:
        return [(k, v) for k, v, _ in self._data.values()]

    def get(self, key: Sequence[complex], default: Any = 0.0) -> Any:
        slot = self._data.get(_qkey(key))
        return default if slot is None else slot[1]

    def magnitude(self, key: Sequence[complex], default: Any = 0.0) -> Any:
        slot = self._data.get(_qkey(key))
        return default if slot is None else slot[2]

    def keys(self) -> list[tuple]:
        return [k for k, _, _ in self._data.values()]

    def __len__(self) -> int:
        return len(self._data)

    def filtered(self, keep: Callable[[tuple], bool]) -> Keyed:
        out = Keyed(self.outputs)
        for k, v, m in self._data.values():
            if keep(k):
                out.add(k, v, m)
        return out

    def scaled(self, factor: Callable[[tuple], complex]) -> Keyed:
        """Multiply the value at each key by factor(key)."""
        out = Keyed(self.outputs)
        for k, v, m in self._data.values():
            f = factor(k)
            out.add(k, f * v, abs(f) * m)
        return out

    def __add__(self, other: Keyed) -> Keyed:
        out = Keyed(self.outputs)
        for src in (self, other):
            for k, v, m in src._data.values():
                out.add(k, v, m)
        return out

    def __neg__(self) -> Keyed:
        return self.scaled(lambda k: -1.0)

    def __sub__(self, other: Keyed) -> Keyed:
        return self + (-other)


def contract(
    factors: Sequence[Pin | Weight],
    fixed: dict[str, complex],
    outputs: Sequence[str],
    combine: Callable[[list], Any] | None = None,
) -> Keyed:
    """Sum the product of ``factors`` over every branch, grouped by ``outputs``.

    Variables that are neither fixed nor outputs are integrated. ``combine``
    turns the list of factor values (in factor order) into one value; by
    default the values are multiplied. It must be multilinear (products,
    dot and outer products) so that applying it to absolute values gives the
    magnitude of the term.
    """
    combine = combine or (lambda vals: functools.reduce(operator.mul, vals, 1.0))
    result = Keyed(outputs)
    factors = list(factors)
    n = len(factors)

    def walk(bound: dict, done: tuple[bool, ...], values: list) -> None:
        pick = None
        for i in range(n):
            if not done[i] and factors[i].ready(bound):
                pick = i
                break
        if pick is None:
            if all(done):
                missing = [v for v in outputs if v not in bound]
                if missing:
                    raise DomainError(f"output variables {missing} are not fixed by the network")
                mags = [np.abs(v) for v in values]
                result.add([bound[v] for v in outputs], combine(values), np.abs(combine(mags)))
                return
            raise DomainError("network has factors whose variables can never be fixed")
        new_done = done[:pick] + (True,) + done[pick + 1:]
        for binding, val in factors[pick].branches(bound):
            if isinstance(val, (int, float, complex)) and val == 0:
                continue
            nb = dict(bound)
            nb.update(binding)
            nv = list(values)
            nv[pick] = val
            walk(nb, new_done, nv)

    walk({k: complex(v) for k, v in fixed.items()}, (False,) * n, [None] * n)
    return result


def keyed_residuals(lhs: Keyed, rhs: Keyed, keep: Callable[[tuple], bool] | None = None) -> list[float]:
    """Residual per output key over the union of keys (optionally filtered).

    Entrywise |a - b| / max(|a|, |b|, m_a, m_b) with m the accumulated
    magnitudes, maximized over the entries of array values.
    """
    keys = {}
    for k in lhs.keys() + rhs.keys():
        keys[_qkey(k)] = k
    out = []
    for k in keys.values():
        if keep is not None and not keep(k):
            continue
        a = np.asarray(lhs.get(k, 0.0), dtype=complex)
        b = np.asarray(rhs.get(k, 0.0), dtype=complex)
        ma = np.asarray(lhs.magnitude(k, 0.0), dtype=float)
        mb = np.asarray(rhs.magnitude(k, 0.0), dtype=float)
        diff = np.abs(a - b)
        if not np.all(np.isfinite(diff)):
            out.append(float("inf"))
            continue
        denom = np.maximum(np.maximum(np.abs(a), np.abs(b)), np.maximum(ma, mb))
        ratio = np.where(diff > 0, diff / np.maximum(denom, 1e-300), 0.0)
        out.append(float(np.max(ratio)))
    return out


def keyed_from(outputs: Sequence[str], entries: Iterable[tuple[Sequence[complex], Any]]) -> Keyed:
    """Build a Keyed table from explicit (key, value) pairs."""
    out = Keyed(outputs)
    for k, v in entries:
        out.add(k, v)
    return out


def lattice_index(value: complex, base: complex, step: complex) -> float:
    """Real part of (value - base)/step; integer on the lattice base + step Z."""
    return ((value - base) / step).real
