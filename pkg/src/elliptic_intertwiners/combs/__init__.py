"""Combs, the delta pairing and difference operators."""

from .comb import Comb, combs_residual, dumps, loads, pair
from .network import Keyed, Pin, Weight, contract, delta, keyed_from, keyed_residuals, lattice_index
from .operator import (
    DifferenceOperator,
    SampledEqualityPolicy,
    apply,
    compose,
    from_kernel,
    left_multiply,
    operator_residuals,
    operators_equal,
    right_multiply,
    sample_points,
    transpose,
    zero_operator,
)

__all__ = [
    "Comb",
    "Keyed",
    "Pin",
    "Weight",
    "contract",
    "delta",
    "keyed_from",
    "keyed_residuals",
    "lattice_index",
    "DifferenceOperator",
    "SampledEqualityPolicy",
    "apply",
    "combs_residual",
    "compose",
    "dumps",
    "from_kernel",
    "left_multiply",
    "loads",
    "operator_residuals",
    "operators_equal",
    "pair",
    "right_multiply",
    "sample_points",
    "transpose",
    "zero_operator",
]
