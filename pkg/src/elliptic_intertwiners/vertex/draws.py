"""Seeded parameter draws shared by the vertex-layer checks."""

from __future__ import annotations

import zlib

import numpy as np

from ..combs import SampledEqualityPolicy
from ..context import ModuliContext

#: box (re_min, re_max, im_min, im_max) for spectral parameters and variables
PARAM_BOX = (-0.3, 0.3, -0.15, 0.15)


def rng_for(pol: SampledEqualityPolicy, ctx: ModuliContext, label: str) -> np.random.Generator:
    """Generator keyed by the context seed, the policy salt and a label."""
    return np.random.default_rng([ctx.seed, pol.salt, zlib.crc32(label.encode())])


def draw(rng: np.random.Generator, n: int, box: tuple[float, float, float, float] = PARAM_BOX) -> list[complex]:
    lo_r, hi_r, lo_i, hi_i = box
    return [complex(rng.uniform(lo_r, hi_r), rng.uniform(lo_i, hi_i)) for _ in range(n)]
