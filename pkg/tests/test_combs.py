from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from elliptic_intertwiners import ModuliContext
from elliptic_intertwiners.combs import (
    Comb,
    DifferenceOperator,
    SampledEqualityPolicy,
    apply,
    combs_residual,
    compose,
    dumps,
    loads,
    operator_residuals,
    operators_equal,
    pair,
    sample_points,
    transpose,
)
from elliptic_intertwiners.combs import identities as comb_ids
from elliptic_intertwiners.elliptic import theta1
from elliptic_intertwiners.errors import DomainError, InfiniteSum, LatticeMismatch

CTX = ModuliContext(seed=3)
seeds = st.integers(0, 2**32 - 1)


def test_pair_function_with_delta():
    got = pair(lambda z: theta1(2 * z, CTX), Comb.delta(0.3, CTX))
    assert abs(got - theta1(0.6, CTX)) < 1e-15


def test_pair_delta_delta():
    assert pair(Comb.delta(0.3, CTX), Comb.delta(0.3, CTX)) == 1
    assert pair(Comb.delta(0.3, CTX), Comb.delta(0.3 + 1e-3, CTX)) == 0
    # lattice matching tolerates float drift along shift chains
    drifted = Comb.delta(0.3 + 2 * CTX.eta + 1e-13, CTX)
    assert pair(Comb(0.3 + 2 * CTX.eta, {0: 1.0}, eta=CTX.eta), drifted) == 1


def test_pair_left_against_right_finite_enumeration(pol):
    rep = comb_ids.check_pairing(pol, CTX)
    assert rep.passed, rep.max_residual


def test_pair_two_left_finite_combs_is_infinite():
    f = Comb(0.1, {0: 1.0, 1: 2.0}, "left-finite", CTX.eta)
    g = Comb(0.1, {0: 1.0}, "left-finite", CTX.eta)
    with pytest.raises(InfiniteSum):
        pair(f, g)


def test_pair_second_argument_must_be_comb():
    with pytest.raises(DomainError):
        pair(Comb.delta(0.1, CTX), lambda z: z)


def test_identity_operator_leaves_function_unchanged():
    f = comb_ids.probe_function(CTX)
    Id = DifferenceOperator.identity(CTX)
    for z in (0.1 + 0.2j, -0.3 + 0.05j):
        assert apply(Id, f)(z) == f(z)
    assert combs_residual(apply(Id, Comb.delta(0.2, CTX)), Comb.delta(0.2, CTX)) == 0


def test_transpose_of_identity_and_single_shift():
    Id = DifferenceOperator.identity(CTX)
    zs = [0.1 + 0.1j, -0.2 + 0.05j]
    assert max(operator_residuals(transpose(Id), Id, zs)) == 0
    a = 0.13 + 0.02j
    c = lambda z: theta1(z + 0.2, CTX)
    T = transpose(DifferenceOperator(a, {0: c}, CTX))
    assert T.mu == -a
    for z in zs:
        assert abs(T.coefficient(0, z) - c(z - a)) < 1e-15


@given(seeds)
def test_adjoint_pairing_property(seed):
    rng = np.random.default_rng(seed)
    D = comb_ids.random_operator(rng, CTX)
    g = comb_ids.random_comb(rng, CTX, 0.1 - 0.05j, 0, 3)
    Dg = apply(D, g)
    f = comb_ids.random_comb(rng, CTX, Dg.nu, -2, 6, "left-finite")
    lhs, rhs = pair(f, Dg), pair(apply(transpose(D), f), g)
    scale = sum(abs(a * b) for a in f.coeffs.values() for b in Dg.coeffs.values())
    assert abs(lhs - rhs) <= 1e-10 * scale


@given(seeds)
def test_transpose_involution_property(seed):
    D = comb_ids.random_operator(np.random.default_rng(seed), CTX)
    zs = [0.11 + 0.07j, -0.27 + 0.13j, 0.33 - 0.2j]
    assert max(operator_residuals(transpose(transpose(D)), D, zs)) < 1e-12


def test_compose_with_identity():
    D = comb_ids.random_operator(np.random.default_rng(1), CTX)
    Id = DifferenceOperator.identity(CTX)
    zs = [0.1 + 0.1j, 0.2 - 0.15j]
    assert max(operator_residuals(compose(D, Id), D, zs)) < 1e-15
    assert max(operator_residuals(compose(Id, D), D, zs)) < 1e-15


def test_compose_sklyanin_pair_against_sequential_apply():
    from elliptic_intertwiners.sklyanin import Spin, sklyanin_generator

    s1 = sklyanin_generator(1, Spin(0.37 + 0.21j), CTX)
    s2 = sklyanin_generator(2, Spin(0.37 + 0.21j), CTX)
    f = comb_ids.probe_function(CTX)
    seq = apply(s1, apply(s2, f))
    comp = apply(compose(s1, s2), f)
    for z in (0.13 + 0.04j, -0.22 + 0.1j, 0.31 - 0.07j):
        assert abs(comp(z) - seq(z)) <= 1e-10 * max(abs(seq(z)), 1.0)


def test_kernel_column_and_round_trip(pol):
    assert comb_ids.check_kernel_column(pol, CTX, n=5).passed


def test_composition_kernel_is_convolution():
    # the z-row of the product kernel is the row of D2 convolved with the rows of D1
    rng = np.random.default_rng(8)
    A, B = comb_ids.random_operator(rng, CTX), comb_ids.random_operator(rng, CTX)
    z = 0.17 - 0.09j
    conv = None
    for xi, a in A.kernel(z).points():
        row = B.kernel(xi).scale(a)
        conv = row if conv is None else conv + row
    assert combs_residual(compose(A, B).kernel(z), conv) < 1e-12


def test_sandwich_kernel(pol):
    assert comb_ids.check_sandwich(pol, CTX, n=3).passed


def test_associativity(pol):
    assert comb_ids.check_composition(pol, CTX, n=4).passed


def test_operators_equal_identical_and_scaled():
    D = comb_ids.random_operator(np.random.default_rng(2), CTX)
    pol = SampledEqualityPolicy(n_samples=10, rel_tol=1e-9)
    same = operators_equal(D, D, pol)
    assert same.passed and same.max_residual == 0
    scaled = operators_equal(D, D.scaled(1 + 1e-6), pol)
    assert not scaled.passed
    assert 5e-7 < scaled.max_residual < 2e-6


def test_operators_equal_transpose_twice():
    D = comb_ids.random_operator(np.random.default_rng(4), CTX)
    assert operators_equal(transpose(transpose(D)), D, SampledEqualityPolicy(n_samples=10)).passed


def test_operators_equal_lattice_mismatch():
    A = DifferenceOperator(0.0, {0: lambda z: 1.0}, CTX)
    B = DifferenceOperator(0.123, {0: lambda z: 1.0}, CTX)
    with pytest.raises(LatticeMismatch):
        operators_equal(A, B)
    with pytest.raises(LatticeMismatch):
        DifferenceOperator.from_shifts([(0.0, lambda z: 1.0), (0.1, lambda z: 1.0)], CTX)


def test_sample_points_deterministic_and_guarded():
    pol = SampledEqualityPolicy(n_samples=30, pole_guard=1e-2)
    a, b = sample_points(pol, CTX), sample_points(pol, CTX)
    assert a == b
    assert all(abs(theta1(2 * z, CTX)) > 1e-2 for z in a)
    assert sample_points(pol, ModuliContext(seed=4)) != a


@given(seeds, st.integers(-5, 0), st.integers(0, 5))
def test_serialization_round_trip(seed, lo, hi):
    rng = np.random.default_rng(seed)
    c = comb_ids.random_comb(rng, CTX, complex(rng.normal(), rng.normal()), lo, hi)
    back = loads(dumps(c), CTX)
    assert back.nu == c.nu and back.coeffs == c.coeffs


@pytest.mark.parametrize(
    "text",
    ["", "1 0.1 0.2\n", "nu=abc\n", "nu=0.1,0.2\n1 0.1\n", "nu=0.1,0.2\n1 x 0.2\n", "nu=0.1,0.2\n1 0 0\n1 0 0\n"],
)
def test_malformed_comb_text(text):
    with pytest.raises(DomainError):
        loads(text, CTX)


def test_left_finite_convolution_stays_left_finite():
    f = Comb(0.1, {0: 1.0, 2: 0.5}, "left-finite", CTX.eta)
    g = Comb(0.1, {1: 1.0}, "finite", CTX.eta)
    assert (f + g).finiteness == "left-finite"
    with pytest.raises(InfiniteSum):
        _ = f + Comb(0.1, {0: 1.0}, "right-finite", CTX.eta)


def test_comb_finiteness_flag_validated():
    with pytest.raises(DomainError):
        Comb(0.1, {0: 1.0}, "sideways")


def test_comb_checks_all_pass(pol):
    for rep in comb_ids.check_all(pol, CTX):
        assert rep.passed, (rep.identity, rep.max_residual)
