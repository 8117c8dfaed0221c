from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from elliptic_intertwiners import ModuliContext
from elliptic_intertwiners.combs import SampledEqualityPolicy, apply, sample_points
from elliptic_intertwiners.elliptic import elliptic_binomial, gamma_constants, theta, theta1
from elliptic_intertwiners.errors import DomainError
from elliptic_intertwiners.sklyanin import (
    S0_closed,
    S_sum,
    Spin,
    check_annihilation,
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
    generator_matrices,
    make_W_finite,
    make_W_series,
    perturbed_constants,
    sklyanin_generator,
    theta_plus_basis,
    theta_S0_simplified,
)
from elliptic_intertwiners.sklyanin.intertwiner import basis_rank

PI = math.pi
CTX = ModuliContext(seed=5)
POL = SampledEqualityPolicy(n_samples=6)


@pytest.mark.parametrize("ell", [0.5, 1.0, 1.5, 0.37 + 0.21j])
def test_quadratic_relations(ell):
    rep = check_commutation(Spin(ell), POL, CTX)
    assert rep.passed, (rep.max_residual, rep.details)


def test_perturbed_structure_constant_fails():
    rep = check_commutation(Spin(0.5), POL, CTX, constants=perturbed_constants(CTX, rel=1e-4))
    assert not rep.passed
    assert rep.max_residual > 1e-6


def test_uniform_scaling_of_constants_is_a_symmetry():
    from elliptic_intertwiners.sklyanin import StructureConstants

    I = StructureConstants(StructureConstants.from_context(CTX).I * 1.37)
    assert check_commutation(Spin(0.5), POL, CTX, constants=I).passed


@given(st.integers(0, 3), st.floats(-0.4, 0.4), st.floats(-0.3, 0.3))
def test_kernel_evenness(a, x, y):
    z = complex(x, y)
    if abs(theta1(2 * z, CTX)) < 1e-3:
        return
    s = sklyanin_generator(a, Spin(0.37 + 0.21j), CTX)
    # s_a(-z, -z') = s_a(z, z'): the +eta coefficient at z is the -eta coefficient at -z
    assert abs(s.coefficient(1, z) - s.coefficient(0, -z)) <= 1e-12 * abs(s.coefficient(1, z))


def test_s0_on_constant_function():
    ell = 0.37 + 0.21j
    s0 = sklyanin_generator(0, Spin(ell), CTX)
    e = CTX.eta
    for z in (0.13 + 0.05j, -0.21 + 0.12j):
        hand = (theta1(2 * z - 2 * ell * e, CTX) - theta1(-2 * z - 2 * ell * e, CTX)) / theta1(2 * z, CTX)
        assert abs(apply(s0, lambda w: 1.0)(z) - hand) < 1e-13


def test_half_matrices_with_overall_factor():
    rep = check_half_matrices(CTX)
    assert rep.passed and rep.details["fit_residual"] < 1e-12


def test_half_matrices_as_displayed_fail_by_a_scalar():
    rep = check_half_matrices(CTX, printed=True)
    assert not rep.passed
    # the mismatch is exactly the scalar theta_1(2 eta), the same for all four matrices
    mats, _ = generator_matrices(CTX)
    for a, M in enumerate(mats):
        ph = -1j if a == 2 else 1.0
        from elliptic_intertwiners.sklyanin import PAULI

        E = ph * PAULI[a] / theta(a + 1, CTX.eta, CTX)
        k = np.unravel_index(np.argmax(np.abs(E)), E.shape)
        assert abs(M[k] / E[k] - theta1(2 * CTX.eta, CTX)) < 1e-10


def test_L_half_equals_R():
    assert check_L_half(CTX).passed
    assert not check_L_half(CTX, printed=True).passed


def test_L_kernel_factorization():
    assert check_L_kernel(Spin(0.37 + 0.21j), 0.13 + 0.05j, POL, CTX).passed
    assert check_L_kernel(Spin(0.37 + 0.21j), 0.13 + 0.05j, POL, CTX, form="sandwich").passed


def test_displayed_V_inverse_is_the_adjugate():
    from elliptic_intertwiners.vertex.vectors import V_adjugate, V_inverse, V_matrix

    lam, z = 0.21 + 0.04j, 0.12 - 0.07j
    V = V_matrix(lam, z, CTX)
    assert np.allclose(V @ V_inverse(lam, z, CTX), np.eye(2), atol=1e-12)
    # the displayed inverse is theta_1(2 lam) V^-1, not V^-1
    assert np.allclose(V @ V_adjugate(lam, z, CTX), theta1(2 * lam, CTX) * np.eye(2), atol=1e-12)


def test_rll_spin_half():
    assert check_rll(0.21 + 0.03j, -0.08 + 0.06j, POL, CTX).passed


# --- intertwiner --------------------------------------------------------------


@pytest.mark.parametrize("ell", [0.5, 1.0])
def test_annihilation(ell):
    rep = check_annihilation(Spin(ell), POL, CTX)
    assert rep.passed
    assert rep.details["basis_rank"] == int(2 * ell + 1)


def test_theta_plus_basis_needs_half_integer_spin():
    with pytest.raises(DomainError):
        theta_plus_basis(Spin(0.3), CTX)
    basis = theta_plus_basis(Spin(0.5), CTX)
    assert basis_rank(basis, sample_points(POL, CTX)) == 2


def test_finite_W_term_count_and_domain():
    assert len(make_W_finite(Spin(0.0), CTX).indices) == 2
    assert len(make_W_finite(Spin(1.5), CTX).indices) == 5
    with pytest.raises(DomainError):
        make_W_finite(Spin(0.3), CTX)
    with pytest.raises(DomainError):
        make_W_series(0.1, 0, CTX)


def test_finite_W_coefficient_k1_d2():
    W = make_W_finite(Spin(0.5), CTX)
    e, z, d = CTX.eta, 0.17 + 0.06j, 2
    from elliptic_intertwiners.elliptic import dedekind_eta

    pre = (1j * cmath.exp(1j * PI * (-e + CTX.tau / 6)) * dedekind_eta(CTX.tau)) ** d
    den = theta1(2 * z + 2 * e, CTX) * theta1(2 * z, CTX) * theta1(2 * z - 2 * e, CTX)
    direct = -pre * elliptic_binomial(2, 1, CTX) * theta1(2 * z, CTX) / den
    assert abs(W.coefficient(1, z) - direct) <= 1e-13 * abs(direct)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_intertwining_finite(d):
    assert check_intertwining(Spin((d - 1) / 2), POL, CTX).passed


def test_intertwining_generic_spin_truncated():
    rep = check_intertwining(Spin(0.3), SampledEqualityPolicy(n_samples=4, rel_tol=1e-7), CTX, N=12)
    assert rep.passed, rep.max_residual


def test_intertwining_sign_flipped_and_matrix_form():
    assert check_intertwining(Spin(0.5), POL, CTX, flipped=True).passed
    assert check_intertwining(Spin(0.5), POL, CTX, matrix_form=True).passed


def test_series_terminates_to_finite_form():
    assert check_W_forms(1, 4, SampledEqualityPolicy(n_samples=6, rel_tol=1e-10), CTX).passed


def test_series_k0_coefficient_closed_form():
    from elliptic_intertwiners.elliptic import elliptic_gamma

    lam, z, e = 0.23 + 0.11j, 0.14 - 0.03j, CTX.eta
    W = make_W_series(lam, 3, CTX)
    G = lambda x: elliptic_gamma(x, CTX)
    direct = cmath.exp(-1j * PI * lam**2 / e + 2j * PI * lam * z / e) * G(2 * z - 2 * lam + 2 * e) / G(2 * z + 2 * e)
    assert abs(W.coefficient(0, z) - direct) <= 1e-12 * abs(direct)


def test_W_at_zero_is_identity():
    assert check_W_zero(POL, CTX).passed


def test_normalization_sums():
    lam = 0.23 + 0.11j
    z = 0.12 + 0.04j
    s0 = S_sum(0, z, lam, CTX)
    for n in range(1, 6):
        assert abs(S_sum(n, z, lam, CTX) / s0) < 1e-8
    assert abs(S0_closed(z, lam, CTX) / s0 - 1) < 1e-10
    reps = [r for r in check_WW_identity(lam, 6, POL, CTX) if "(as displayed" not in r.identity]
    assert reps and all(r.passed for r in reps), [(r.identity, r.max_residual) for r in reps if not r.passed]


def test_theta_S0_closed_form_power():
    lam, z = 0.23 + 0.11j, 0.12 + 0.04j
    lhs = theta1(2 * z, CTX) * S_sum(0, z, lam, CTX)
    assert abs(theta_S0_simplified(lam, CTX, power=2) / lhs - 1) < 1e-8
    # the single power is off by the factor rho_0
    rho0 = gamma_constants(CTX).rho0
    assert abs(theta_S0_simplified(lam, CTX, power=1) / lhs - rho0) < 1e-8 * abs(rho0)


def test_rho0_and_c_dual_forms():
    assert check_normalization([0.23 + 0.11j, -0.17 + 0.06j], CTX).passed
