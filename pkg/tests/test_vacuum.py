from __future__ import annotations

import numpy as np
import pytest

from elliptic_intertwiners import ModuliContext, vacuum
from elliptic_intertwiners.combs import SampledEqualityPolicy, operator_residuals
from elliptic_intertwiners.elliptic.identities import fay_sides

CTX = ModuliContext(seed=13)
POL = SampledEqualityPolicy(n_samples=5)


def test_K_sandwich_matches_rho_form():
    rep = vacuum.check_K_forms(POL, CTX)
    assert rep.passed, rep.max_residual


def test_K_sandwich_without_factor_fails():
    rep = vacuum.check_K_forms(POL, CTX, factor=1.0)
    assert not rep.passed
    assert "(as displayed" in rep.identity


def test_K_sandwich_factor_is_minus_two():
    K = vacuum.build_K(0.13 + 0.04j, -0.08 + 0.09j, 0.21 + 0.02j, -0.17 + 0.05j, CTX)
    zs = [0.11 + 0.05j, -0.19 + 0.12j, 0.27 - 0.08j]
    assert max(operator_residuals(K.sandwich(), K.operator().scaled(-2.0), zs)) < 1e-10


def test_rho_vanishes_at_numerator_zero():
    zeta, xi, lp, lm = 0.13 + 0.04j, -0.08 + 0.09j, 0.21, -0.17
    z = -zeta + lp - CTX.eta / 2  # theta_1(z + zeta - lam_+ + eta/2) = 0
    assert abs(vacuum.rho(z, zeta, xi, lp, lm, CTX)) < 1e-14


def test_right_vacuum_annihilated():
    assert vacuum.check_right_vacuum(POL, CTX).passed


def test_vacuum_propagation_and_exchange():
    assert vacuum.check_vac3(POL, CTX).passed
    assert vacuum.check_vac4(POL, CTX).passed
    bare = vacuum.check_vac4(POL, CTX, printed=True)
    assert not bare.passed and bare.max_residual > 1e-3


def test_vacuum_pairing_and_left_vacuum():
    assert vacuum.check_vac1(POL, CTX).passed
    assert vacuum.check_left_vacuum(POL, CTX).passed


def test_vacuum_comb_is_left_finite():
    X = vacuum.VacuumVector(0.1 + 0.02j, -0.05 + 0.07j, 0.2 + 0.03j, -0.12 + 0.04j, 4, CTX)
    c = X.comb()
    assert c.finiteness == "left-finite"
    assert sorted(c.coeffs) == list(range(5))


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_fay_identity_standalone(seed):
    rng = np.random.default_rng(seed)
    args = [complex(*rng.uniform(-0.4, 0.4, 2)) for _ in range(5)]
    lhs, rhs, scale = fay_sides(*args, CTX)
    assert abs(lhs - rhs) <= 1e-10 * scale
