from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from elliptic_intertwiners import ModuliContext
from elliptic_intertwiners.elliptic import (
    TERMINATING,
    OmegaParams,
    bracket,
    dedekind_eta,
    elliptic_binomial,
    elliptic_factorial,
    elliptic_gamma,
    elliptic_gamma_general,
    gamma_constants,
    gamma_modular,
    gamma_ratio,
    gamma_reflection,
    gamma_residue,
    gamma_shift,
    jackson_balanced,
    jackson_sum,
    jacobi_theta,
    modular_polynomial,
    omega_series,
    pochhammer,
    theta1,
)
from elliptic_intertwiners.elliptic import identities as ell
from elliptic_intertwiners.errors import BalanceViolation, DomainError, NonConvergence

PI = math.pi
CTX = ModuliContext()

# frozen values from independent oracles
THETA3_0_I = 1.0864348112133082  # 101-term direct sum, k in [-50, 50]
GAMMA_04 = 0.4780186318157676 + 0.16900925785058074j  # 200x200 product, tau=2i, 2eta=0.5i
GAMMA_03_01 = 0.7087874352366353 + 0.32811450854812135j  # same oracle at z=0.3+0.1i


def box(re: float = 0.45, im: float = 0.45):
    return st.builds(complex, st.floats(-re, re), st.floats(-im, im))


def off_pole(re: float = 0.45, im: float = 0.3):
    """Draws away from the gamma pole at 0 (the only pole or zero inside the box)."""
    return box(re, im).filter(lambda z: abs(z) > 1e-2)


def rel(a, b, floor: float = 0.0) -> float:
    """|a - b| relative to the larger side; ``floor`` guards values that pass through zero."""
    return abs(a - b) / max(abs(a), abs(b), floor, 1e-300)


# --- theta ---------------------------------------------------------------------


def test_theta1_is_odd_at_zero():
    assert abs(jacobi_theta(1, 0j, 1j)) < 1e-14


def test_theta1_period_one_example():
    z = 0.3 + 0.1j
    assert rel(jacobi_theta(1, z + 1, 1j), -jacobi_theta(1, z, 1j)) < 1e-13


def test_theta3_brute_force_oracle():
    k = np.arange(-50, 51)
    brute = complex(np.sum(np.exp(-PI * k**2)))
    assert abs(brute - THETA3_0_I) < 1e-15
    assert abs(jacobi_theta(3, 0j, 1j) - THETA3_0_I) < 1e-14
    # closed form pi^{1/4} / Gamma(3/4)
    assert abs(THETA3_0_I - PI**0.25 / math.gamma(0.75)) < 1e-14


def test_theta1_modular_example():
    z, tau = 0.2, 2j
    rhs = 1j * cmath.sqrt(1j / tau) * cmath.exp(-1j * PI * z * z / tau) * jacobi_theta(1, z / tau, -1 / tau)
    assert rel(jacobi_theta(1, z, tau), rhs) < 1e-10
    assert abs(jacobi_theta(1, 0j, -1 / tau)) < 1e-15


def direct_theta(a: int, z: complex, tau: complex, K: int = 40) -> complex:
    n = np.arange(-K, K + 1)
    half = 0.5 if a in (1, 2) else 0.0
    w = z + 0.5 if a in (1, 4) else z
    s = complex(np.sum(np.exp(1j * PI * tau * (n + half) ** 2 + 2j * PI * (n + half) * w)))
    return -s if a == 1 else s


@given(box())
def test_theta2_theta4_modular_pairing(z):
    tau = 2j
    lhs = direct_theta(2, z, tau)
    rhs = cmath.sqrt(1j / tau) * cmath.exp(-1j * PI * z * z / tau) * direct_theta(4, z / tau, -1 / tau)
    assert rel(lhs, rhs, 1.0) < 1e-10


@given(box(), st.integers(1, 4))
def test_series_matches_direct_sum(z, a):
    assert rel(jacobi_theta(a, z, CTX.tau), direct_theta(a, z, CTX.tau), 1.0) < 1e-12


@given(box())
def test_quasi_periodicity(z):
    tau = CTX.tau
    t = lambda w: theta1(w, CTX)
    assert rel(t(z + 1), -t(z), 1.0) < 1e-12
    assert rel(t(z + tau), -cmath.exp(-1j * PI * tau - 2j * PI * z) * t(z), 1.0) < 1e-12


@given(box(), box(), box(), box(), box())
def test_fay_property(z, a, b, c, d):
    lhs, rhs, scale = ell.fay_sides(z, a, b, c, d, CTX)
    # coinciding arguments make every term pure roundoff of theta_1(0); compare absolutely there
    assert abs(lhs - rhs) <= 1e-10 * max(scale, 1e-2)


def test_theta_space_products_even_order():
    rep = ell.check_theta_space(CTX, n=20)
    assert rep.passed, rep


def test_theta_nonconvergence_reported():
    with pytest.raises(NonConvergence):
        jacobi_theta(3, 0.1, 1e-4j, k_max=5)


def test_theta_domain():
    with pytest.raises(DomainError):
        jacobi_theta(5, 0.1, 1j)
    with pytest.raises(DomainError):
        ModuliContext(tau=-1j)


# --- elliptic gamma ----------------------------------------------------------------


def test_gamma_frozen_product_oracle():
    assert rel(elliptic_gamma_general(0.4, 2j, 0.5j), GAMMA_04) < 1e-12
    assert rel(elliptic_gamma_general(0.3 + 0.1j, 2j, 0.5j), GAMMA_03_01) < 1e-12


def test_gamma_period_one_example():
    z = 0.3 + 0.2j
    assert rel(elliptic_gamma(z + 1, CTX), elliptic_gamma(z, CTX)) < 1e-12
    assert gamma_shift(z, "1", CTX) == elliptic_gamma(z, CTX)


def test_gamma_shift_2eta_example():
    z = 0.3
    assert rel(gamma_shift(z, "2eta", CTX), elliptic_gamma(z + 2 * CTX.eta, CTX)) < 1e-10


@given(off_pole())
def test_gamma_inversion(z):
    assert rel(elliptic_gamma(z, CTX) * elliptic_gamma(CTX.tau + 2 * CTX.eta - z, CTX), 1.0) < 1e-10


@given(off_pole(0.45, 0.2))
def test_gamma_reflection(z):
    lhs = elliptic_gamma(z, CTX) * elliptic_gamma(2 * CTX.eta - z, CTX)
    assert rel(lhs, gamma_reflection(z, CTX)) < 1e-10


@given(off_pole(0.4, 0.3), st.integers(-6, 6))
def test_gamma_ratio_formula(x, k):
    # x + 2k eta can land on a pole -j tau - 2m eta for negative k
    assume(all(abs(x + 2 * k * CTX.eta + j * CTX.tau + 2 * m * CTX.eta) > 1e-2 for j in range(3) for m in range(8)))
    direct = elliptic_gamma(x + 2 * k * CTX.eta, CTX) / elliptic_gamma(x, CTX)
    assert rel(gamma_ratio(x, k, CTX), direct) < 1e-9


def test_gamma_modular_example():
    # tau' = 0.5i has Im(tau'/tau) = 0, where the transformed products do not converge;
    # tilting tau' off the imaginary axis gives a convergent pair
    z, sigma = 0.3 + 0.1j, -0.1 + 0.5j
    direct = elliptic_gamma_general(z, 2j, sigma)
    assert rel(gamma_modular(z, CTX, tau=2j, sigma=sigma), direct) < 1e-8


def test_gamma_modular_rejects_divergent_moduli():
    with pytest.raises(DomainError):
        gamma_modular(0.1, CTX)  # default Im(2eta/tau) < 0
    with pytest.raises(DomainError):
        gamma_modular(0.1, CTX, tau=2j, sigma=0.5j)


def test_modular_polynomial_constant_term():
    tau, s = 2j, 0.5j
    expect = -(tau + s - 1) * (tau + s - tau * s) / (12 * tau * s)
    assert abs(modular_polynomial(0, tau, s) - expect) < 1e-15


def test_modular_polynomial_is_cubic():
    tau, s = 2j, -0.1 + 0.5j
    xs = [0.0, 0.3, 0.7, 1.2, 1.9]
    vals = [modular_polynomial(x, tau, s) for x in xs]
    # divided differences of order 4 vanish for a cubic
    table = list(vals)
    for order in range(1, 5):
        table = [(table[i + 1] - table[i]) / (xs[i + order] - xs[i]) for i in range(len(table) - 1)]
    assert abs(table[0]) < 1e-10


def test_residue_k0_closed_form():
    c = gamma_constants(CTX)
    eta_t = dedekind_eta(CTX.tau)
    eta_s = dedekind_eta(2 * CTX.eta)
    expect = -cmath.exp(1j * PI * (CTX.tau + 2 * CTX.eta) / 12) / (2j * PI * eta_t * eta_s)
    assert rel(c.r0, expect) < 1e-14
    assert rel(gamma_residue(0, CTX), expect) < 1e-14


def test_residue_limit_oracle():
    # z Gamma(z) on a small circle around 0, and (z + 4 eta) Gamma(z) around -4 eta
    for k, pole in ((0, 0j), (2, -4 * CTX.eta)):
        r = 1e-8  # the lattice pole guard is 1e-9
        vals = [r * cmath.exp(1j * t) * elliptic_gamma(pole + r * cmath.exp(1j * t), CTX) for t in (0.3, 1.9, 4.1)]
        for v in vals:
            assert rel(v, gamma_residue(k, CTX)) < 1e-6


def test_rho0_dual_expressions():
    c = gamma_constants(CTX)
    assert rel(c.rho0, c.rho0_alt) < 1e-12


# --- elliptic hypergeometric ----------------------------------------------------


def test_pochhammer_examples():
    x = 0.3 + 0.2j
    assert pochhammer(x, 0, CTX) == 1
    assert rel(pochhammer(x, 1, CTX), theta1(2 * x * CTX.eta, CTX)) < 1e-15
    direct = theta1(2 * CTX.eta, CTX) * theta1(4 * CTX.eta, CTX) * theta1(6 * CTX.eta, CTX)
    assert rel(elliptic_factorial(3, CTX), direct) < 1e-14


def test_binomial_examples():
    for k in range(5):
        assert rel(elliptic_binomial(k, 0, CTX), 1.0) < 1e-15
        assert rel(elliptic_binomial(k, k, CTX), 1.0) < 1e-15
    f = lambda n: pochhammer(1, n, CTX)
    assert rel(elliptic_binomial(4, 2, CTX), f(4) / (f(2) * f(2))) < 1e-14
    with pytest.raises(DomainError):
        elliptic_binomial(2, 3, CTX)


def test_bracket_exact_zero_on_lattice():
    assert bracket(0, CTX) == 0
    assert bracket(1 / (2 * CTX.eta), CTX) == 0


def test_terminating_at_zero_is_one():
    p = OmegaParams(7, 0.3 + 0.1j, (0.2, -0.4j, 0.7, 0.1 + 0.3j, 0))
    assert p.termination_order == 0
    assert omega_series(p, TERMINATING, CTX).value == 1


def test_two_term_jackson_example():
    rng = np.random.default_rng(5)
    a1, a4, a5, a6, a7 = ell.balanced_draw(rng, 1)
    assert jackson_balanced(a1, a4, a5, a6, a7, 1)
    s = ell.eight_omega_seven(a1, a4, a5, a6, a7, 1, CTX)
    assert s.n_terms == 2
    assert rel(s.value, jackson_sum(a1, a4, a5, a6, a7, 1, CTX)) < 1e-10


def test_jackson_n0_and_n3():
    rng = np.random.default_rng(11)
    a = ell.balanced_draw(rng, 0)
    assert jackson_sum(*a, 0, CTX) == 1
    a = ell.balanced_draw(rng, 3)
    assert rel(ell.eight_omega_seven(*a, 3, CTX).value, jackson_sum(*a, 3, CTX)) < 1e-8


def test_jackson_rejects_unbalanced():
    with pytest.raises(BalanceViolation):
        jackson_sum(0.1, 0.2, 0.3, 0.4, 0.5, 2, CTX)


@given(st.integers(0, 10), st.integers(0, 2**31 - 1))
def test_frenkel_turaev_property(n, seed):
    a = ell.balanced_draw(np.random.default_rng(seed), n)
    assert rel(ell.eight_omega_seven(*a, n, CTX).value, jackson_sum(*a, n, CTX)) < 1e-8


def test_normalization_sums_vanish():
    assert ell.check_normalization_sum_vanishes(CTX).passed


def test_non_terminating_requires_order():
    p = OmegaParams(5, 0.3, (0.1, 0.2, 0.35))
    with pytest.raises(DomainError):
        omega_series(p, TERMINATING, CTX)
    res = omega_series(p, 6, CTX)
    assert res.n_terms == 6 and res.last_term == abs(res.terms[-1])


@pytest.mark.parametrize("check", ell.THETA_CHECKS + ell.GAMMA_CHECKS + ell.HYPERGEO_CHECKS, ids=lambda f: f.__name__)
def test_seeded_checks_pass_reduced(check):
    import inspect

    params = inspect.signature(check).parameters
    kw = {}
    if "n" in params:
        kw["n"] = 12
    if "n_draws" in params:
        kw["n_draws"] = 6
    rep = check(CTX, **kw)
    assert rep.passed, (rep.identity, rep.max_residual, rep.tolerance)
