"""Sklyanin generators, the L-operator and the spin ell -> -ell-1 intertwiner."""

from .generators import (
    PAULI,
    SklyaninGenerators,
    Spin,
    StructureConstants,
    check_commutation,
    check_half_matrices,
    expected_half_matrices,
    generator_matrices,
    make_generators,
    perturbed_constants,
    sklyanin_generator,
)
from .intertwiner import (
    S0_closed,
    S_sum,
    check_annihilation,
    check_comb_form,
    check_intertwining,
    check_normalization,
    check_W_forms,
    check_W_zero,
    check_WW_identity,
    flip_sign,
    make_W,
    make_W_finite,
    make_W_series,
    theta_plus_basis,
    theta_S0_simplified,
)
from .loperator import (
    LOperator,
    L_half_matrix,
    check_L_half,
    check_L_kernel,
    check_rll,
    kernel_factorized,
    kernel_sandwich,
    make_L,
    make_L_pm,
    r_matrix,
)

__all__ = [name for name in dir() if not name.startswith("_")]
