"""
楕円関数モジュール
"""
from .weierstrass import (
    HalfPeriods,
    LatticeParams,
    lattice_params,
    wp_family,
    weierstrass_sigma,
    weierstrass_zeta,
    weierstrass_p,
    weierstrass_p_prime,
)
from .modular import dedekind_eta, klein_j, verify_diff_system, check_tau
from .integrals import (
    complete_elliptic_K,
    complete_elliptic_K_prime,
    wp_inverse,
    half_periods_from_invariants,
)

__all__ = [
    "HalfPeriods",
    "LatticeParams",
    "lattice_params",
    "wp_family",
    "weierstrass_sigma",
    "weierstrass_zeta",
    "weierstrass_p",
    "weierstrass_p_prime",
    "dedekind_eta",
    "klein_j",
    "verify_diff_system",
    "check_tau",
    "complete_elliptic_K",
    "complete_elliptic_K_prime",
    "wp_inverse",
    "half_periods_from_invariants",
]
