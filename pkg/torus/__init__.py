"""
ヤコビ被覆とトーラス上のフックス型方程式
"""
from .cover import (
    JacobiCover,
    BurnsideTorus,
    jacobi_k,
    burnside_torus,
    find_aleph,
    cover_wp_of_x,
    x_roots_of_wp,
    y_from_cover,
)
from .ramification import RamificationProfile, ramification_profile, puiseux_at_branch
from .fuchsian import (
    BURNSIDE,
    WHITTAKER,
    FuchsianTorusEq,
    lambda_fuchsian_Q,
    lambda_construction_Q,
    renormalized_constants,
)
from .abelian import alpha_of_tau, abelian_differential_series, prop_schwarzian_residual
from .xi import xi_solution_check, holo_integral_check, holo_period_check

__all__ = [
    "JacobiCover",
    "BurnsideTorus",
    "jacobi_k",
    "burnside_torus",
    "find_aleph",
    "cover_wp_of_x",
    "x_roots_of_wp",
    "y_from_cover",
    "RamificationProfile",
    "ramification_profile",
    "puiseux_at_branch",
    "BURNSIDE",
    "WHITTAKER",
    "FuchsianTorusEq",
    "lambda_fuchsian_Q",
    "lambda_construction_Q",
    "renormalized_constants",
    "alpha_of_tau",
    "abelian_differential_series",
    "prop_schwarzian_residual",
    "xi_solution_check",
    "holo_integral_check",
    "holo_period_check",
]
