"""
バーンサイドの一意化関数モジュール
"""
from .state import BurnsideState, burnside_state, x_of_tau, y_of_tau
from .schwarz import (
    SchwarzResidual,
    schwarz_Q,
    schwarz_Qy,
    meromorphic_derivative,
    schwarz_residual,
    y_schwarz_residual,
    z_schwarzian_check,
)
from .identities import x_derivatives_closed, verify_four_identities, klein_j_relation
from .forms import ModularForm2, theta_forms
from .inversion import invert_x, psi_solution_check

__all__ = [
    "BurnsideState",
    "burnside_state",
    "x_of_tau",
    "y_of_tau",
    "SchwarzResidual",
    "schwarz_Q",
    "schwarz_Qy",
    "meromorphic_derivative",
    "schwarz_residual",
    "y_schwarz_residual",
    "z_schwarzian_check",
    "x_derivatives_closed",
    "verify_four_identities",
    "klein_j_relation",
    "ModularForm2",
    "theta_forms",
    "invert_x",
    "psi_solution_check",
]
