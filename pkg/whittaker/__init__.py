"""
ホイッタカーの予想・超幾何型への帰着・大域座標の変換
"""
from .conjecture import (
    HyperellipticCurve,
    WhittakerQ,
    whittaker_Q,
    accessory_decomposition,
    burnside_curve,
    whittaker_curve,
)
from .hypergeometric import (
    HypergeometricParams,
    HypergeometricReduction,
    gauss_2f1,
    hypergeometric_reduce,
    reduce_curve,
    psi_tilde,
)
from .substitution import SQRT_DERIV, WEBER, substitution_transform
from .conversion import ConversionSeries, conversion_ode_series, eta_power_ode_check

__all__ = [
    "HyperellipticCurve",
    "WhittakerQ",
    "whittaker_Q",
    "accessory_decomposition",
    "burnside_curve",
    "whittaker_curve",
    "HypergeometricParams",
    "HypergeometricReduction",
    "gauss_2f1",
    "hypergeometric_reduce",
    "reduce_curve",
    "psi_tilde",
    "SQRT_DERIV",
    "WEBER",
    "substitution_transform",
    "ConversionSeries",
    "conversion_ode_series",
    "eta_power_ode_check",
]
