"""
x(τ) の閉じた微分公式と ℘ の恒等式

記法: ℘₁ = ℘(1|2,2τ), ℘₂ = ℘(2|2,2τ), ℘_τ = ℘(τ|2,2τ)、
η, η′, g₂, g₃ は半周期 (1, τ) のもの。
"""
import logging

from mpmath import mp

from elliptic.modular import klein_j
from .state import BurnsideState

logger = logging.getLogger(__name__)


def _ground_forms(x):
    """(x⁴ + 6x² + 1, x⁵ − x, 5x⁴ − 1)"""
    x2 = x * x
    x4 = x2 * x2
    return x4 + 6 * x2 + 1, x4 * x - x, 5 * x4 - 1


def x_derivatives_closed(state: BurnsideState) -> tuple:
    """
    x_τ, x_ττ, x_τττ の閉じた式

        x_τ   = (24/π)i·(x⁵−x)/(x⁴+6x²+1)·℘₂
        x_ττ  = −(96/π²)·[(x⁴+6x²+1)η + 2(5x⁴−1)℘₂]/(x⁴+6x²+1)²·(x⁵−x)℘₂
        x_τττ = −(576/π³)i·{[(x⁴+6x²+1)η + 4(5x⁴−1)℘₂]/(x⁴+6x²+1)²·η
                 + 8(11x⁸−26x⁴−1)/(x⁴+6x²+1)³·℘₂²}·(x⁵−x)℘₂

    Returns:
        tuple: (x_τ, x_ττ, x_τττ)
    """
    x, wp2, eta = state.x, state.wp2, state.eta
    d, f, g = _ground_forms(x)
    x4 = x ** 4
    pi = mp.pi
    x_t = 24 / pi * mp.j * f / d * wp2
    x_tt = -96 / pi ** 2 * (d * eta + 2 * g * wp2) / d ** 2 * f * wp2
    x_ttt = -576 / pi ** 3 * mp.j * (
        (d * eta + 4 * g * wp2) / d ** 2 * eta
        + 8 * (11 * x4 * x4 - 26 * x4 - 1) / d ** 3 * wp2 ** 2
    ) * f * wp2
    return x_t, x_tt, x_ttt


def _relative(lhs, rhs):
    return abs(lhs - rhs) / max(mp.mpf(1), abs(lhs), abs(rhs))


def verify_four_identities(state: BurnsideState) -> dict:
    """
    倍角公式から得られる4つの恒等式の相対残差

        (η − 4ζ₁)² = 8℘₁ + 4℘₂
        ℘′₁ = (η − 4ζ₁)(℘₁ − ℘₂)
        ℘′_τ = 2/(η′ − 4ζ_τ)·(3℘_τ² + ℘₁² − 2℘₁℘₂ − 2℘₂²)
        ℘_τ⁴ + 2℘₂℘_τ³ + … − 4℘₂⁴ = 0

    Returns:
        dict: {"zeta_square", "wp_prime_1", "wp_prime_tau", "quartic"}
    """
    p1, p2, pt = state.wp1, state.wp2, state.wp_tau
    eta, eta_prime = state.eta, state.eta_prime
    zeta1, zeta_tau = state.zeta_at["1"], state.zeta_at["tau"]
    a = eta - 4 * zeta1

    quartic_terms = [
        pt ** 4,
        2 * p2 * pt ** 3,
        6 * (p1 ** 2 - 2 * p1 * p2 - p2 ** 2) * pt ** 2,
        -2 * p2 * (3 * p1 ** 2 - 6 * p1 * p2 - 4 * p2 ** 2) * pt,
        p1 ** 4 - 4 * p1 ** 3 * p2 + 6 * p1 ** 2 * p2 ** 2 - 4 * p1 * p2 ** 3 - 4 * p2 ** 4,
    ]
    scale = max(abs(t) for t in quartic_terms)
    residuals = {
        "zeta_square": _relative(a ** 2, 8 * p1 + 4 * p2),
        "wp_prime_1": _relative(state.wp_prime_at["1"], a * (p1 - p2)),
        "wp_prime_tau": _relative(
            state.wp_prime_at["tau"],
            2 / (eta_prime - 4 * zeta_tau) * (3 * pt ** 2 + p1 ** 2 - 2 * p1 * p2 - 2 * p2 ** 2),
        ),
        "quartic": abs(mp.fsum(quartic_terms)) / max(mp.mpf(1), scale),
    }
    logger.debug(f"4つの恒等式 τ={mp.nstr(state.tau, 8)}: {residuals}")
    return residuals


def wp_ratio_residuals(state: BurnsideState) -> dict:
    """
    ℘ の比と不変量の x による表示

        ℘₁/℘₂ = (x⁴−6x³+6x²−6x+1)/(x⁴+6x²+1)
        ℘_τ/℘₂ = (x⁴−5)/(x⁴+6x²+1)
        g₂ = 2⁶·3·(x⁸+14x⁴+1)/(x⁴+6x²+1)²·℘₂²
        g₃ = −2⁹·(x¹²−33(x⁸+x⁴)+1)/(x⁴+6x²+1)³·℘₂³
    """
    x, p2 = state.x, state.wp2
    d, _, _ = _ground_forms(x)
    x4 = x ** 4
    return {
        "wp1_ratio": _relative(state.wp1 / p2, (x4 - 6 * x ** 3 + 6 * x ** 2 - 6 * x + 1) / d),
        "wp_tau_ratio": _relative(state.wp_tau / p2, (x4 - 5) / d),
        "g2": _relative(state.unit.g2, 192 * (x4 ** 2 + 14 * x4 + 1) / d ** 2 * p2 ** 2),
        "g3": _relative(state.unit.g3, -512 * (x4 ** 3 - 33 * (x4 ** 2 + x4) + 1) / d ** 3 * p2 ** 3),
    }


def klein_j_from_x(x):
    """J = (1/108)(x⁸ + 14x⁴ + 1)³/(x⁵ − x)⁴"""
    x4 = x ** 4
    return (x4 * x4 + 14 * x4 + 1) ** 3 / (108 * (x4 * x - x) ** 4)


def klein_j_relation(state: BurnsideState) -> dict:
    """
    クラインの J と x の関係

    Returns:
        dict:
            j_relation: |J(τ) − J(x)| の相対残差
            quartic_root: z = x⁴ に対する (z²+14z+1)³ − 108z(z−1)⁴J の相対残差
    """
    j_tau = klein_j(state.tau)
    x = state.x
    z = x ** 4
    poly_terms = [(z ** 2 + 14 * z + 1) ** 3, 108 * z * (z - 1) ** 4 * j_tau]
    result = {
        "j_relation": _relative(j_tau, klein_j_from_x(x)),
        "quartic_root": abs(poly_terms[0] - poly_terms[1]) / max(mp.mpf(1), *(abs(t) for t in poly_terms)),
    }
    logger.debug(f"J 関係 τ={mp.nstr(state.tau, 8)}: {result}")
    return result
