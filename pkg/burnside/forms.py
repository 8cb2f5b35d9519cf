"""
重さ2の保型形式 Θ₁ = ℘(1) − ℘(2), Θ₂ = ℘(τ) − ℘(2)（群 Γ(4)）
"""
import logging

from mpmath import mp

from series.charts import CuspChart
from series.products import theta_and_divisor_series
from utils.error_handler import ValidationError
from .identities import x_derivatives_closed
from .state import BurnsideState

logger = logging.getLogger(__name__)

# 重さ2の変換則を確かめる Γ(4) の元 (a, b, c, d)
GAMMA4_ELEMENTS = ((1, 4, 0, 1), (1, 0, 4, 1))

# i∞ でのテータ冪展開の座標: q⁸ = −e^{2πiτ}
THETA_INFINITY_CHART = CuspChart("theta_infinity", 2, 1, 0, 2, None, "τ→+i∞")


class ModularForm2:
    """
    重さ2の保型形式

    Args:
        name: "Theta1" または "Theta2"
    """

    WEIGHT = 2

    def __init__(self, name: str):
        if name not in ("Theta1", "Theta2"):
            raise ValidationError(f"未知の形式: {name}")
        self.name = name

    def value_at(self, tau):
        state = BurnsideState(tau)
        if self.name == "Theta1":
            return state.wp1 - state.wp2
        return state.wp_tau - state.wp2

    def weight_residual(self, tau, element: tuple):
        """|Θ((aτ+b)/(cτ+d)) − (cτ+d)²Θ(τ)| の相対値"""
        a, b, c, d = element
        tau = mp.mpc(tau)
        image = self.value_at((a * tau + b) / (c * tau + d))
        expected = (c * tau + d) ** self.WEIGHT * self.value_at(tau)
        return abs(image - expected) / max(mp.mpf(1), abs(expected))


THETA1 = ModularForm2("Theta1")
THETA2 = ModularForm2("Theta2")


def theta_forms(tau) -> tuple:
    """
    Returns:
        tuple: (Θ₁, Θ₂, Θ₁/Θ₂)
    """
    state = BurnsideState(tau)
    theta1 = state.wp1 - state.wp2
    theta2 = state.wp_tau - state.wp2
    return theta1, theta2, theta1 / theta2


def theta1_identity_residuals(tau) -> dict:
    """
    Θ₁ の2つの表示との相対残差

        Θ₁ = (1/4)πi·x_τ/(x² − 1)
        Θ₁ = (9/4)(g₃/g₂)(x³+x)(x⁸+14x⁴+1)/(x¹²−33x⁸−33x⁴+1)
    """
    state = BurnsideState(tau)
    theta1 = state.wp1 - state.wp2
    x = state.x
    x_t, _, _ = x_derivatives_closed(state)
    x4 = x ** 4
    by_derivative = mp.pi * mp.j * x_t / (4 * (x ** 2 - 1))
    by_invariants = (mp.mpf(9) / 4 * state.unit.g3 / state.unit.g2
                     * (x ** 3 + x) * (x4 ** 2 + 14 * x4 + 1) / (x4 ** 3 - 33 * x4 ** 2 - 33 * x4 + 1))
    scale = max(mp.mpf(1), abs(theta1))
    return {
        "ratio": abs(theta1 / (state.wp_tau - state.wp2) - x) / max(mp.mpf(1), abs(x)),
        "derivative": abs(theta1 - by_derivative) / scale,
        "invariants": abs(theta1 - by_invariants) / scale,
    }


def theta1_infinity_series(tau, order: int = 400):
    """
    i∞ での展開 Θ₁ = (π²/16)(1 + 2Σ q^{8k²})⁴（q⁸ = −e^{2πiτ}）

    Returns:
        tuple: (級数の値, 誤差見積り)
    """
    series = theta_and_divisor_series("theta3_pow4", order)
    value, tail = series.evaluate(THETA_INFINITY_CHART.q_of_tau(tau))
    scale = mp.pi ** 2 / 16
    return scale * value, scale * tail


def theta1_zero_cusp_series(tau, order: int = 400):
    """
    τ → 0 での展開 Θ₁ = 4s² ln²s · Σ σ₁(2k+1) s^{4k}、s = e^{−πi/(4τ)}

    Returns:
        tuple: (級数の値, 誤差見積り)
    """
    tau = mp.mpc(tau)
    log_s = -mp.pi * mp.j / (4 * tau)
    s = mp.exp(log_s)
    series = theta_and_divisor_series("sigma1_odd", order)
    value, tail = series.evaluate(s)
    factor = 4 * s ** 2 * log_s ** 2
    return factor * value, abs(factor) * tail
