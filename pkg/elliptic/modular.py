"""
モジュラー関数
デデキントのイータ、クラインの J、(1, τ) 格子の g₂, g₃, η の微分方程式系
"""
import logging

from mpmath import mp

from utils.error_handler import DomainError
from .weierstrass import HalfPeriods, lattice_params

logger = logging.getLogger(__name__)


def check_tau(tau):
    """上半平面の点であることを確認して mpc を返す"""
    tau = mp.mpc(tau)
    if mp.im(tau) <= 0:
        raise DomainError(
            f"τ は上半平面にある必要があります: {mp.nstr(tau, 10)}",
            error_code="degenerate_lattice",
            guard="Im τ > 0",
        )
    return tau


def dedekind_eta(tau):
    """
    η̂(τ) = e^{πiτ/12} ∏(1 − e^{2πinτ})

    無限積は mpmath の q-Pochhammer（五角数級数）で評価する。
    """
    tau = check_tau(tau)
    q2 = mp.exp(2 * mp.pi * mp.j * tau)
    return mp.exp(mp.pi * mp.j * tau / 12) * mp.qp(q2)


def dedekind_eta_product(tau, terms: int):
    """定義の積を terms 項で打ち切ったもの（テスト用オラクル）"""
    tau = check_tau(tau)
    q2 = mp.exp(2 * mp.pi * mp.j * tau)
    product = mp.mpc(1)
    for n in range(1, terms + 1):
        product *= 1 - q2 ** n
    return mp.exp(mp.pi * mp.j * tau / 12) * product


def unit_lattice(tau):
    """格子 (1, τ) のパラメータ"""
    return lattice_params(HalfPeriods(1, check_tau(tau)))


def g2_of_tau(tau):
    return unit_lattice(tau).g2


def g3_of_tau(tau):
    return unit_lattice(tau).g3


def eta_of_tau(tau):
    """準周期 η(τ) = ζ(1 | 1, τ)"""
    return unit_lattice(tau).eta


def klein_j(tau):
    """
    J(τ) = g₂³/(g₂³ − 27g₃²)、J(i) = 1 の正規化
    """
    lp = unit_lattice(tau)
    return lp.g2 ** 3 / lp.discriminant


def diff_system_rhs(tau) -> dict:
    """
    g₂, g₃, η の τ 微分の閉じた右辺

    Returns:
        dict: {"g2": …, "g3": …, "eta": …}
    """
    lp = unit_lattice(tau)
    factor = mp.j / mp.pi
    return {
        "g2": factor * (8 * lp.g2 * lp.eta - 12 * lp.g3),
        "g3": factor * (12 * lp.g3 * lp.eta - mp.mpf(2) / 3 * lp.g2 ** 2),
        "eta": factor * (2 * lp.eta ** 2 - lp.g2 / 6),
    }


def central_difference(f, x, h):
    """(f(x+h) − f(x−h)) / 2h"""
    return (f(x + h) - f(x - h)) / (2 * h)


def verify_diff_system(tau, h=None) -> dict:
    """
    g₂, g₃, η の閉じた微分方程式系の残差

    Args:
        tau: 評価点
        h: 中心差分のステップ（None なら mpmath の高精度数値微分）

    Returns:
        dict: {"g2": 残差, "g3": 残差, "eta": 残差}
    """
    tau = check_tau(tau)
    rhs = diff_system_rhs(tau)
    functions = {"g2": g2_of_tau, "g3": g3_of_tau, "eta": eta_of_tau}
    residuals = {}
    for name, func in functions.items():
        if h is None:
            derivative = mp.diff(func, tau)
        else:
            derivative = central_difference(func, tau, mp.mpf(h))
        residuals[name] = abs(derivative - rhs[name])
    logger.debug(f"微分方程式系の残差 τ={mp.nstr(tau, 8)}: {residuals}")
    return residuals


def log_eta_derivative_residual(tau):
    """π·(ln η̂)′(τ) − i·η(1, τ)"""
    tau = check_tau(tau)
    derivative = mp.diff(lambda t: mp.log(dedekind_eta(t)), tau)
    return abs(mp.pi * derivative - mp.j * eta_of_tau(tau))
