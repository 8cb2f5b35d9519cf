"""
バーンサイドのパラメータ表示 x(τ), y(τ)

半周期 (2, 2τ) のワイエルシュトラス関数で
    x = (℘(1) − ℘(2)) / (℘(τ) − ℘(2))
    y = 4i·[℘(τ)−℘(2τ)][℘(τ/2)−℘(τ)][℘(τ/2)−℘(τ+2)][℘(½)−℘(2τ+1)][℘(½)−℘(1)]
        / ([℘(τ/2)−℘(1)][℘(τ/2)−℘(2τ+1)]·℘′(½)·℘′(τ))
"""
import logging

from mpmath import mp

from elliptic.modular import check_tau, unit_lattice
from elliptic.weierstrass import HalfPeriods, lattice_params, wp_family
from utils.error_handler import DomainError

logger = logging.getLogger(__name__)

# ℘ を評価する引数（表のキー → τ の関数）
WP_ARGUMENTS = {
    "1": lambda tau: 1,
    "2": lambda tau: 2,
    "tau": lambda tau: tau,
    "tau/2": lambda tau: tau / 2,
    "1/2": lambda tau: mp.mpf(1) / 2,
    "2tau": lambda tau: 2 * tau,
    "tau+2": lambda tau: tau + 2,
    "2tau+1": lambda tau: 2 * tau + 1,
}

WP_PRIME_ARGUMENTS = ("1/2", "tau", "1")
ZETA_ARGUMENTS = ("1", "tau")


class BurnsideState:
    """
    τ における x, y と ℘ の値の表

    Attributes:
        tau: 上半平面の点
        lp: 半周期 (2, 2τ) の格子パラメータ
        unit: 半周期 (1, τ) の格子パラメータ（g₂(τ), g₃(τ), η(τ), η′(τ)）
        wp_at, wp_prime_at, zeta_at: 引数キー → 値
        x, y: バーンサイドの関数値
    """

    def __init__(self, tau):
        self.tau = check_tau(tau)
        self.prec = mp.prec
        self.lp = lattice_params(HalfPeriods(2, 2 * self.tau))
        self.unit = unit_lattice(self.tau)

        self.wp_at = {}
        self.wp_prime_at = {}
        self.zeta_at = {}
        for key, argument in WP_ARGUMENTS.items():
            _, zeta, wp, wp_prime = wp_family(argument(self.tau), self.lp)
            self.wp_at[key] = wp
            if key in WP_PRIME_ARGUMENTS:
                self.wp_prime_at[key] = wp_prime
            if key in ZETA_ARGUMENTS:
                self.zeta_at[key] = zeta

        wp = self.wp_at
        theta2 = wp["tau"] - wp["2"]
        if abs(theta2) < mp.ldexp(1, -mp.prec // 2) * max(mp.mpf(1), abs(wp["2"])):
            raise DomainError(
                f"℘(τ) − ℘(2) が0に近すぎます: τ={mp.nstr(self.tau, 12)}",
                error_code="pole",
                guard="|℘(τ) − ℘(2)| > 2^(−P/2)",
            )
        self.x = (wp["1"] - wp["2"]) / theta2

        numerator = (
            (wp["tau"] - wp["2tau"])
            * (wp["tau/2"] - wp["tau"])
            * (wp["tau/2"] - wp["tau+2"])
            * (wp["1/2"] - wp["2tau+1"])
            * (wp["1/2"] - wp["1"])
        )
        denominator = (
            (wp["tau/2"] - wp["1"])
            * (wp["tau/2"] - wp["2tau+1"])
            * self.wp_prime_at["1/2"]
            * self.wp_prime_at["tau"]
        )
        self.y = 4 * mp.j * numerator / denominator
        logger.debug(f"BurnsideState τ={mp.nstr(self.tau, 10)} x={mp.nstr(self.x, 10)}")

    # ℘₁, ℘₂, ℘_τ, ζ₁, ζ_τ の短縮名
    @property
    def wp1(self):
        return self.wp_at["1"]

    @property
    def wp2(self):
        return self.wp_at["2"]

    @property
    def wp_tau(self):
        return self.wp_at["tau"]

    @property
    def eta(self):
        return self.unit.eta

    @property
    def eta_prime(self):
        return self.unit.eta_prime

    def curve_residual(self):
        """|y² − (x⁵ − x)| / max(1, |x|⁵)"""
        x, y = self.x, self.y
        return abs(y ** 2 - (x ** 5 - x)) / max(mp.mpf(1), abs(x) ** 5)

    def to_dict(self, digits: int = 30) -> dict:
        return {
            "tau": mp.nstr(self.tau, digits),
            "x": mp.nstr(self.x, digits),
            "y": mp.nstr(self.y, digits),
            "wp": {key: mp.nstr(value, digits) for key, value in self.wp_at.items()},
            "curve_residual": mp.nstr(self.curve_residual(), 5),
        }


def burnside_state(tau) -> BurnsideState:
    """
    τ における状態を計算

    Raises:
        DomainError: Im τ ≤ 0、または実軸に近すぎる
    """
    return BurnsideState(tau)


def x_of_tau(tau):
    return BurnsideState(tau).x


def y_of_tau(tau):
    return BurnsideState(tau).y
