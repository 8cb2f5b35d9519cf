"""
被覆 ℘(α) = e′ + (1+3e)/(x−i) − i(1+3e)/(x+1) の分岐構造
"""
import logging
from fractions import Fraction

from mpmath import mp

from elliptic.integrals import wp_inverse
from numeric.cyclo import CycloQ
from utils.error_handler import ValidationError
from .cover import BurnsideTorus, I_SQRT_I, WP_ALEPH, burnside_torus, cover_wp_of_x, x_roots_of_wp

logger = logging.getLogger(__name__)

ALPHA_TO_X = "alpha_to_x"
X_TO_ALPHA = "x_to_alpha"


class RamificationProfile:
    """
    分岐の表とリーマン・フルヴィッツの公式

        g̃ = ½Σ(qⱼ − 1) + N(g − 1) + 1

    Args:
        direction: ALPHA_TO_X または X_TO_ALPHA
        branch_data: {"point", "x", "scheme"} のリスト（scheme は分岐指数のリスト）
        sheets: 被覆の葉数 N
        genus_base: 被覆される面の種数 g
    """

    def __init__(self, direction: str, branch_data: list, sheets: int, genus_base: int):
        self.direction = direction
        self.branch_data = branch_data
        self.sheets = sheets
        self.genus_base = genus_base

    @property
    def ramification_sum(self) -> int:
        return sum(q - 1 for entry in self.branch_data for q in entry["scheme"])

    @property
    def genus_cover(self) -> int:
        """
        Raises:
            ValidationError: 種数が整数にならない
        """
        genus = Fraction(self.ramification_sum, 2) + self.sheets * (self.genus_base - 1) + 1
        if genus.denominator != 1:
            raise ValidationError(f"リーマン・フルヴィッツの種数が整数になりません: {genus}")
        return int(genus)

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "sheets": self.sheets,
            "genus_base": self.genus_base,
            "branch_data": self.branch_data,
            "ramification_sum": self.ramification_sum,
            "genus_cover": self.genus_cover,
        }


def ramification_profile(direction: str) -> RamificationProfile:
    """
    被覆の分岐の表

    Args:
        direction: ALPHA_TO_X（トーラス → x 平面）または X_TO_ALPHA（x 平面 → トーラス）

    Raises:
        ValidationError: 未知の向き
    """
    if direction == ALPHA_TO_X:
        # ℘(α) = ∞ では (x−i)(x+1) ∼ α² で分岐しない
        data = [
            {"point": "ω″", "x": "−i√i", "scheme": [1, 1]},
            {"point": "ℵ", "x": "i√i", "scheme": [2]},
            {"point": "−ℵ", "x": "i√i", "scheme": [2]},
        ]
        return RamificationProfile(direction, data, sheets=2, genus_base=1)
    if direction == X_TO_ALPHA:
        data = [
            {"point": "ω", "x": "{1, −i}", "scheme": [2, 2]},
            {"point": "ω′", "x": "{0, ∞}", "scheme": [2, 2]},
            {"point": "ω″", "x": "−i√i", "scheme": [1, 1]},
            {"point": "0", "x": "{−1, i}", "scheme": [2, 2]},
        ]
        return RamificationProfile(direction, data, sheets=2, genus_base=0)
    raise ValidationError(f"未知の向き: {direction}（{ALPHA_TO_X}, {X_TO_ALPHA}）")


def discriminant_values() -> dict:
    """
    x ↦ ℘(α) の臨界値（厳密）

    Returns:
        dict: {"−i√i": e″, "i√i": ℘(ℵ)} で (6℘ − 3 + √2)(6℘ + 21 + 13√2) = 0 の2根
    """
    return {
        "-i√i": cover_wp_of_x(-I_SQRT_I),
        "i√i": cover_wp_of_x(I_SQRT_I),
    }


def discriminant_polynomial(wp):
    """(6℘ − 3 + √2)(6℘ + 21 + 13√2)"""
    sqrt2 = CycloQ(0, 1) if isinstance(wp, CycloQ) else mp.sqrt(2)
    return (6 * wp - 3 + sqrt2) * (6 * wp + 21 + 13 * sqrt2)


# =============================================================================
# 局所展開
# =============================================================================

def branch_series_at_dprime(h, sign: int = 1):
    """
    α = ω″ の2つの正則な枝 x(α) = ((1−i)/2)(√2 ± ⁴√2·h + ½h² + …)（h = α − ω″）
    """
    h = mp.mpc(h)
    return (1 - mp.j) / 2 * (mp.sqrt(2) + sign * mp.root(2, 4) * h + h * h / 2)


def local_branch_residual(h, torus: BurnsideTorus = None) -> dict:
    """
    ω″ + h での x の2根と局所級数（2次まで）の差

    Returns:
        dict: {+1: 差, −1: 差}（O(|h|³)）
    """
    torus = torus or burnside_torus()
    wp = torus.wp(torus.omega_dprime + h)
    roots = x_roots_of_wp(wp, torus)
    result = {}
    for sign in (1, -1):
        approx = branch_series_at_dprime(h, sign)
        result[sign] = min(abs(r - approx) for r in roots)
    return result


def _cover_taylor(x0, torus: BurnsideTorus):
    """x0 での ℘(x) の1次・2次のテイラー係数"""
    x0 = mp.mpc(x0)
    c = (1 + 3 * torus.e).to_mpc()
    p1 = c * (-1 / (x0 - mp.j) ** 2 + mp.j / (x0 + 1) ** 2)
    p2 = c * (1 / (x0 - mp.j) ** 3 - mp.j / (x0 + 1) ** 3)
    return p1, p2


def puiseux_at_branch(x0=1, torus: BurnsideTorus = None) -> dict:
    """
    分岐点 (α = ω, x = x0) でのピュイズー級数

        α(x) = ω + c₁√(x−x0) + c₃(x−x0)^{3/2} + …

    ℘(ω+u) = e + a₂u² + a₄u⁴ と ℘(x) = e + p₁t + p₂t²（t = x − x0）から
    c₁² = p₁/a₂, c₃ = (p₂ − a₄c₁⁴)/(2a₂c₁)。

    Args:
        x0: ℘(α) = e となる x（1 または −i）

    Returns:
        dict: {"base": ω, "sqrt": c₁, "sqrt3": c₃}

    Raises:
        ValidationError: x0 が ω の上の点でない
    """
    torus = torus or burnside_torus()
    e = torus.e.to_mpc()
    x0 = mp.mpc(x0)
    if abs(cover_wp_of_x(x0) - e) > mp.ldexp(1, -mp.prec // 2):
        raise ValidationError(f"x0 = {mp.nstr(x0, 10)} は α = ω の上の分岐点ではありません")
    wp2 = 6 * e * e - torus.g2.to_mpc() / 2
    a2 = wp2 / 2
    # ℘⁗ = 12℘′² + 12℘℘″ で ℘′(ω) = 0
    a4 = 12 * e * wp2 / 24
    p1, p2 = _cover_taylor(x0, torus)
    c1 = mp.sqrt(p1 / a2)
    c3 = (p2 - a4 * c1 ** 4) / (2 * a2 * c1)
    return {"base": torus.omega, "sqrt": c1, "sqrt3": c3}


def puiseux_closed_form() -> dict:
    """x0 = 1 の係数の閉じた形 −i√(i√2+i) と (i√(26√2+34) − √(26√2−14))/24"""
    r2 = mp.sqrt(2)
    return {
        "sqrt": -mp.j * mp.sqrt(mp.j * r2 + mp.j),
        "sqrt3": (mp.j * mp.sqrt(26 * r2 + 34) - mp.sqrt(26 * r2 - 14)) / 24,
    }


def puiseux_residual(t, x0=1, torus: BurnsideTorus = None):
    """
    x = x0 + t での ℘⁻¹ の数値接続とピュイズー級数（2項）の差（O(|t|^{5/2})）
    """
    torus = torus or burnside_torus()
    coefficients = puiseux_at_branch(x0, torus)
    s = mp.sqrt(mp.mpc(t))
    series = coefficients["base"] + coefficients["sqrt"] * s + coefficients["sqrt3"] * s ** 3
    alpha = wp_inverse(cover_wp_of_x(mp.mpc(x0) + t), torus.lp, series)
    logger.debug(f"ピュイズー級数 x0={x0}, t={mp.nstr(t, 5)}: α={mp.nstr(alpha, 15)}")
    return abs(alpha - series)


def aleph_series_coefficient(sign: int = 1, torus: BurnsideTorus = None):
    """
    ±ℵ での2つの入れ替わる枝 x(α) = i√i ± c·√(α ∓ ℵ) + … の c

    ℘(x) = ℘(ℵ) + p₂(x − i√i)² と ℘(±ℵ + h) = ℘(ℵ) ± ℘′(ℵ)h から c² = ±℘′(ℵ)/p₂。
    ℵ は向き付きの代表（℘′(ℵ) = ⁴√32(7+5√2)i）。
    """
    torus = torus or burnside_torus()
    p2 = _cover_taylor(I_SQRT_I.to_mpc(), torus)[1]
    wp_prime = torus.wp_prime(torus.aleph_oriented)
    return mp.sqrt(sign * wp_prime / p2)


def aleph_coefficient_closed_form():
    """p₂ = (7+5√2)i/√2 より c² = 2^(7/4)"""
    return mp.root(128, 8)


def aleph_branch_residual(h, sign: int = 1, torus: BurnsideTorus = None):
    """
    ±ℵ + h での x の2根と i√i ± c√h の差の大きいほう（O(|h|)）
    """
    torus = torus or burnside_torus()
    h = mp.mpc(h)
    wp = torus.wp(sign * torus.aleph_oriented + h)
    roots = x_roots_of_wp(wp, torus)
    x0 = I_SQRT_I.to_mpc()
    step = aleph_series_coefficient(sign, torus) * mp.sqrt(h)
    return max(min(abs(r - (x0 + step)), abs(r - (x0 - step))) for r in roots)


def aleph_value_check(torus: BurnsideTorus = None) -> dict:
    """℘(ℵ), ℘′(ℵ)² の残差"""
    torus = torus or burnside_torus()
    wp = torus.wp(torus.aleph)
    wp_prime = torus.wp_prime(torus.aleph)
    g2, g3 = torus.g2.to_mpc(), torus.g3.to_mpc()
    return {
        "wp": abs(wp - WP_ALEPH.to_mpc()) / abs(wp),
        "cubic": abs(wp_prime ** 2 - (4 * wp ** 3 - g2 * wp - g3)) / abs(wp_prime) ** 2,
    }
