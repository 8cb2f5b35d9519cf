"""
η 積・テータ冪・約数和の q 級数と級数演算のラッパー
"""
import logging
from fractions import Fraction

import config
from numeric.cyclo import CycloQ
from utils.error_handler import ValidationError
from .charts import CuspChart, get_chart
from .laurent import LaurentSeries, Prefactor

logger = logging.getLogger(__name__)


class EtaProductSpec:
    """
    c·q^m·∏_{k≥1} ∏_factors (1 + sign·q^{a·k − offset})^e

    Args:
        factors: (period a, sign ±1, exponent e, offset) のリスト
        lead_coeff: 先頭係数 c（ℚ または ℚ(i,√2)）
        lead_exp: 先頭指数 m
        name: 表示名
    """

    def __init__(self, factors: list = None, lead_coeff=1, lead_exp: int = 0, name: str = ""):
        self.factors = []
        for period, sign, exponent, offset in factors or []:
            if period <= 0 or sign not in (1, -1):
                raise ValidationError(f"不正な因子: ({period}, {sign}, {exponent}, {offset})")
            if period - offset <= 0:
                raise ValidationError(f"因子 (1 ± q^({period}k−{offset})) の k=1 の指数が正になりません")
            self.factors.append((int(period), int(sign), int(exponent), int(offset)))
        self.lead_coeff = CycloQ.coerce(lead_coeff)
        self.lead_exp = int(lead_exp)
        self.name = name

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lead": f"{self.lead_coeff}·q^{self.lead_exp}",
            "factors": [
                {"period": a, "sign": s, "exponent": e, "offset": o}
                for a, s, e, o in self.factors
            ],
        }


# 分岐点チャートの積表示とアーベル微分（乗数 {±1, ±i} 等は除く）
PRODUCT_SPECS = {
    "x_branch": EtaProductSpec([(4, 1, 2, 0), (4, 1, 4, 2)], 1, 0, "X"),
    "y_branch": EtaProductSpec([(4, 1, 3, 0), (2, 1, 6, 0)], 4, 1, "Y"),
    "dx_over_y": EtaProductSpec([(4, -1, 1, 0), (4, -1, 2, 2), (8, -1, 3, 0)], 2, 0, "dX/Y"),
    "x_dx_over_y": EtaProductSpec([(4, -1, 1, 0), (4, 1, 2, 2), (8, -1, 3, 0)], 2, 0, "X·dX/Y"),
    # q^{1/24} は除いた η̂ の無限積部分（q = e^{2πiτ}）
    "eta": EtaProductSpec([(1, -1, 1, 0)], 1, 0, "η̂·q^(−1/24)"),
}


def _apply_factor(coeffs: list, m: int, sign: int, exponent: int):
    """coeffs に (1 + sign·q^m)^exponent を掛ける（その場で更新）"""
    n_max = len(coeffs)
    if exponent >= 0:
        for _ in range(exponent):
            for n in range(n_max - 1, m - 1, -1):
                coeffs[n] += sign * coeffs[n - m]
    else:
        for _ in range(-exponent):
            for n in range(m, n_max):
                coeffs[n] -= sign * coeffs[n - m]


def eta_product_series(spec: EtaProductSpec, order: int) -> LaurentSeries:
    """
    η 積の厳密展開

    Args:
        spec: EtaProductSpec または PRODUCT_SPECS のキー
        order: 先頭からの相対打ち切り次数（q の指数）

    Returns:
        LaurentSeries: 整数係数、先頭係数が 1 でなければ前因子に記録
    """
    if isinstance(spec, str):
        if spec not in PRODUCT_SPECS:
            raise ValidationError(f"未知の積: {spec}（{', '.join(PRODUCT_SPECS)}）")
        spec = PRODUCT_SPECS[spec]
    if order < 1:
        raise ValidationError(f"打ち切り次数は1以上が必要です: {order}")

    coeffs = [1] + [0] * (order - 1)
    for period, sign, exponent, offset in spec.factors:
        k = 1
        while period * k - offset < order:
            _apply_factor(coeffs, period * k - offset, sign, exponent)
            k += 1

    terms = {spec.lead_exp + n: Fraction(c) for n, c in enumerate(coeffs) if c}
    prefactor = None if spec.lead_coeff == CycloQ(1) else Prefactor(spec.lead_coeff)
    logger.debug(f"η 積 {spec.name or spec.factors}: {order} 次まで展開")
    return LaurentSeries(terms, spec.lead_exp + order, prefactor)


def _divisor_sum(n: int, power: int) -> int:
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d ** power
            if d * d != n:
                total += (n // d) ** power
        d += 1
    return total


def theta_and_divisor_series(kind: str, order: int) -> LaurentSeries:
    """
    テータ冪・約数和の級数（q = e^{πiτ/4}）

    Args:
        kind: theta3_pow4 / sigma1_odd / g2_eisenstein
        order: 打ち切り次数（q の指数）

    Returns:
        LaurentSeries:
            theta3_pow4: (1 + 2Σ q^{8k²})⁴
            sigma1_odd: Σ σ₁(2k+1) q^{4k}
            g2_eisenstein: g₂/(20π⁴) = 1/240 + Σ σ₃(n) q^{8n}
    """
    if order < 1:
        raise ValidationError(f"打ち切り次数は1以上が必要です: {order}")

    if kind == "theta3_pow4":
        theta = {0: Fraction(1)}
        k = 1
        while 8 * k * k < order:
            theta[8 * k * k] = Fraction(2)
            k += 1
        return LaurentSeries(theta, order) ** 4

    if kind == "sigma1_odd":
        terms = {4 * k: Fraction(_divisor_sum(2 * k + 1, 1)) for k in range((order + 3) // 4)}
        return LaurentSeries(terms, order)

    if kind == "g2_eisenstein":
        terms = {0: Fraction(1, 240)}
        terms.update({8 * n: Fraction(_divisor_sum(n, 3)) for n in range(1, (order + 7) // 8)})
        return LaurentSeries(terms, order)

    raise ValidationError(f"未知の級数: {kind}（theta3_pow4, sigma1_odd, g2_eisenstein）")


# =============================================================================
# 級数演算
# =============================================================================

def series_compose(outer: LaurentSeries, inner: LaurentSeries) -> LaurentSeries:
    return outer.compose(inner)


def series_derivative(S: LaurentSeries) -> LaurentSeries:
    return S.derivative()


def series_integrate(S: LaurentSeries) -> LaurentSeries:
    return S.integral()


def series_revert(S: LaurentSeries) -> LaurentSeries:
    """
    S(R(q)) = q となる R

    Raises:
        ValidationError: 先頭が c·q（c ≠ 0）でない、または前因子付き
    """
    if S.prefactor is not None:
        raise ValidationError("前因子付きの級数は反転できません（前因子を係数に戻してください）")
    if S.lead_exp != 1:
        raise ValidationError(f"逆級数には先頭 c·q が必要です（先頭 q^{S.lead_exp}）")
    return S.revert()


def numeric_eval(S: LaurentSeries, chart, tau, guard: float = None):
    """
    チャートの q(τ) で級数を数値評価

    Args:
        S: 級数（前因子込み）
        chart: CuspChart またはチャート名
        tau: 上半平面の点
        guard: |q| の上限（省略時は config.SERIES_EVAL_GUARD）

    Returns:
        tuple: (値, 末尾項による誤差見積り)

    Raises:
        DomainError: |q| がガードを超える（別のチャートを使うこと）
    """
    if not isinstance(chart, CuspChart):
        chart = get_chart(chart)
    q = chart.q_of_tau(tau)
    return S.evaluate(q, guard if guard is not None else config.SERIES_EVAL_GUARD)
