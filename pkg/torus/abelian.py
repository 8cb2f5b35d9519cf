"""
正則アーベル積分 α(τ)

    dα = (x − i√i)dx / (√(1+i)·y)

α±(τ) = ℘⁻¹(k±λ(x(τ)) − (k±+1)/3) は加法的保型関数で、
分岐点チャート q = exp((πi/4)(τ−1)/(2τ−1)) で整数係数（ℤ[√2]）の級数を持つ。
"""
import logging
from fractions import Fraction

from mpmath import mp

from burnside.schwarz import meromorphic_derivative, tau_derivatives
from burnside.state import BurnsideState
from elliptic.integrals import wp_inverse
from numeric.cyclo import CycloQ, GAMMA, K_MINUS, K_PLUS, SQRT_I
from series.charts import ABELIAN_CHART
from series.laurent import LaurentSeries
from series.products import eta_product_series
from series.recurrence import solve_schwarz_series, y_series_from_x
from utils.error_handler import ValidationError
from .cover import I_SQRT_I, burnside_torus, lambda_of_x, lower_sign_lattice, x_roots_of_wp, y_from_cover
from .fuchsian import BURNSIDE, FuchsianTorusEq

logger = logging.getLogger(__name__)

# dα⁺ = M·(1 − 2γq² − q⁸ + …)dq の係数（γ = √2 − 1）
DALPHA_TABLE = {
    0: CycloQ(1),
    2: -2 * GAMMA,
    8: CycloQ(-1),
    10: 6 * GAMMA,
    16: CycloQ(-6),
    18: -2 * GAMMA,
    24: CycloQ(5),
    26: -4 * GAMMA,
    32: CycloQ(12),
    40: CycloQ(-6),
    42: -10 * GAMMA,
    48: CycloQ(-7),
    50: 12 * GAMMA,
    56: CycloQ(-4),
    58: 6 * GAMMA,
}

# α⁺ の展開を q⁶⁰ まで見る
DALPHA_TABLE_ORDER = 60

# α⁺ = ω + M·(q − 2γq³/3 − q⁹/9 + …)
ALPHA_TABLE = {
    1: CycloQ(1),
    3: -2 * GAMMA / 3,
    9: CycloQ(Fraction(-1, 9)),
    11: 6 * GAMMA / 11,
    17: CycloQ(Fraction(-6, 17)),
    19: -2 * GAMMA / 19,
    25: CycloQ(Fraction(1, 5)),
    27: -4 * GAMMA / 27,
}


def series_scale():
    """M = 2√(√2 + 1)"""
    return 2 * mp.sqrt(mp.sqrt(2) + 1)


# =============================================================================
# α±(τ)
# =============================================================================

def _sheet(sheet: int):
    if sheet not in (1, -1):
        raise ValidationError(f"sheet は ±1 です: {sheet}")
    if sheet > 0:
        return K_PLUS, burnside_torus().lp
    return K_MINUS, lower_sign_lattice()


def wp_argument(x, sheet: int = 1):
    """(1±√2)(1−i)x/((x−i)(x+1)) − (3±√2)/6"""
    k, _ = _sheet(sheet)
    k = k.to_mpc()
    return k * lambda_of_x(mp.mpc(x)) - (k + 1) / 3


def alpha_of_tau(tau, sheet: int = 1, hint=None):
    """
    α±(τ) = ℘⁻¹(k±λ(x(τ)) − (k±+1)/3; 5/3, ∓(7/27)√2)

    Args:
        tau: 上半平面の点
        sheet: +1 なら g₃ = −(7/27)√2 のトーラス、−1 なら g₃ = +(7/27)√2
        hint: ℘⁻¹ の枝を選ぶ近傍点（省略時は ω）

    Raises:
        DomainError: τ が定義域外、x が ℘ の極
        ConvergenceError: ℘⁻¹ が収束しない
    """
    _, lp = _sheet(sheet)
    state = BurnsideState(tau)
    hint = lp.omega if hint is None else hint
    return wp_inverse(wp_argument(state.x, sheet), lp, hint)


def alpha_derivative_residual(tau) -> dict:
    """
    dα⁺/dτ と ((x − i√i)/√(1+i))·x_τ/y の比較

    y は ℘′(α) から被覆の式で戻した値を使い、x(τ), y(τ) の y との符号を記録する。
    """
    torus = burnside_torus()
    state = BurnsideState(tau)
    alpha0 = alpha_of_tau(state.tau)
    a_tau = tau_derivatives(lambda t: alpha_of_tau(t, 1, alpha0), state.tau)[1]
    x_tau = tau_derivatives(lambda t: BurnsideState(t).x, state.tau)[1]
    y_cover = y_from_cover(state.x, torus.wp_prime(alpha0))
    expected = (state.x - I_SQRT_I.to_mpc()) * x_tau / (mp.sqrt(1 + mp.j) * y_cover)
    sign = 1 if abs(y_cover - state.y) <= abs(y_cover + state.y) else -1
    return {
        "tau": state.tau,
        "alpha": alpha0,
        "lhs": a_tau,
        "rhs": expected,
        "residual": abs(a_tau - expected) / max(mp.mpf(1), abs(expected)),
        "y_sign": sign,
        "y_sign_residual": abs(y_cover - sign * state.y) / max(mp.mpf(1), abs(state.y)),
    }


def prop_schwarzian_residual(tau, h=None) -> dict:
    """
    [α⁺, τ] と Q(α⁺) の比較（Q は BURNSIDE の方程式の Q = 2·half_Q）
    """
    state = BurnsideState(tau)
    alpha0 = alpha_of_tau(state.tau)
    lhs = meromorphic_derivative(lambda t: alpha_of_tau(t, 1, alpha0), state.tau, h)
    rhs = 2 * FuchsianTorusEq(BURNSIDE).half_Q(alpha0)
    residual = abs(lhs - rhs) / max(mp.mpf(1), abs(rhs))
    logger.debug(f"[α,τ] の残差 τ={mp.nstr(state.tau, 8)}: {mp.nstr(residual, 5)}")
    return {"tau": state.tau, "alpha": alpha0, "lhs": lhs, "rhs": rhs, "residual": residual}


def palpha_check(tau) -> dict:
    """
    (x(τ), y(τ), ℘(α), ℘′(α)) での2つの代数方程式

        x² = (i−1)(℘ + e′ − 2e)/(℘ − e′)·x + i
        ℘′ = ∓(6e+2)/√(1+i)·(x + i√i)y/((x−i)²(x+1)²)

    2式目の符号は y(τ) との整合で決め、結果に記録する。
    """
    torus = burnside_torus()
    state = BurnsideState(tau)
    alpha = alpha_of_tau(state.tau)
    wp = torus.wp(alpha)
    wp_prime = torus.wp_prime(alpha)
    roots = x_roots_of_wp(wp, torus)
    first = min(abs(r - state.x) for r in roots) / max(mp.mpf(1), abs(state.x))
    e = torus.e.to_mpc()
    x, y = state.x, state.y
    rhs = -(6 * e + 2) / mp.sqrt(1 + mp.j) * (x + I_SQRT_I.to_mpc()) * y / ((x - mp.j) ** 2 * (x + 1) ** 2)
    sign = 1 if abs(wp_prime - rhs) <= abs(wp_prime + rhs) else -1
    second = abs(wp_prime - sign * rhs) / max(mp.mpf(1), abs(wp_prime))
    return {"tau": state.tau, "quadratic": first, "derivative": second, "sign": sign}


# =============================================================================
# 分岐点チャートの級数
# =============================================================================

def rotate(series: LaurentSeries, power: CycloQ = SQRT_I) -> LaurentSeries:
    """q → power·q（q^n の係数に power^n を掛ける）"""
    return LaurentSeries({e: CycloQ.coerce(c) * power ** e for e, c in series.terms.items()}, series.order, series.prefactor)


def half_chart_series(order: int) -> dict:
    """
    half チャート q_h = e^{πi/4}·q での X, Y, dX/Y, X·dX/Y

    Args:
        order: q の指数の打ち切り
    """
    x_half = solve_schwarz_series("half", order=order // 2 + 2).truncate(order)
    y_half = y_series_from_x(x_half)
    return {
        "X": x_half.materialize(),
        "Y": y_half.materialize(),
        "dx_over_y": eta_product_series("dx_over_y", order).materialize(),
        "x_dx_over_y": eta_product_series("x_dx_over_y", order).materialize(),
    }


def abelian_differential_series(order: int = DALPHA_TABLE_ORDER) -> dict:
    """
    チャート q = exp((πi/4)(τ−1)/(2τ−1)) での微分の級数

    Returns:
        dict:
            X: x の展開（1 + 4iq² + …）
            dx_over_y, x_dx_over_y: dX/Y, X·dX/Y の dq の係数
            dalpha: dα⁺ = M·N(q)dq の N（N = 1 − 2γq² − …）
            alpha: ∫N dq（α⁺ = ω + M·∫N）
    """
    half = half_chart_series(order)
    x_ab = rotate(half["X"])
    dxy = rotate(half["dx_over_y"]).scale(SQRT_I)
    xdxy = rotate(half["x_dx_over_y"]).scale(SQRT_I)
    lead = (1 - I_SQRT_I) * 2 * SQRT_I
    dalpha = ((x_ab - I_SQRT_I) * dxy).scale(lead.inverse()).truncate(order)
    alpha = dalpha.integral()
    logger.debug(f"アーベル微分の級数: q^{order} まで")
    return {
        "chart": ABELIAN_CHART,
        "X": x_ab,
        "dx_over_y": dxy,
        "x_dx_over_y": xdxy,
        "dalpha": dalpha,
        "alpha": alpha,
    }


def series_checks(order: int = DALPHA_TABLE_ORDER) -> dict:
    """
    級数の厳密な整合性

    Returns:
        dict: チェック名 → bool
            dx_over_y_quotient: η 積 = X′/Y（half チャート）
            x_dx_over_y_product: η 積 = X·(dX/Y)
            dalpha_table: 係数表と一致
            alpha_table: α⁺ の係数表と一致
            antiderivative: (∫N)′ = N
            integral_coefficients: ℤ[√2] 係数
    """
    half = half_chart_series(order)
    result = {
        "dx_over_y_quotient": half["dx_over_y"] == (half["X"].derivative() / half["Y"]).truncate(order - 1),
        "x_dx_over_y_product": half["x_dx_over_y"] == (half["X"] * half["dx_over_y"]).truncate(order),
    }
    series = abelian_differential_series(order)
    dalpha = series["dalpha"]
    table = {e: c for e, c in DALPHA_TABLE.items() if e < dalpha.order}
    result["dalpha_table"] = {e: c for e, c in dalpha.terms.items() if e < max(table) + 1} == table
    alpha_terms = series["alpha"].terms
    result["alpha_table"] = {e: c for e, c in alpha_terms.items() if e <= max(ALPHA_TABLE)} == ALPHA_TABLE
    result["antiderivative"] = series["alpha"].derivative() == dalpha
    result["integral_coefficients"] = dalpha.is_integral()
    return result


def series_scale_residual():
    """(1 − i√i)·2√i/√(1+i) と M = 2√(√2+1) の差"""
    lead = ((1 - I_SQRT_I) * 2 * SQRT_I).to_mpc() / mp.sqrt(1 + mp.j)
    return abs(lead - series_scale())


def alpha_series_value(tau, order: int = DALPHA_TABLE_ORDER, series: dict = None):
    """
    ω + M·∫N(q) を q = q(τ) で評価

    Returns:
        tuple: (値, 末尾の誤差見積り)
    """
    series = series or abelian_differential_series(order)
    q = ABELIAN_CHART.q_of_tau(tau)
    value, tail = series["alpha"].evaluate(q)
    m = series_scale()
    return burnside_torus().omega + m * value, m * tail


def series_vs_numeric(tau, order: int = DALPHA_TABLE_ORDER) -> dict:
    """
    級数の値と alpha_of_tau（ヒントは級数の値）の差
    """
    value, tail = alpha_series_value(tau, order)
    numeric = alpha_of_tau(tau, 1, value)
    return {
        "series": value,
        "numeric": numeric,
        "tail": tail,
        "residual": abs(value - numeric),
    }


def series_leading_coefficients(order: int = DALPHA_TABLE_ORDER) -> dict:
    """α⁺ の展開 q − 2γq³/3 − q⁹/9 + … の先頭係数（指数 → 係数）"""
    alpha = abelian_differential_series(order)["alpha"]
    return {e: c for e, c in sorted(alpha.terms.items())}

