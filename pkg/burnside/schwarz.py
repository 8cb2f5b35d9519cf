"""
シュワルツ方程式と有理型微分

{f,τ} = f‴/f′ − (3/2)(f″/f′)²,  [f,τ] = {f,τ}/f′²
"""
import logging
from fractions import Fraction

from mpmath import mp

import config
from utils.error_handler import DomainError
from .identities import x_derivatives_closed
from .state import BurnsideState, x_of_tau, y_of_tau

logger = logging.getLogger(__name__)

BRANCH_VALUES = (0, 1, -1, 1j, -1j)


# =============================================================================
# 有理関数 Q
# =============================================================================

def schwarz_Q(x):
    """
    Q(x) = −½(x⁸ + 14x⁴ + 1)/(x⁵ − x)²

    Fraction・CycloQ・mpmath のどの値でも評価できる。
    """
    x4 = x ** 4
    return -(x4 * x4 + 14 * x4 + 1) / (2 * (x ** 5 - x) ** 2)


def schwarz_Q_partial_fractions(x):
    """部分分数形: −½{Σ 1/(x−e)² − (4x³ + 0)/(x⁵ − x)}（付随パラメータ 0）"""
    i = mp.j
    total = sum(1 / (x - e) ** 2 for e in (0, 1, -1, i, -i))
    accessory = 0
    return -(total - (4 * x ** 3 + accessory) / (x ** 5 - x)) / 2


def schwarz_Qy(x, y):
    """
    y 側のシュワルツ方程式の右辺（Ψ̃_yy = ½Q(x,y)Ψ̃ の Q）

    Q = −½(5⁴xy⁶ + 415x²y⁴ − 511x³y² + 255x⁴ + 1)
        / ((5⁴xy⁶ + 1375x²y⁴ + 1025x³y² + 255x⁴ + 1)·y²)
    """
    y2 = y * y
    y4 = y2 * y2
    y6 = y4 * y2
    numerator = 625 * x * y6 + 415 * x ** 2 * y4 - 511 * x ** 3 * y2 + 255 * x ** 4 + 1
    denominator = 625 * x * y6 + 1375 * x ** 2 * y4 + 1025 * x ** 3 * y2 + 255 * x ** 4 + 1
    return -numerator / (2 * denominator * y2)


def z_schwarz_Q(z):
    """[z,τ] = −(27/2)(z² + 3)/(z²(z² − 9)²)"""
    z2 = z * z
    return -27 * (z2 + 3) / (2 * z2 * (z2 - 9) ** 2)


# =============================================================================
# 数値微分
# =============================================================================

def fornberg_weights(nodes: list, max_order: int) -> list:
    """
    点 0 における差分係数（フォルンベルグのアルゴリズム、厳密な有理数）

    Returns:
        list: weights[k][i] は k 階微分に対する nodes[i] の係数
    """
    nodes = [Fraction(x) for x in nodes]
    n = len(nodes)
    c = [[Fraction(0)] * (max_order + 1) for _ in range(n)]
    c[0][0] = Fraction(1)
    c1 = Fraction(1)
    c4 = nodes[0]
    for i in range(1, n):
        mn = min(i, max_order)
        c2 = Fraction(1)
        c5 = c4
        c4 = nodes[i]
        for j in range(i):
            c3 = nodes[i] - nodes[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2
            for k in range(mn, 0, -1):
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3
            c[j][0] = c4 * c[j][0] / c3
        c1 = c2
    return [[c[i][k] for i in range(n)] for k in range(max_order + 1)]


# 中心差分の節点（既定は9点）
_HALF_WIDTH = config.FINITE_DIFFERENCE["nodes"] // 2
STENCIL_NODES = list(range(-_HALF_WIDTH, _HALF_WIDTH + 1))
STENCIL_WEIGHTS = fornberg_weights(STENCIL_NODES, 3)


def tau_derivatives(f, tau, h=None) -> list:
    """
    f, f′, f″, f‴ を τ で数値微分

    Args:
        f: τ の解析関数（現在の mp.prec で評価するもの）
        tau: 評価点
        h: ステップ（None なら default_step() = 2^(−P/6)）

    9 点中心差分を精度 P + 4·log₂(1/h) で評価する。
    """
    tau = mp.mpc(tau)
    h = default_step() if h is None else mp.mpf(h)
    extra = int(-4 * mp.log(h, 2)) + 20
    with mp.extraprec(max(extra, 20)):
        values = [f(tau + k * h) for k in STENCIL_NODES]
        result = []
        for order, weights in enumerate(STENCIL_WEIGHTS):
            total = mp.fsum(mp.mpf(w.numerator) / w.denominator * v for w, v in zip(weights, values) if w)
            result.append(total / h ** order)
    return [+r for r in result]


def default_step():
    """h = 2^(−P/step_divisor)（既定 2^(−P/6)）"""
    return mp.ldexp(1, -mp.prec // config.FINITE_DIFFERENCE["step_divisor"])


def schwarzian(d1, d2, d3):
    return d3 / d1 - mp.mpf(3) / 2 * (d2 / d1) ** 2


def _check_fold(value, d1):
    if abs(d1) < mp.ldexp(1, -mp.prec // 4) * max(mp.mpf(1), abs(value)):
        raise DomainError(
            f"導関数がほぼ0です（折り返し点の近傍）: |f′|={mp.nstr(abs(d1), 5)}",
            error_code="branch_value",
            guard="|f′| > 2^(−P/4)",
        )


def meromorphic_derivative(f, tau, h=None):
    """
    [f,τ] = {f,τ}/f′²

    Raises:
        DomainError: f′ ≈ 0
    """
    value, d1, d2, d3 = tau_derivatives(f, tau, h)
    _check_fold(value, d1)
    return schwarzian(d1, d2, d3) / d1 ** 2


def chain_rule_residual(outer, inner, tau, h=None):
    """
    [X(q(τ)),τ] − ([X,q] + [q,τ]/X_q²) の大きさ

    Args:
        outer: X(q)
        inner: q(τ)
    """
    lhs = meromorphic_derivative(lambda t: outer(inner(t)), tau, h)
    q = inner(tau)
    _, x1, _, _ = tau_derivatives(outer, q, h)
    rhs = meromorphic_derivative(outer, q, h) + meromorphic_derivative(inner, tau, h) / x1 ** 2
    return abs(lhs - rhs) / max(mp.mpf(1), abs(rhs))


# =============================================================================
# 残差チェック
# =============================================================================

class SchwarzResidual:
    """
    [x,τ] の数値値と Q(x) の比較

    Attributes:
        lhs: [x,τ]
        rhs: Q(x(τ))
        residual: |lhs − rhs|
        relative: residual / max(1, |rhs|)
    """

    def __init__(self, tau, lhs, rhs, method: str):
        self.tau = tau
        self.lhs = lhs
        self.rhs = rhs
        self.method = method
        self.residual = abs(lhs - rhs)
        self.relative = self.residual / max(mp.mpf(1), abs(rhs))

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "tau": mp.nstr(self.tau, digits),
            "method": self.method,
            "lhs": mp.nstr(self.lhs, digits),
            "rhs": mp.nstr(self.rhs, digits),
            "residual": mp.nstr(self.residual, 5),
        }


def check_branch_distance(x, radius=None):
    """
    x が分岐値 {0, ±1, ±i} から radius（既定 2^(−P/4)）以上離れていることを確認

    τ 平面のガード TAU_GUARD_RADIUS は invert_x の Im τ の下限として別に使う。

    Raises:
        DomainError: 分岐値に近すぎる
    """
    radius = mp.mpf(radius) if radius is not None else mp.ldexp(1, -mp.prec // 4)
    for e in BRANCH_VALUES:
        if abs(x - e) < radius:
            raise DomainError(
                f"x={mp.nstr(x, 10)} が分岐値 {e} に近すぎます",
                error_code="branch_value",
                guard=f"|x − e| ≥ {mp.nstr(radius, 3)}",
            )


def schwarz_residual(tau, method: str = "diff", h=None) -> SchwarzResidual:
    """
    x(τ) のシュワルツ方程式の残差

    Args:
        tau: 評価点
        method: "diff"（数値微分）または "closed"（閉じた微分公式）
        h: 数値微分のステップ（None なら 2^(−P/6)）

    Raises:
        DomainError: x が分岐値に近い
    """
    state = BurnsideState(tau)
    check_branch_distance(state.x)
    if method == "closed":
        d1, d2, d3 = x_derivatives_closed(state)
        _check_fold(state.x, d1)
        lhs = schwarzian(d1, d2, d3) / d1 ** 2
    else:
        lhs = meromorphic_derivative(x_of_tau, state.tau, h)
    result = SchwarzResidual(state.tau, lhs, schwarz_Q(state.x), method)
    logger.debug(f"シュワルツ残差 τ={mp.nstr(state.tau, 8)} ({method}): {mp.nstr(result.residual, 5)}")
    return result


def y_schwarz_residual(tau, h=None):
    """
    |[y,τ] − Q(x,y)| / max(1, |Q(x,y)|)

    Raises:
        DomainError: y ≈ 0 または Q(x,y) の分母 ≈ 0
    """
    state = BurnsideState(tau)
    check_branch_distance(state.x)
    lhs = meromorphic_derivative(y_of_tau, state.tau, h)
    rhs = schwarz_Qy(state.x, state.y)
    return abs(lhs - rhs) / max(mp.mpf(1), abs(rhs))


# z の候補（r = ℘₁/℘₂）
Z_NORMALIZATIONS = {
    "text": ("℘₁/℘₂ − 1", lambda r: r - 1),
    "display": ("2℘₁/℘₂ + 2", lambda r: 2 * r + 2),
    "cusp": ("2℘₁/℘₂ − 2", lambda r: 2 * r - 2),
}


def _wp_ratio(tau):
    state = BurnsideState(tau)
    return state.wp1 / state.wp2


def z_schwarzian_check(tau, h=None) -> dict:
    """
    z = ℘₁/℘₂ の正規化ごとに [z,τ] = −(27/2)(z²+3)/(z²(z²−9)²) の残差を評価

    カスプで z ∈ {0, ±3} となるのは 2℘₁/℘₂ − 2 のみなので、
    本文・数式表示の2つに加えてこの正規化も比較する。

    Returns:
        dict: {"residuals": {名前: 残差}, "chosen": 残差最小の名前, "formula": 式}
    """
    tau = mp.mpc(tau)
    residuals = {}
    for name, (_, transform) in Z_NORMALIZATIONS.items():
        def z_of_tau(t, transform=transform):
            return transform(_wp_ratio(t))

        z = z_of_tau(tau)
        lhs = meromorphic_derivative(z_of_tau, tau, h)
        rhs = z_schwarz_Q(z)
        residuals[name] = abs(lhs - rhs) / max(mp.mpf(1), abs(rhs))
    chosen = min(residuals, key=lambda name: residuals[name])
    logger.debug(f"z の正規化 τ={mp.nstr(tau, 8)}: {chosen}")
    return {"residuals": residuals, "chosen": chosen, "formula": Z_NORMALIZATIONS[chosen][0]}
