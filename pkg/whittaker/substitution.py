"""
変数変換による Q 関数の変換

    Ψ̃(y) = √(y_x)·Ψ(x):   Q̃(y) = x_y²·Q(x(y)) − {x, y}
    Ψ(x) = s(y)·Ψ̃(y):     Ψ̃″ + P·Ψ̃′ + R·Ψ̃ = 0（ウェーバー型は s = √y）

Q は Ψ_xx = ½Q(x)Ψ の規約。
"""
import logging

from mpmath import mp

from burnside.schwarz import schwarz_Q, schwarzian, tau_derivatives
from torus.fuchsian import lambda_fuchsian_Q, x_of_lambda
from utils.error_handler import DomainError, ValidationError
from .conjecture import HyperellipticCurve, whittaker_Q, whittaker_curve
from .hypergeometric import hypergeometric_reduce

logger = logging.getLogger(__name__)

SQRT_DERIV = "sqrt_deriv"
WEBER = "weber"
CHANGES = (SQRT_DERIV, WEBER)


def map_derivatives(x_of_y, y, h=None) -> tuple:
    """
    x(y), x′, x″, x‴

    Raises:
        DomainError: x′(y) ≈ 0（写像の臨界点）
    """
    x, d1, d2, d3 = tau_derivatives(x_of_y, y, h)
    if abs(d1) < mp.ldexp(1, -mp.prec // 4) * max(mp.mpf(1), abs(x)):
        raise DomainError(
            f"写像の臨界点です: y={mp.nstr(y, 10)}",
            error_code="branch_value",
            guard="|x_y| > 2^(−P/4)",
        )
    return x, d1, d2, d3


def _sqrt_deriv(q_in, x_of_y, h):
    def q_out(y):
        x, d1, d2, d3 = map_derivatives(x_of_y, mp.mpc(y), h)
        return d1 * d1 * q_in(x) - schwarzian(d1, d2, d3)
    return q_out


def weber_log_gauge(y) -> tuple:
    """s = √y の (s′/s, (s′/s)′)"""
    y = mp.mpc(y)
    return 1 / (2 * y), -1 / (2 * y * y)


def gauge_transform(q_in, x_of_y, log_gauge=weber_log_gauge, h=None):
    """
    Ψ(x) = s(y)Ψ̃(y) による変換

    Args:
        q_in: Q(x)
        x_of_y: 写像 y ↦ x
        log_gauge: y ↦ (σ, σ′)（σ = s′/s）
        h: 差分ステップ

    Returns:
        callable: y ↦ {"P", "R", "invariant"}（invariant = R − P²/4 − P′/2 = −½Q̃(y)）
    """
    def coefficients(y):
        y = mp.mpc(y)
        x, d1, d2, d3 = map_derivatives(x_of_y, y, h)
        sigma, sigma_prime = log_gauge(y)
        log_x1 = d2 / d1
        p = 2 * sigma - log_x1
        r = sigma_prime + sigma * sigma - log_x1 * sigma - q_in(x) * d1 * d1 / 2
        p_prime = 2 * sigma_prime - (d3 / d1 - log_x1 * log_x1)
        return {"P": p, "R": r, "invariant": r - p * p / 4 - p_prime / 2}
    return coefficients


def substitution_transform(q_in, change: str, x_of_y, h=None):
    """
    Q_in を変数変換で移す

    Args:
        q_in: Q(x)
        change: SQRT_DERIV（Q̃(y) を返す）または WEBER（(P, R) を返す）
        x_of_y: 局所的に可逆な写像 y ↦ x
        h: 差分ステップ（None なら 2^(−P/6)）

    Raises:
        ValidationError: 未知の変換
    """
    if change == SQRT_DERIV:
        return _sqrt_deriv(q_in, x_of_y, h)
    if change == WEBER:
        return gauge_transform(q_in, x_of_y, weber_log_gauge, h)
    raise ValidationError(f"未知の変換: {change}（{', '.join(CHANGES)}）")


def functoriality_residual(q_in, outer, inner, y, h=None):
    """
    x = outer(t), t = inner(y) で2回変換したものと合成で1回変換したものの差
    """
    y = mp.mpc(y)
    twice = _sqrt_deriv(_sqrt_deriv(q_in, outer, h), inner, h)(y)
    once = _sqrt_deriv(q_in, lambda s: outer(inner(s)), h)(y)
    return abs(twice - once) / max(mp.mpf(1), abs(once))


# =============================================================================
# 具体的な変換
# =============================================================================

def reduction_map(g: int, a):
    """
    y² = x^{2g+1} + a の y ↦ x の1つの枝 x = e^{πi/(2g+1)}(a − y²)^{1/(2g+1)}

    |y|² < |a| の実軸近傍で正則。
    """
    n = 2 * g + 1
    a = a.to_mpc() if hasattr(a, "to_mpc") else mp.mpc(a)
    phase = mp.expjpi(mp.mpf(1) / n)

    def x_of_y(y):
        return phase * (a - y * y) ** (mp.mpf(1) / n)
    return x_of_y


def reduction_residual(curve: HyperellipticCurve = None, y=None, h=None):
    """
    A = 0 の予想の Q を y ↦ x で移したものと帰着した方程式の差

    既定は y² = x⁵ + 1（a = 1）と y = 1/3。

    Returns:
        tuple: (相対残差, 変換した ½Q̃, 帰着式の ½Q̃)
    """
    curve = curve or whittaker_curve()
    y = mp.mpf(1) / 3 if y is None else mp.mpc(y)
    g = curve.genus
    a = curve.E[0]
    reduction = hypergeometric_reduce(g, a)
    q_out = substitution_transform(whittaker_Q(curve), SQRT_DERIV, reduction_map(g, a), h)(y)
    expected = reduction.half_Q(mp.mpc(y))
    residual = abs(q_out / 2 - expected) / max(mp.mpf(1), abs(expected))
    logger.debug(f"帰着 g={g} y={mp.nstr(y, 6)}: 残差 {mp.nstr(residual, 5)}")
    return residual, q_out / 2, expected


def _tracked_root(lam0):
    """λ0 の近傍で連続な x(λ)（λ0 の第1根に近い根）"""
    x0 = x_of_lambda(lam0)[0]

    def x_of_lam(lam):
        return min(x_of_lambda(lam), key=lambda r: abs(r - x0))
    return x_of_lam


def lambda_pullback_residual(lam=2, h=None):
    """
    x 平面の方程式を λ(x) で移したものと λ 平面の方程式の差

    Returns:
        tuple: (相対残差, 変換した Q, λ 平面の Q)
    """
    lam = mp.mpc(lam)
    q_out = substitution_transform(schwarz_Q, SQRT_DERIV, _tracked_root(lam), h)(lam)
    expected = lambda_fuchsian_Q(lam)
    residual = abs(q_out - expected) / max(mp.mpf(1), abs(expected))
    return residual, q_out, expected
