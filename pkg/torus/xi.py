"""
トーラス上の方程式の解と正則積分の数値確認

    Ξ(α) = √((x − i√i)y)·(A·K(x⁴) + B·K′(x⁴))
    ∫(x − i√i)/√(x⁵ − x) dx = √(1+i)·Δα
"""
import logging

from mpmath import mp

import config
from burnside.schwarz import tau_derivatives
from elliptic.integrals import wp_inverse
from elliptic.weierstrass import lattice_coordinates, reduce_to_cell, wp_family
from utils.error_handler import ConvergenceError, DomainError
from .cover import CURVE_BRANCH_POINTS, I_SQRT_I, BurnsideTorus, burnside_torus, cover_wp_of_x, x_roots_of_wp, y_from_cover
from .fuchsian import BURNSIDE, FuchsianTorusEq

logger = logging.getLogger(__name__)

BASIS = ((1, 0), (0, 1))

# α の追跡で避ける点（x → α の分岐点と ℘′(α) = 0 となる −i√i）
TRACKING_GUARDS = CURVE_BRANCH_POINTS + (complex(2 ** -0.5, -(2 ** -0.5)),)


# =============================================================================
# Ξ 解
# =============================================================================

def _continued_K(w, side: int):
    """K(w) を切断線 (1, ∞) の side 側から解析接続した値"""
    return (mp.ellipk(1 / w) + side * mp.j * mp.ellipk(1 - 1 / w)) / mp.sqrt(w)


class _KBranch:
    """
    中心 w0 の近傍で連続な K(w)

    Re w0 > 1 なら接続公式を使い、側は中心の mp.ellipk の値に合わせる。
    """

    def __init__(self, w0):
        w0 = mp.mpc(w0)
        self.continued = mp.re(w0) > 1
        self.side = 1
        if self.continued and mp.im(w0) != 0:
            reference = mp.ellipk(w0)
            if abs(_continued_K(w0, -1) - reference) < abs(_continued_K(w0, 1) - reference):
                self.side = -1

    def __call__(self, w):
        w = mp.mpc(w)
        if self.continued:
            return _continued_K(w, self.side)
        if mp.im(w) == 0 and mp.re(w) >= 1:
            raise DomainError(
                f"K(m) の切断線上です: m={mp.nstr(w, 10)}",
                error_code="branch_cut",
                guard="m ∉ [1, ∞)",
            )
        return mp.ellipk(w)


class XiSolution:
    """
    α の近傍での Ξ(α)

    x(α) は中心の根に最も近い根、y は ℘′(α) から被覆の式で戻す。
    √((x − i√i)y) と K は中心の値から連続に選ぶ。

    Args:
        alpha: 中心
        coefficients: (A, B)
        torus: 省略時は現在の精度のトーラス
    """

    def __init__(self, alpha, coefficients=(1, 0), torus: BurnsideTorus = None):
        self.torus = torus or burnside_torus()
        self.alpha = mp.mpc(alpha)
        self.a, self.b = coefficients
        _, _, wp, wp_prime = wp_family(self.alpha, self.torus.lp)
        roots = x_roots_of_wp(wp, self.torus)
        self.x0 = roots[0]
        self.separation = abs(roots[0] - roots[1])
        self.w0 = self._radicand(self.x0, wp_prime)
        self.s0 = mp.sqrt(self.w0)
        m0 = self.x0 ** 4
        self.k = _KBranch(m0)
        self.k_prime = _KBranch(1 - m0)

    def _radicand(self, x, wp_prime):
        return (x - I_SQRT_I.to_mpc()) * y_from_cover(x, wp_prime)

    def _track_x(self, alpha):
        _, _, wp, wp_prime = wp_family(alpha, self.torus.lp)
        roots = sorted(x_roots_of_wp(wp, self.torus), key=lambda r: abs(r - self.x0))
        if abs(roots[0] - self.x0) > self.separation / 2:
            raise ConvergenceError(
                f"x(α) の枝を追跡できません: α={mp.nstr(alpha, 12)}",
                error_code="branch_tracking",
            )
        return roots[0], wp_prime

    def __call__(self, alpha):
        x, wp_prime = self._track_x(mp.mpc(alpha))
        s = self.s0 * mp.sqrt(self._radicand(x, wp_prime) / self.w0)
        m = x ** 4
        return s * (self.a * self.k(m) + self.b * self.k_prime(1 - m))


def xi_solution_check(alpha, coefficients=BASIS, h=None) -> list:
    """
    |Ξ_αα − ½Q(α)Ξ| を (A, B) ごとに計算（Q は BURNSIDE の方程式）

    Args:
        alpha: 評価点（特異点から離れていること）
        coefficients: (A, B) のリスト
        h: 差分ステップ（None なら 2^(−P/6)）

    Returns:
        list: {"coefficients", "xi", "residual"}
    """
    alpha = mp.mpc(alpha)
    half_q = FuchsianTorusEq(BURNSIDE).half_Q(alpha)
    results = []
    for pair in coefficients:
        solution = XiSolution(alpha, pair)
        value, _, second, _ = tau_derivatives(solution, alpha, h)
        rhs = half_q * value
        residual = abs(second - rhs) / max(mp.mpf(1), abs(rhs))
        logger.debug(f"Ξ 解 α={mp.nstr(alpha, 8)} (A,B)={pair}: 残差 {mp.nstr(residual, 5)}")
        results.append({"coefficients": pair, "xi": value, "residual": residual})
    return results


# =============================================================================
# 正則積分
# =============================================================================

def _curve(x):
    return x ** 5 - x


def _segment_distance(p, a, b):
    """点 p と線分 [a, b] の距離"""
    d = b - a
    if d == 0:
        return abs(p - a)
    t = mp.re((p - a) * mp.conj(d)) / abs(d) ** 2
    t = min(max(t, mp.mpf(0)), mp.mpf(1))
    return abs(p - (a + t * d))


def refine_path(x_path: list, guards=TRACKING_GUARDS, ratio: int = 4) -> list:
    """
    折れ線を、各区間の長さが近くのガード点までの距離の 1/ratio 以下になるよう分割

    Raises:
        DomainError: 折れ線がガード点に近すぎる
    """
    radius = mp.mpf(config.TAU_GUARD_RADIUS)
    points = [mp.mpc(x) for x in x_path]
    refined = [points[0]]
    for a, b in zip(points, points[1:]):
        distance = min(_segment_distance(mp.mpc(g), a, b) for g in guards)
        if distance < radius:
            raise DomainError(
                f"経路が分岐点に近すぎます: [{mp.nstr(a, 8)}, {mp.nstr(b, 8)}]",
                error_code="branch_cut",
                guard=f"距離 ≥ {mp.nstr(radius, 3)}",
            )
        count = max(1, int(mp.ceil(ratio * abs(b - a) / distance)))
        for k in range(1, count + 1):
            refined.append(a + (b - a) * k / count)
    return refined


def holo_integral(x_path: list, y_start=None) -> tuple:
    """
    ∫(x − i√i)/y dx を折れ線に沿って計算（y は連続に接続）

    Returns:
        tuple: (積分値, 細分した経路, 各点の y)
    """
    points = refine_path(x_path)
    y = mp.sqrt(_curve(points[0])) if y_start is None else mp.mpc(y_start)
    ys = [y]
    c = I_SQRT_I.to_mpc()
    total = mp.mpc(0)
    for a, b in zip(points, points[1:]):
        y_ref = ys[-1]

        def integrand(t, a=a, b=b, y_ref=y_ref):
            x = a + (b - a) * t
            return (x - c) / (y_ref * mp.sqrt(_curve(x) / y_ref ** 2)) * (b - a)

        total += mp.quad(integrand, [0, 1])
        ys.append(y_ref * mp.sqrt(_curve(b) / y_ref ** 2))
    return total, points, ys


def track_alpha(points: list, torus: BurnsideTorus = None, hint=None) -> list:
    """
    x の経路に沿って ℘(α) = cover(x) の α を連続に追跡
    """
    torus = torus or burnside_torus()
    values = []
    previous = hint if hint is not None else torus.omega
    for x in points:
        previous = wp_inverse(cover_wp_of_x(x), torus.lp, previous)
        values.append(previous)
    return values


def holo_integral_check(x_path: list, torus: BurnsideTorus = None) -> dict:
    """
    ∫(x − i√i)/√(x⁵ − x) dx と √(1+i)·(α_end − α_start) の比較（格子を法として、符号 ±）

    Returns:
        dict: {"integral", "delta_alpha", "sign", "residual"}
    """
    torus = torus or burnside_torus()
    integral, points, _ = holo_integral(x_path)
    alphas = track_alpha(points, torus)
    delta = alphas[-1] - alphas[0]
    scaled = integral / mp.sqrt(1 + mp.j)
    best = None
    for sign in (1, -1):
        reduced = reduce_to_cell(scaled - sign * delta, torus.lp)[0]
        if best is None or abs(reduced) < best[1]:
            best = (sign, abs(reduced))
    logger.debug(f"正則積分 {len(points)} 点: 残差 {mp.nstr(best[1], 5)}")
    return {"integral": integral, "delta_alpha": delta, "sign": best[0], "residual": best[1]}


def circle_path(center, radius, nodes: int = 64) -> list:
    """閉じた多角形の円周"""
    center = mp.mpc(center)
    radius = mp.mpf(radius)
    return [center + radius * mp.expjpi(mp.mpf(2 * k) / nodes) for k in range(nodes + 1)]


def holo_period_check(center=0.5, radius=0.6, nodes: int = 64, torus: BurnsideTorus = None) -> dict:
    """
    閉路上の積分が周期格子 (2ω, 2ω′) の点になることの確認

    既定の円は分岐点 0 と 1 を囲む。

    Returns:
        dict: {"period", "coordinates", "integer_residual", "alpha_residual"}
    """
    torus = torus or burnside_torus()
    path = circle_path(center, radius, nodes)
    result = holo_integral_check(path, torus)
    period = result["integral"] / mp.sqrt(1 + mp.j)
    s, t = lattice_coordinates(period, torus.lp)
    integer_residual = max(abs(s - mp.nint(s)), abs(t - mp.nint(t)))
    return {
        "period": period,
        "coordinates": (int(mp.nint(s)), int(mp.nint(t))),
        "integer_residual": integer_residual,
        "alpha_residual": result["residual"],
    }
