"""
ガウスの超幾何関数と y² = x^{2g+1} + a の超幾何型への帰着

    Ψ̃_yy = −(g(g+1)/(2g+1)²)·((y² + 3a)/(y² − a)²)·Ψ̃
"""
import logging
from fractions import Fraction

from mpmath import mp

from burnside.schwarz import tau_derivatives
from burnside.state import BurnsideState
from elliptic.modular import klein_j
from numeric.cyclo import CycloQ
from utils.error_handler import ConvergenceError, DomainError, ValidationError
from .conjecture import HyperellipticCurve, local_exponents, poly_trim

logger = logging.getLogger(__name__)


def _mp_rational(value: Fraction):
    value = Fraction(value)
    return mp.mpf(value.numerator) / value.denominator


class HypergeometricParams:
    """
    ₂F₁(a, b; c | z) のパラメータ（有理数）

    Raises:
        ValidationError: c が 0 以下の整数
    """

    def __init__(self, a, b, c):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.c = Fraction(c)
        if self.c.denominator == 1 and self.c <= 0:
            raise ValidationError(f"c が 0 以下の整数です: c={self.c}")

    @property
    def exponents(self) -> dict:
        """リーマンの P 記号の指数"""
        return {
            "0": (Fraction(0), 1 - self.c),
            "1": (Fraction(0), self.c - self.a - self.b),
            "∞": (self.a, self.b),
        }

    def to_dict(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c)}

    def __repr__(self):
        return f"HypergeometricParams({self.a}, {self.b}, {self.c})"


# J の反転に現れるパラメータ
J_INVERSION = HypergeometricParams(Fraction(1, 12), Fraction(1, 12), Fraction(2, 3))


def gauss_2f1(p: HypergeometricParams, z, max_terms: int = None) -> tuple:
    """
    |z| < 1 での級数和

    Args:
        p: パラメータ
        z: 評価点
        max_terms: 最大項数（省略時は 40·P）

    Returns:
        tuple: (値, 末尾の見積り)

    Raises:
        DomainError: |z| ≥ 1
        ConvergenceError: max_terms で収束しない
    """
    z = mp.mpc(z)
    if abs(z) >= 1:
        raise DomainError(
            f"₂F₁ の級数は |z| < 1 でのみ評価します: |z|={mp.nstr(abs(z), 8)}",
            error_code="series_radius",
            guard="|z| < 1",
        )
    a, b, c = (_mp_rational(v) for v in (p.a, p.b, p.c))
    max_terms = max_terms or 40 * mp.prec
    eps = mp.ldexp(1, -mp.prec - 4)
    radius = abs(z)
    with mp.extraprec(20):
        term = mp.mpc(1)
        total = mp.mpc(1)
        for n in range(max_terms):
            term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
            total += term
            ratio = abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2))) * radius
            if ratio < 1 and n > 2:
                tail = abs(term) * max(ratio, radius) / (1 - max(ratio, radius))
                if tail <= eps * max(mp.mpf(1), abs(total)):
                    return +total, +tail
    raise ConvergenceError(
        f"₂F₁ が {max_terms} 項で収束しません: z={mp.nstr(z, 8)}",
        error_code="series_radius",
    )


def hypergeometric_ode_residual(p: HypergeometricParams, z, h=None):
    """|z(1−z)F″ + (c − (a+b+1)z)F′ − abF| の相対残差"""
    a, b, c = (_mp_rational(v) for v in (p.a, p.b, p.c))
    z = mp.mpc(z)
    value, d1, d2, _ = tau_derivatives(lambda t: gauss_2f1(p, t)[0], z, h)
    terms = [z * (1 - z) * d2, (c - (a + b + 1) * z) * d1, -a * b * value]
    return abs(mp.fsum(terms)) / max(mp.mpf(1), *(abs(t) for t in terms))


def j_inversion_check(z=Fraction(1, 10)) -> dict:
    """
    J の反転のパラメータ (1/12, 1/12; 2/3) での評価と方程式の残差

    Returns:
        dict: {"value", "tail", "residual"}
    """
    z = _mp_rational(z) if isinstance(z, Fraction) else mp.mpc(z)
    value, tail = gauss_2f1(J_INVERSION, z)
    return {"value": value, "tail": tail, "residual": hypergeometric_ode_residual(J_INVERSION, z)}


# =============================================================================
# J と z = x⁴ の多項式関係
# =============================================================================

def j_polynomial(z, j_value):
    """(z² + 14z + 1)³ − 108z(z − 1)⁴J"""
    return (z * z + 14 * z + 1) ** 3 - 108 * z * (z - 1) ** 4 * j_value


def j_polynomial_coefficients(j_value) -> list:
    """z の6次多項式の係数（降べき順）"""
    j_value = mp.mpc(j_value)
    # (z² + 14z + 1)³
    cube = [1, 42, 591, 2828, 591, 42, 1]
    # 108z(z − 1)⁴ = 108(z⁵ − 4z⁴ + 6z³ − 4z² + z)
    quartic = [0, 108, -432, 648, -432, 108, 0]
    return [mp.mpc(c) - q * j_value for c, q in zip(cube, quartic)]


def x4_candidates(j_value) -> list:
    """J を与えたときの z = x⁴ の6つの候補"""
    return mp.polyroots(j_polynomial_coefficients(j_value), maxsteps=200, extraprec=mp.prec)


def x4_recovery_check(tau) -> dict:
    """
    x(τ)⁴ が J(τ) の多項式の根の1つであることの確認

    Returns:
        dict: {"z", "distance"}（最も近い根までの相対距離）
    """
    state = BurnsideState(tau)
    z = state.x ** 4
    roots = x4_candidates(klein_j(state.tau))
    distance = min(abs(r - z) for r in roots) / max(mp.mpf(1), abs(z))
    logger.debug(f"x⁴ の復元 τ={mp.nstr(state.tau, 8)}: 距離 {mp.nstr(distance, 5)}")
    return {"z": z, "distance": distance}


# =============================================================================
# 超幾何型への帰着
# =============================================================================

class HypergeometricReduction:
    """
    y² = x^{2g+1} + a から得られる3点型の方程式 Ψ̃_yy = ½Q̃(y)Ψ̃

    機能:
    1. ½Q̃ = c·(y² + 3a)/(y² − a)², c = −g(g+1)/(2g+1)²（厳密）
    2. y = ±√a, ∞ での指数 {g/(2g+1), (g+1)/(2g+1)}
    3. 三角群の角 2π/(2g+1)

    Args:
        g: 種数
        a: 定数項（int・Fraction・CycloQ）
    """

    def __init__(self, g: int, a):
        if g < 1:
            raise ValidationError(f"種数は1以上が必要です: {g}")
        self.g = g
        self.a = CycloQ.coerce(a)
        if self.a.is_zero():
            raise ValidationError("a = 0 では曲線が退化します")
        self.coefficient = Fraction(-g * (g + 1), (2 * g + 1) ** 2)

    @property
    def exponents(self) -> tuple:
        return local_exponents(self.coefficient)

    @property
    def triangle_angle(self) -> Fraction:
        """角（π の倍数）"""
        return Fraction(2, 2 * self.g + 1)

    def half_Q(self, y):
        """
        Raises:
            DomainError: y² = a
        """
        exact = isinstance(y, (int, Fraction, CycloQ))
        a = self.a if exact else self.a.to_mpc()
        c = self.coefficient if exact else _mp_rational(self.coefficient)
        y = y if exact else mp.mpc(y)
        denominator = (y * y - a) ** 2
        zero = CycloQ.coerce(denominator).is_zero() if exact else abs(denominator) < mp.ldexp(1, -mp.prec // 2)
        if zero:
            raise DomainError(
                f"特異点 y² = a での評価です: y={y}",
                error_code="pole",
                guard="y² ≠ a",
            )
        return c * (y * y + 3 * a) / denominator

    def __call__(self, y):
        return 2 * self.half_Q(y)

    def to_dict(self) -> dict:
        return {
            "g": self.g,
            "a": str(self.a),
            "coefficient": str(self.coefficient),
            "exponents": [str(e) for e in self.exponents],
            "triangle_angle": f"{self.triangle_angle}π",
        }


def hypergeometric_reduce(g: int, a_const) -> HypergeometricReduction:
    return HypergeometricReduction(g, a_const)


def reduce_curve(curve: HyperellipticCurve) -> HypergeometricReduction:
    """
    E(x) が定数の曲線だけを帰着する

    Raises:
        ValidationError: E(x) が定数でない（分母から E = a が必要）
    """
    e = poly_trim(curve.E)
    if len(e) > 1:
        raise ValidationError(f"E(x) が定数でないため超幾何型に帰着できません: 次数 {len(e) - 1}")
    if not e:
        raise ValidationError("E(x) = 0 では曲線が退化します")
    return HypergeometricReduction(curve.genus, e[0])


# =============================================================================
# g = 2, a = 1 の解
# =============================================================================

PSI_FIRST = HypergeometricParams(Fraction(2, 5), Fraction(1, 5), Fraction(4, 5))
PSI_SECOND = HypergeometricParams(Fraction(3, 5), Fraction(2, 5), Fraction(6, 5))


def psi_tilde(y, index: int = 1):
    """
    Ψ̃₁ = (1 − y²)^{2/5}·₂F₁(2/5, 1/5; 4/5 | (1−y)/2)
    Ψ̃₂ = (1 − y)^{1/5}(1 − y²)^{2/5}·₂F₁(3/5, 2/5; 6/5 | (1−y)/2)

    (y − 1), (y² − 1) の冪を (1 − y), (1 − y²) に替えた定数倍で、−1 < y < 1 の近傍で正則。

    Raises:
        ValidationError: index が 1, 2 以外
    """
    y = mp.mpc(y)
    z = (1 - y) / 2
    prefactor = (1 - y * y) ** (mp.mpf(2) / 5)
    if index == 1:
        return prefactor * gauss_2f1(PSI_FIRST, z)[0]
    if index == 2:
        return (1 - y) ** (mp.mpf(1) / 5) * prefactor * gauss_2f1(PSI_SECOND, z)[0]
    raise ValidationError(f"解の番号は 1 か 2: {index}")


def psi_tilde_residual(y=Fraction(1, 3), index: int = 1, h=None):
    """|Ψ̃″ − ½Q̃Ψ̃| の相対残差（g = 2, a = 1）"""
    y_mp = _mp_rational(y) if isinstance(y, Fraction) else mp.mpc(y)
    value, _, second, _ = tau_derivatives(lambda t: psi_tilde(t, index), y_mp, h)
    rhs = hypergeometric_reduce(2, 1).half_Q(y_mp) * value
    residual = abs(second - rhs) / max(mp.mpf(1), abs(rhs))
    logger.debug(f"Ψ̃{index} y={mp.nstr(y_mp, 6)}: 残差 {mp.nstr(residual, 5)}")
    return residual
