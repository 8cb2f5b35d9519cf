"""
超楕円曲線に対するホイッタカーの Q 関数

    Q(x) = −(3/8){f′²/f² − ((2g+2)/(2g+1))·f″/f}

を厳密（CycloQ）または mpmath で評価し、付随パラメータ A(x) による分解

    Q(x) = −(3/8){f′²/f² − 4g(g+1)x^{2g−1}/f − (E″ + A)/f}

と比較する。両者の一致は (2g+1)A = E″ と同値。
"""
import logging
from fractions import Fraction
from math import isqrt

from mpmath import mp

from burnside.schwarz import schwarz_Q
from numeric.cyclo import CycloQ
from utils.error_handler import DomainError, ValidationError

logger = logging.getLogger(__name__)

CONJECTURE_PREFACTOR = Fraction(-3, 8)
PARABOLIC_PREFACTOR = Fraction(-1, 2)


# =============================================================================
# 多項式（係数は昇べき順のリスト）
# =============================================================================

def _is_exact(value) -> bool:
    return isinstance(value, (int, Fraction, CycloQ))


def _normalize(value):
    """厳密値は CycloQ、それ以外は mpmath の複素数"""
    if _is_exact(value):
        return CycloQ.coerce(value)
    return mp.mpc(value)


def _to_mp(value):
    if isinstance(value, CycloQ):
        return value.to_mpc()
    if isinstance(value, Fraction):
        return mp.mpf(value.numerator) / value.denominator
    return mp.mpc(value)


def _is_zero(value) -> bool:
    if isinstance(value, CycloQ):
        return value.is_zero()
    return value == 0


def poly_trim(p: list) -> list:
    p = list(p)
    while p and _is_zero(p[-1]):
        p.pop()
    return p


def poly_add(p: list, q: list) -> list:
    n = max(len(p), len(q))
    return poly_trim([(p[k] if k < len(p) else 0) + (q[k] if k < len(q) else 0) for k in range(n)])


def poly_scale(p: list, c) -> list:
    if isinstance(c, Fraction) and not all(isinstance(a, CycloQ) for a in p):
        c = _to_mp(c)
    return poly_trim([a * c for a in p])


def poly_mul(p: list, q: list) -> list:
    if not p or not q:
        return []
    result = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            result[i + j] = result[i + j] + a * b
    return poly_trim(result)


def poly_derivative(p: list) -> list:
    return poly_trim([k * p[k] for k in range(1, len(p))])


def poly_eval(p: list, x):
    """ホーナー法（係数か x が mpmath 値なら埋め込んで評価）"""
    if _is_exact(x) and all(isinstance(c, CycloQ) for c in p):
        result = CycloQ(0)
        for c in reversed(p):
            result = result * x + c
        return result
    x = _to_mp(x)
    result = mp.mpc(0)
    for c in reversed(p):
        result = result * x + _to_mp(c)
    return result


def poly_from_roots(roots: list) -> list:
    p = [1]
    for e in roots:
        p = poly_mul(p, [-e, 1])
    return [_normalize(c) for c in p]


def poly_divide_linear(p: list, root) -> tuple:
    """
    組立除法 p(x) = (x − root)·h(x) + r

    Returns:
        tuple: (h の係数, 余り r)
    """
    n = len(p) - 1
    h = [None] * n
    carry = p[n]
    for k in range(n - 1, -1, -1):
        h[k] = carry
        carry = p[k] + carry * root
    return h, carry


def poly_to_strings(p: list) -> list:
    return [str(c) for c in p]


# =============================================================================
# 超楕円曲線
# =============================================================================

class HyperellipticCurve:
    """
    超楕円曲線 y² = f(x) = (x − e₁)⋯(x − e_{2g+1}) = x^{2g+1} + E(x)

    機能:
    1. 分岐点から f の係数を厳密に組み立てる（CycloQ の分岐点なら厳密）
    2. f, f′, f″ と E(x) の評価
    3. 分岐点での評価を DomainError で拒否

    Args:
        branch_points: 相異なる 2g+1 個の点（int・Fraction・CycloQ・mpmath 値）

    Raises:
        ValidationError: 点の個数が偶数・3未満、または重複がある
    """

    def __init__(self, branch_points: list):
        points = [_normalize(e) for e in branch_points]
        if len(points) < 3 or len(points) % 2 == 0:
            raise ValidationError(f"分岐点は 2g+1 個（g ≥ 1）必要です: {len(points)} 個")
        for i in range(len(points)):
            for j in range(i):
                if self._coincide(points[i], points[j]):
                    raise ValidationError(f"分岐点が重複しています: {points[i]}")
        self.branch_points = points
        exact = all(isinstance(e, CycloQ) for e in points)
        self.coefficients = poly_from_roots(points if exact else [self._lift(e) for e in points])

    @staticmethod
    def _lift(value):
        return value.to_mpc() if isinstance(value, CycloQ) else value

    @classmethod
    def _coincide(cls, a, b) -> bool:
        if isinstance(a, CycloQ) and isinstance(b, CycloQ):
            return a == b
        return abs(cls._lift(a) - cls._lift(b)) < mp.ldexp(1, -mp.prec // 2)

    @classmethod
    def from_polynomial(cls, coefficients: list) -> "HyperellipticCurve":
        """
        y² = x^{2g+1} + E(x) の係数（昇べき順、最高次の係数1）から作る

        分岐点は持たない（部分分数の係数は計算できない）。重根の検査はしない。

        Raises:
            ValidationError: 次数が奇数3以上でない、またはモニックでない
        """
        coeffs = poly_trim([_normalize(c) for c in coefficients])
        degree = len(coeffs) - 1
        if degree < 3 or degree % 2 == 0:
            raise ValidationError(f"f の次数は 2g+1（g ≥ 1）が必要です: {degree}")
        if coeffs[-1] != 1:
            raise ValidationError(f"f はモニックが必要です: 最高次の係数 {coeffs[-1]}")
        curve = cls.__new__(cls)
        curve.branch_points = None
        curve.coefficients = coeffs
        return curve

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def genus(self) -> int:
        return self.degree // 2

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, CycloQ) for c in self.coefficients)

    @property
    def E(self) -> list:
        """f − x^{2g+1}"""
        return poly_trim(self.coefficients[:-1])

    def f(self, x):
        return poly_eval(self.coefficients, x)

    def f_prime(self, x):
        return poly_eval(poly_derivative(self.coefficients), x)

    def f_second(self, x):
        return poly_eval(poly_derivative(poly_derivative(self.coefficients)), x)

    def check_regular(self, x):
        """
        Raises:
            DomainError: x が分岐点（f(x) = 0）
        """
        value = self.f(x)
        zero = value.is_zero() if isinstance(value, CycloQ) else abs(value) < mp.ldexp(1, -mp.prec // 2)
        if zero:
            raise DomainError(
                f"分岐点での評価です: x={x}",
                error_code="pole",
                guard="f(x) ≠ 0",
            )
        return value

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "f": poly_to_strings(self.coefficients),
            "E": poly_to_strings(self.E),
            "branch_points": [str(e) for e in self.branch_points] if self.branch_points else None,
        }


def burnside_curve() -> HyperellipticCurve:
    """y² = x⁵ − x"""
    return HyperellipticCurve([0, 1, -1, CycloQ(0, 0, 1), CycloQ(0, 0, -1)])


def whittaker_curve() -> HyperellipticCurve:
    """y² = x⁵ + 1"""
    return HyperellipticCurve.from_polynomial([1, 0, 0, 0, 0, 1])


# =============================================================================
# 付随パラメータ
# =============================================================================

def accessory_decomposition(curve: HyperellipticCurve) -> list:
    """
    予想の形を与える付随パラメータ A(x) = E″(x)/(2g+1)

    Returns:
        list: A の係数（昇べき順、次数 ≤ 2g−2）
    """
    e2 = poly_derivative(poly_derivative(curve.E))
    return poly_scale(e2, Fraction(1, 2 * curve.genus + 1))


class WhittakerQ:
    """
    付随パラメータ A(x) をもつ超楕円曲線のフックス型方程式 Ψ_xx = ½Q(x)Ψ

    機能:
    1. 予想の式と付随パラメータ付きの分解式の評価
    2. ½Q の部分分数形 −(3/16){Σ 1/(x−eⱼ)² − (2g·x^{2g−1} + A)/f}
    3. 分母を払った多項式としての一致判定
    4. (x − eⱼ)⁻² の係数の厳密計算

    Args:
        curve: 超楕円曲線
        accessory: A(x) の係数（省略時は E″/(2g+1)）
        prefactor: 括弧の外の係数（−3/8、放物型は −1/2）
    """

    def __init__(self, curve: HyperellipticCurve, accessory: list = None, prefactor=CONJECTURE_PREFACTOR):
        self.curve = curve
        self.accessory = accessory_decomposition(curve) if accessory is None else poly_trim(
            [_normalize(c) for c in accessory]
        )
        self.prefactor = Fraction(prefactor)

    def _prepare(self, x):
        if _is_exact(x) and not self.curve.is_exact:
            return _to_mp(x)
        return x

    def _scalar(self, value, x):
        if _is_exact(x):
            return value
        return mp.mpf(value.numerator) / value.denominator if isinstance(value, Fraction) else value

    def conjecture_form(self, x):
        """−(3/8){f′²/f² − ((2g+2)/(2g+1))f″/f}"""
        x = self._prepare(x)
        g = self.curve.genus
        f = self.curve.check_regular(x)
        ratio = self._scalar(Fraction(2 * g + 2, 2 * g + 1), x)
        d1 = self.curve.f_prime(x)
        d2 = self.curve.f_second(x)
        return self._scalar(self.prefactor, x) * (d1 * d1 / (f * f) - ratio * d2 / f)

    def _correction(self, x):
        """4g(g+1)x^{2g−1} + E″ + A"""
        g = self.curve.genus
        e2 = poly_derivative(poly_derivative(self.curve.E))
        return 4 * g * (g + 1) * x ** (2 * g - 1) + poly_eval(poly_add(e2, self.accessory), x)

    def __call__(self, x):
        """付随パラメータ付きの分解式"""
        x = self._prepare(x)
        f = self.curve.check_regular(x)
        d1 = self.curve.f_prime(x)
        return self._scalar(self.prefactor, x) * (d1 * d1 / (f * f) - self._correction(x) / f)

    def half_Q_partial_fractions(self, x):
        """½Q = (prefactor/2){Σ 1/(x−eⱼ)² − (2g·x^{2g−1} + A)/f}（Σ は (f′² − ff″)/f² で計算）"""
        x = self._prepare(x)
        g = self.curve.genus
        f = self.curve.check_regular(x)
        d1 = self.curve.f_prime(x)
        d2 = self.curve.f_second(x)
        double_poles = (d1 * d1 - f * d2) / (f * f)
        simple = (2 * g * x ** (2 * g - 1) + poly_eval(self.accessory, x)) / f
        return self._scalar(self.prefactor / 2, x) * (double_poles - simple)

    def numerators(self) -> tuple:
        """
        両式の分母 f² を払った分子（係数 prefactor を除く）

        Returns:
            tuple: (予想の式の分子, 分解式の分子)
        """
        g = self.curve.genus
        f = self.curve.coefficients
        d1 = poly_derivative(f)
        d2 = poly_derivative(d1)
        conj = poly_add(poly_mul(d1, d1), poly_scale(poly_mul(f, d2), -Fraction(2 * g + 2, 2 * g + 1)))
        leading = [0] * (2 * g - 1) + [4 * g * (g + 1)]
        e2 = poly_derivative(poly_derivative(self.curve.E))
        correction = poly_add(leading, poly_add(e2, self.accessory))
        decomposition = poly_add(poly_mul(d1, d1), poly_scale(poly_mul(f, correction), -1))
        return conj, decomposition

    def identity_defect(self) -> list:
        """予想の式 − 分解式 の分子（空リストなら恒等的に一致）"""
        conj, decomposition = self.numerators()
        return poly_add(conj, poly_scale(decomposition, -1))

    def double_pole_coefficients(self) -> dict:
        """
        ½Q の (x − eⱼ)⁻² の係数（f = (x − eⱼ)h として (prefactor/2)·(f′(eⱼ)/h(eⱼ))²）

        Raises:
            ValidationError: 分岐点の情報がない、または厳密でない曲線
        """
        if self.curve.branch_points is None or not self.curve.is_exact:
            raise ValidationError("部分分数の係数には厳密な分岐点が必要です")
        d1 = poly_derivative(self.curve.coefficients)
        result = {}
        for e in self.curve.branch_points:
            h, remainder = poly_divide_linear(self.curve.coefficients, e)
            if not remainder.is_zero():
                raise ValidationError(f"分岐点 {e} が f の根ではありません")
            ratio = poly_eval(d1, e) / poly_eval(h, e)
            result[str(e)] = self.prefactor / 2 * ratio * ratio
        return result

    def to_dict(self) -> dict:
        return {
            "curve": self.curve.to_dict(),
            "prefactor": str(self.prefactor),
            "accessory": poly_to_strings(self.accessory),
            "identity_defect": poly_to_strings(self.identity_defect()),
        }


def whittaker_Q(curve: HyperellipticCurve, parabolic: bool = False) -> WhittakerQ:
    """
    予想の Q 関数（A = E″/(2g+1)）

    Args:
        parabolic: True なら係数 −1/2 の放物型（= (4/3)×通常の Q）
    """
    prefactor = PARABOLIC_PREFACTOR if parabolic else CONJECTURE_PREFACTOR
    wq = WhittakerQ(curve, prefactor=prefactor)
    logger.debug(f"ホイッタカー Q: g={curve.genus}, A={poly_to_strings(wq.accessory)}")
    return wq


def fuchs_half_Q(curve: HyperellipticCurve, x, accessory: list = ()):
    """A(x) を直接与えたフックス型方程式の右辺 ½Q（A = 0 が既定）"""
    return WhittakerQ(curve, accessory=list(accessory)).half_Q_partial_fractions(x)


def conjecture_ratio(x):
    """Q_ホイッタカー(x)/Q_バーンサイド(x)（y² = x⁵ − x で 3/4）"""
    value = whittaker_Q(burnside_curve()).conjecture_form(x)
    return value / schwarz_Q(x)


def _fraction_sqrt(value: Fraction):
    """完全平方の有理数の平方根（そうでなければ None）"""
    if value < 0:
        return None
    num, den = isqrt(value.numerator), isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


def local_exponents(coefficient: Fraction) -> tuple:
    """
    Ψ″ = c(x−x0)⁻²Ψ の指数 ρ(ρ−1) = c の2根

    Raises:
        ValidationError: 根が有理数でない
    """
    root = _fraction_sqrt(1 + 4 * Fraction(coefficient))
    if root is None:
        raise ValidationError(f"指数が有理数になりません: c={coefficient}")
    return (1 - root) / 2, (1 + root) / 2
