"""
ℚ(i, √2) の厳密演算
c0 + c1·√2 + c2·i + c3·i√2 を有理数4つで表現する
"""
import logging
from fractions import Fraction
from math import isqrt

from mpmath import mp

from utils.error_handler import ValidationError

logger = logging.getLogger(__name__)


def _to_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise ValidationError(f"有理数に変換できません: {value!r}")


class CycloQ:
    """
    ℚ(i, √2) の元（不変オブジェクト）

    機能:
    1. 四則演算（体演算、ゼロ除算は ValidationError）
    2. 複素共役・√2 のガロア共役
    3. 表による厳密平方根（√i など）
    4. mpmath 複素数への埋め込み
    """

    __slots__ = ("_c",)

    def __init__(self, c0=0, c1=0, c2=0, c3=0):
        object.__setattr__(self, "_c", tuple(_to_fraction(c) for c in (c0, c1, c2, c3)))

    def __setattr__(self, name, value):
        raise AttributeError("CycloQ は不変です")

    # =========================================================================
    # 生成
    # =========================================================================

    @classmethod
    def coerce(cls, value) -> "CycloQ":
        if isinstance(value, CycloQ):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        raise ValidationError(f"CycloQ に変換できません: {value!r}")

    @property
    def coords(self) -> tuple:
        return self._c

    @property
    def real(self) -> "CycloQ":
        return CycloQ(self._c[0], self._c[1])

    @property
    def imag(self) -> "CycloQ":
        return CycloQ(self._c[2], self._c[3])

    def is_zero(self) -> bool:
        return not any(self._c)

    def is_rational(self) -> bool:
        return not any(self._c[1:])

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._c)

    # =========================================================================
    # 演算
    # =========================================================================

    @staticmethod
    def _r2_mul(p0, p1, q0, q1):
        """ℚ(√2) 上の積"""
        return p0 * q0 + 2 * p1 * q1, p0 * q1 + p1 * q0

    def __add__(self, other):
        try:
            other = CycloQ.coerce(other)
        except ValidationError:
            return NotImplemented
        return CycloQ(*(a + b for a, b in zip(self._c, other._c)))

    __radd__ = __add__

    def __neg__(self):
        return CycloQ(*(-a for a in self._c))

    def __sub__(self, other):
        try:
            other = CycloQ.coerce(other)
        except ValidationError:
            return NotImplemented
        return CycloQ(*(a - b for a, b in zip(self._c, other._c)))

    def __rsub__(self, other):
        return CycloQ.coerce(other) - self

    def __mul__(self, other):
        try:
            other = CycloQ.coerce(other)
        except ValidationError:
            return NotImplemented
        a0, a1, a2, a3 = self._c
        b0, b1, b2, b3 = other._c
        # (A + Bi)(C + Di) = (AC − BD) + (AD + BC)i, A..D ∈ ℚ(√2)
        ac = self._r2_mul(a0, a1, b0, b1)
        bd = self._r2_mul(a2, a3, b2, b3)
        ad = self._r2_mul(a0, a1, b2, b3)
        bc = self._r2_mul(a2, a3, b0, b1)
        return CycloQ(ac[0] - bd[0], ac[1] - bd[1], ad[0] + bc[0], ad[1] + bc[1])

    __rmul__ = __mul__

    def inverse(self) -> "CycloQ":
        if self.is_zero():
            raise ValidationError("CycloQ のゼロ除算")
        a0, a1, a2, a3 = self._c
        # N = A² + B² ∈ ℚ(√2)
        n0, n1 = (x + y for x, y in zip(self._r2_mul(a0, a1, a0, a1), self._r2_mul(a2, a3, a2, a3)))
        norm = n0 * n0 - 2 * n1 * n1
        inv0, inv1 = n0 / norm, -n1 / norm
        return CycloQ(*self._r2_mul(a0, a1, inv0, inv1), *self._r2_mul(-a2, -a3, inv0, inv1))

    def __truediv__(self, other):
        try:
            other = CycloQ.coerce(other)
        except ValidationError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycloQ.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = CycloQ(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "CycloQ":
        """複素共役 i → −i"""
        c0, c1, c2, c3 = self._c
        return CycloQ(c0, c1, -c2, -c3)

    def galois_sqrt2(self) -> "CycloQ":
        """√2 → −√2"""
        c0, c1, c2, c3 = self._c
        return CycloQ(c0, -c1, c2, -c3)

    def sqrt(self) -> "CycloQ":
        """
        体内の平方根を表から探す（主枝に最も近い方を返す）

        Raises:
            ValidationError: ℚ(i, √2) に平方根が無い場合
        """
        for square, root in _SQRT_TABLE:
            ratio = self / square
            if not ratio.is_rational() or ratio._c[0] <= 0:
                continue
            r = ratio._c[0]
            num, den = _isqrt_exact(r.numerator), _isqrt_exact(r.denominator)
            if num is None or den is None:
                continue
            candidate = root * Fraction(num, den)
            with mp.workprec(64):
                principal = mp.sqrt(self.to_mpc())
                if abs(candidate.to_mpc() + principal) < abs(candidate.to_mpc() - principal):
                    candidate = -candidate
            return candidate
        raise ValidationError(f"ℚ(i,√2) 内に平方根がありません: {self}")

    # =========================================================================
    # 比較・埋め込み
    # =========================================================================

    def __eq__(self, other):
        try:
            other = CycloQ.coerce(other)
        except ValidationError:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    def to_mpc(self):
        """現在の mp.prec で複素数に埋め込む"""
        c0, c1, c2, c3 = (mp.mpf(c.numerator) / c.denominator for c in self._c)
        r2 = mp.sqrt(2)
        return mp.mpc(c0 + c1 * r2, c2 + c3 * r2)

    def __repr__(self):
        return f"CycloQ({', '.join(str(c) for c in self._c)})"

    def __str__(self):
        labels = ("", "√2", "i", "i√2")
        parts = []
        for c, label in zip(self._c, labels):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if not label:
                parts.append(f"{sign}{magnitude}")
            elif magnitude == 1:
                parts.append(f"{sign}{label}")
            else:
                parts.append(f"{sign}{magnitude}{label}")
        text = "".join(parts)
        return (text[1:] if text.startswith("+") else text) or "0"

    def to_json(self) -> list[str]:
        return [str(c) for c in self._c]


def _isqrt_exact(n: int):
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


# =============================================================================
# 定数
# =============================================================================
ZERO = CycloQ(0)
ONE = CycloQ(1)
I = CycloQ(0, 0, 1)
SQRT2 = CycloQ(0, 1)
I_SQRT2 = CycloQ(0, 0, 0, 1)
SQRT_I = CycloQ(0, Fraction(1, 2), 0, Fraction(1, 2))           # (1+i)/√2
SQRT_MINUS_I = CycloQ(0, Fraction(1, 2), 0, Fraction(-1, 2))    # (1−i)/√2
GAMMA = SQRT2 - 1                                               # √2 − 1
K_PLUS = (1 + SQRT2) / 2
K_MINUS = (1 - SQRT2) / 2

# 平方 → 平方根（有理数倍は自動で吸収）
_SQRT_TABLE = (
    (ONE, ONE),
    (-ONE, I),
    (CycloQ(2), SQRT2),
    (CycloQ(-2), I_SQRT2),
    (I, SQRT_I),
    (-I, SQRT_MINUS_I),
    (CycloQ(0, 0, 2), 1 + I),
    (CycloQ(0, 0, -2), 1 - I),
    (CycloQ(3, 2), 1 + SQRT2),
    (CycloQ(3, -2), SQRT2 - 1),
    (CycloQ(0, 0, 3, 2), SQRT_I * (1 + SQRT2)),
    (CycloQ(0, 0, 3, -2), SQRT_I * (SQRT2 - 1)),
)


def cyclo_arith(a: CycloQ, b: CycloQ, op: str) -> CycloQ:
    """
    ℚ(i,√2) 上の四則演算

    Args:
        a, b: オペランド
        op: "add" / "sub" / "mul" / "div"

    Returns:
        CycloQ: 厳密な演算結果
    """
    operations = {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
    }
    if op not in operations:
        raise ValidationError(f"未知の演算: {op}")
    return operations[op]()


def embed(a: CycloQ, precision: int):
    """P ビット精度で複素数へ埋め込む"""
    if precision < 64:
        raise ValidationError(f"精度は64ビット以上が必要です: {precision}")
    with mp.workprec(precision):
        return +a.to_mpc()
