"""
形式ローラン級数（厳密係数）
係数環は ℚ（Fraction）または ℚ(i,√2)（CycloQ）
"""
import logging
from fractions import Fraction
from math import gcd

from mpmath import mp

from numeric.cyclo import CycloQ
from utils.error_handler import DomainError, ValidationError

logger = logging.getLogger(__name__)

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _is_zero(c) -> bool:
    if isinstance(c, CycloQ):
        return c.is_zero()
    return c == 0


def _to_mp(c):
    if isinstance(c, CycloQ):
        return c.to_mpc()
    return mp.mpf(c.numerator) / c.denominator


class Prefactor:
    """
    級数の前因子 c·e^{πik/8}（c ∈ ℚ(i,√2)）

    奇数の k は ℚ(i,√2) の外にあるので位相タグとして保持し、
    2乗は常に体の元として厳密に計算できる。
    """

    def __init__(self, coeff=1, phase16: int = 0):
        self.coeff = CycloQ.coerce(coeff)
        self.phase16 = phase16 % 16

    @property
    def is_exact(self) -> bool:
        return self.phase16 % 2 == 0

    def as_cyclo(self) -> CycloQ:
        """位相が ℚ(i,√2) に入る場合の値"""
        if not self.is_exact:
            raise ValidationError(f"e^(πi{self.phase16}/8) は ℚ(i,√2) の外です")
        return self.coeff * _ZETA8 ** (self.phase16 // 2)

    def square(self) -> CycloQ:
        return self.coeff ** 2 * _ZETA8 ** self.phase16

    def __neg__(self):
        return Prefactor(-self.coeff, self.phase16)

    def inverse(self) -> "Prefactor":
        return Prefactor(self.coeff.inverse(), -self.phase16)

    def __mul__(self, other):
        if isinstance(other, Prefactor):
            return Prefactor(self.coeff * other.coeff, self.phase16 + other.phase16)
        return Prefactor(self.coeff * other, self.phase16)

    def __eq__(self, other):
        if not isinstance(other, Prefactor):
            return NotImplemented
        if self.is_exact and other.is_exact:
            return self.as_cyclo() == other.as_cyclo()
        return self.phase16 == other.phase16 and self.coeff == other.coeff

    def __hash__(self):
        return hash((self.coeff, self.phase16))

    def to_mpc(self):
        return self.coeff.to_mpc() * mp.expjpi(mp.mpf(self.phase16) / 8)

    def __str__(self):
        if self.phase16 == 0:
            return str(self.coeff)
        k = self.phase16 if self.phase16 <= 8 else self.phase16 - 16
        return f"({self.coeff})·e^({k}πi/8)"

    @classmethod
    def principal_sqrt(cls, value: CycloQ) -> "Prefactor":
        """
        value の主枝平方根を c·e^{πik/8} の形で返す

        Raises:
            ValidationError: どの位相でも体内に平方根が見つからない
        """
        value = CycloQ.coerce(value)
        with mp.workprec(64):
            principal = mp.sqrt(value.to_mpc())
        for k in (0, -1, 1, -2, 2, -3, 3, -4, 4, -5, 5, -6, 6, -7, 7, 8):
            try:
                root = (value * _ZETA8 ** (-k % 8)).sqrt() if k % 8 else value.sqrt()
            except ValidationError:
                continue
            candidate = cls(root, k)
            with mp.workprec(64):
                if abs(candidate.to_mpc() + principal) < abs(candidate.to_mpc() - principal):
                    candidate = -candidate
            return candidate
        raise ValidationError(f"平方根を表現できません: {value}")


_ZETA8 = CycloQ(0, Fraction(1, 2), 0, Fraction(1, 2))  # e^{πi/4} = √i
_UNIT = Prefactor()


def _combine(first: Prefactor, second: Prefactor):
    """前因子の積（None は 1）"""
    if first is None:
        return second
    if second is None:
        return first
    product = first * second
    return None if product == _UNIT else product


def _same_prefactor(first: Prefactor, second: Prefactor) -> bool:
    return (first or _UNIT) == (second or _UNIT)


class LaurentSeries:
    """
    打ち切り形式ローラン級数 Σ c_e q^e（e < order の係数が確定）

    機能:
    1. 加減乗除・整数冪・平方根（厳密）
    2. 微分・積分・q d/dq
    3. 合成と逆級数（ラグランジュ反転）
    4. 前因子とステップ（指数の刻み）の記録
    5. 数値評価（末尾項による誤差見積り）
    """

    def __init__(self, terms: dict, order: int, prefactor: Prefactor = None, step: int = None):
        self.order = int(order)
        self.terms = {int(e): c for e, c in terms.items() if e < self.order and not _is_zero(c)}
        self.prefactor = prefactor
        self._step = step

    # =========================================================================
    # 生成
    # =========================================================================

    @classmethod
    def from_coeffs(cls, coeffs, lead_exp: int = 0, step: int = 1, order: int = None, prefactor=None):
        """lead_exp から step 刻みの係数列で生成"""
        coeffs = [c if isinstance(c, (Fraction, CycloQ)) else Fraction(c) for c in coeffs]
        if order is None:
            order = lead_exp + step * len(coeffs)
        terms = {lead_exp + step * k: c for k, c in enumerate(coeffs)}
        return cls(terms, order, prefactor, step)

    @classmethod
    def monomial(cls, coeff=1, exponent: int = 1, order: int = None):
        coeff = coeff if isinstance(coeff, (Fraction, CycloQ)) else Fraction(coeff)
        return cls({exponent: coeff}, order if order is not None else exponent + 1)

    @classmethod
    def constant(cls, value=1, order: int = 1):
        return cls.monomial(value, 0, order)

    # =========================================================================
    # 属性
    # =========================================================================

    @property
    def lead_exp(self) -> int:
        if not self.terms:
            return self.order
        return min(self.terms)

    @property
    def lead_coeff(self):
        if not self.terms:
            return _ZERO
        return self.terms[self.lead_exp]

    @property
    def step(self) -> int:
        """非零項の指数差の最大公約数"""
        lead = self.lead_exp
        g = 0
        for e in self.terms:
            g = gcd(g, e - lead)
        if g == 0:
            return self._step or 1
        return g

    @property
    def ring(self) -> str:
        if any(isinstance(c, CycloQ) and not c.is_rational() for c in self.terms.values()):
            return "CycloQ"
        return "Q"

    @property
    def precision(self) -> int:
        """先頭項からの相対精度"""
        return self.order - self.lead_exp

    def coefficient(self, exponent: int):
        if exponent >= self.order:
            raise ValidationError(f"q^{exponent} は打ち切り次数 {self.order} を超えています")
        return self.terms.get(exponent, _ZERO)

    def coeffs(self) -> list:
        """lead_exp から step 刻みの係数列"""
        lead, step = self.lead_exp, self.step
        count = (self.order - lead + step - 1) // step
        return [self.terms.get(lead + step * k, _ZERO) for k in range(count)]

    def is_integral(self) -> bool:
        for c in self.terms.values():
            if isinstance(c, CycloQ):
                if not c.is_integral():
                    return False
            elif c.denominator != 1:
                return False
        return True

    def truncate(self, order: int) -> "LaurentSeries":
        return LaurentSeries(self.terms, min(order, self.order), self.prefactor, self._step)

    def with_prefactor(self, prefactor: Prefactor) -> "LaurentSeries":
        return LaurentSeries(self.terms, self.order, prefactor, self._step)

    def materialize(self) -> "LaurentSeries":
        """
        前因子を係数に掛けて外す

        Raises:
            ValidationError: 前因子の位相が ℚ(i,√2) の外
        """
        if self.prefactor is None:
            return self
        c = self.prefactor.as_cyclo()
        return LaurentSeries({e: CycloQ.coerce(v) * c for e, v in self.terms.items()}, self.order, None, self._step)

    def _aligned(self, other: "LaurentSeries") -> tuple:
        """前因子をそろえた (self, other, 共通の前因子)"""
        if _same_prefactor(self.prefactor, other.prefactor):
            return self, other, self.prefactor
        return self.materialize(), other.materialize(), None

    # =========================================================================
    # 演算
    # =========================================================================

    def _coerce(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, (int, Fraction, CycloQ)):
            value = other if not isinstance(other, int) else Fraction(other)
            return LaurentSeries({0: value}, self.order if self.order > 0 else 1)
        raise ValidationError(f"級数に変換できません: {other!r}")

    def __add__(self, other):
        """前因子が異なる場合は係数に戻してから足す"""
        mine, theirs, prefactor = self._aligned(self._coerce(other))
        order = min(mine.order, theirs.order)
        terms = dict(mine.terms)
        for e, c in theirs.terms.items():
            terms[e] = terms.get(e, _ZERO) + c
        return LaurentSeries(terms, order, prefactor)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries({e: -c for e, c in self.terms.items()}, self.order, self.prefactor, self._step)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, factor) -> "LaurentSeries":
        factor = factor if not isinstance(factor, int) else Fraction(factor)
        return LaurentSeries({e: c * factor for e, c in self.terms.items()}, self.order, self.prefactor, self._step)

    def shift(self, m: int) -> "LaurentSeries":
        """q^m 倍"""
        return LaurentSeries({e + m: c for e, c in self.terms.items()}, self.order + m, self.prefactor, self._step)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycloQ)):
            return self.scale(other)
        other = self._coerce(other)
        order = min(self.order + other.lead_exp, other.order + self.lead_exp)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                if e < order:
                    terms[e] = terms.get(e, _ZERO) + c1 * c2
        return LaurentSeries(terms, order, _combine(self.prefactor, other.prefactor))

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        """
        1/S（先頭係数が可逆であること）

        Raises:
            ValidationError: 零級数
        """
        if not self.terms:
            raise ValidationError("零級数の逆数は定義されません")
        lead, c0 = self.lead_exp, self.lead_coeff
        precision = self.precision
        inv0 = _ONE / c0 if not isinstance(c0, CycloQ) else c0.inverse()
        # 1/(c0 q^lead (1 + u)) の係数を相対指数で順に決める
        result = {0: inv0}
        for n in range(1, precision):
            acc = _ZERO
            for k in range(1, n + 1):
                a = self.terms.get(lead + k)
                if a is None:
                    continue
                r = result.get(n - k)
                if r is not None:
                    acc = acc + a * r
            if not _is_zero(acc):
                result[n] = -acc * inv0
        prefactor = self.prefactor.inverse() if self.prefactor is not None else None
        return LaurentSeries({e - lead: c for e, c in result.items()}, precision - lead, prefactor)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, CycloQ):
            return self.scale(other.inverse())
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentSeries({0: _ONE}, self.precision if self.terms else 1)
        base = self
        first = True
        while n:
            if n & 1:
                result = base if first else result * base
                first = False
            n >>= 1
            if n:
                base = base * base
        return result

    def sqrt(self, branch: int = 1) -> "LaurentSeries":
        """
        √S（先頭指数が偶数、先頭係数が体内に平方根を持つこと）

        Args:
            branch: ±1（先頭係数の主枝平方根に掛ける符号）
        """
        if self.prefactor is not None:
            return self.materialize().sqrt(branch)
        lead = self.lead_exp
        if lead % 2:
            raise ValidationError(f"先頭指数が奇数です: q^{lead}")
        c0 = self.lead_coeff
        root0 = c0.sqrt() if isinstance(c0, CycloQ) else CycloQ.coerce(c0).sqrt()
        if root0.is_rational() and not isinstance(c0, CycloQ):
            root0 = root0.coords[0]
        root0 = root0 * branch
        unit = (self.shift(-lead)) / c0
        g = {0: _ONE}
        precision = self.precision
        for n in range(1, precision):
            acc = unit.terms.get(n, _ZERO)
            for k in range(1, n):
                a, b = g.get(k), g.get(n - k)
                if a is not None and b is not None:
                    acc = acc - a * b
            if not _is_zero(acc):
                g[n] = acc / 2
        half = LaurentSeries(g, precision)
        return half.scale(root0).shift(lead // 2)

    # =========================================================================
    # 微積分
    # =========================================================================

    def derivative(self) -> "LaurentSeries":
        """d/dq"""
        return LaurentSeries({e - 1: c * e for e, c in self.terms.items() if e}, self.order - 1, self.prefactor)

    def q_derivative(self) -> "LaurentSeries":
        """q d/dq"""
        return LaurentSeries({e: c * e for e, c in self.terms.items() if e}, self.order, self.prefactor, self._step)

    def integral(self) -> "LaurentSeries":
        """
        ∫ dq（積分定数0）

        Raises:
            ValidationError: q^{-1} の項がある
        """
        if -1 in self.terms:
            raise ValidationError("q⁻¹ の項は積分できません（対数項）")
        return LaurentSeries({e + 1: c / (e + 1) for e, c in self.terms.items()}, self.order + 1, self.prefactor)

    # =========================================================================
    # 合成・反転
    # =========================================================================

    def compose(self, inner: "LaurentSeries") -> "LaurentSeries":
        """
        S(T(q))（T の先頭指数 ≥ 1）
        """
        inner = inner.materialize()
        v = inner.lead_exp
        if v < 1:
            raise ValidationError("内側の級数は正の先頭指数が必要です")
        order = min(self.order * v, self.lead_exp * v + inner.precision)
        result = LaurentSeries({}, order)
        if not self.terms:
            return result.with_prefactor(self.prefactor)
        power = inner ** self.lead_exp if self.lead_exp else LaurentSeries({0: _ONE}, order)
        power = power.truncate(order)
        inner_t = inner.truncate(order)
        for e in range(self.lead_exp, self.order):
            c = self.terms.get(e)
            if c is not None:
                result = result + power.scale(c).truncate(order)
            if power.lead_exp >= order:
                break
            power = (power * inner_t).truncate(order)
        return result.truncate(order).with_prefactor(self.prefactor)

    def revert(self) -> "LaurentSeries":
        """
        逆級数 R（S(R(q)) = q）をラグランジュ反転で計算

        [q^n]R = (1/n)[w^{n−1}](w/S(w))^n

        Raises:
            ValidationError: 先頭が c·q（c ≠ 0）でない、または前因子付き
        """
        if self.prefactor is not None:
            raise ValidationError("前因子付きの級数は反転できません（materialize で係数に戻してください）")
        if self.lead_exp != 1:
            raise ValidationError(f"逆級数には先頭指数1が必要です: q^{self.lead_exp}")
        n_max = self.order
        phi = self.shift(-1).inverse().truncate(n_max - 1)
        result = {}
        power = LaurentSeries({0: _ONE}, n_max - 1)
        for n in range(1, n_max):
            power = (power * phi).truncate(n_max - 1)
            c = power.terms.get(n - 1)
            if c is not None:
                result[n] = c / n
        return LaurentSeries(result, n_max)

    # =========================================================================
    # 比較・数値評価
    # =========================================================================

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        try:
            left, right, _ = self._aligned(other)
        except ValidationError:
            return False
        order = min(self.order, other.order)
        mine = {e: c for e, c in left.terms.items() if e < order}
        theirs = {e: c for e, c in right.terms.items() if e < order}
        if mine.keys() != theirs.keys():
            return False
        return all(CycloQ.coerce(mine[e]) == CycloQ.coerce(theirs[e]) for e in mine)

    def __hash__(self):
        return hash((self.order, tuple(sorted(self.terms))))

    def evaluate(self, q, guard: float = None):
        """
        部分和と末尾項による誤差見積り

        Returns:
            tuple: (値, 誤差見積り)

        Raises:
            DomainError: |q| がガードを超える
        """
        q = mp.mpc(q)
        if guard is not None and abs(q) >= guard:
            raise DomainError(
                f"|q|={mp.nstr(abs(q), 6)} は収束ガードを超えています",
                error_code="series_radius",
                guard=f"|q| < {guard}",
            )
        total = mp.mpc(0)
        last = mp.mpf(0)
        for e in sorted(self.terms):
            term = _to_mp(self.terms[e]) * q ** e
            total += term
            last = abs(term)
        if self.prefactor is not None:
            scale = self.prefactor.to_mpc()
            total *= scale
            last *= abs(scale)
        tail = last * abs(q) ** self.step / max(mp.mpf(1) - abs(q) ** self.step, mp.eps)
        return total, tail

    def __repr__(self):
        shown = ", ".join(f"{c}q^{e}" for e, c in sorted(self.terms.items())[:6])
        return f"LaurentSeries({shown}, … + O(q^{self.order}))"
