"""
カスプ・チャートと特異点の分類
q = exp((πi/4)·(aτ+b)/(cτ+d)) による局所座標
"""
import logging
from fractions import Fraction
from math import isqrt

from mpmath import mp

from numeric.cyclo import CycloQ, I, SQRT2
from utils.error_handler import ValidationError
from .laurent import LaurentSeries

logger = logging.getLogger(__name__)

PARABOLIC = "PARABOLIC"


class CuspChart:
    """
    放物型点の局所座標 q = exp(κ·(aτ+b)/(cτ+d))、κ = πi/4

    Args:
        name: チャート名
        a, b, c, d: 整数（ad − bc ≠ 0）
        cusp: τ の極限点（None は i∞）
        approach: 極限の取り方の説明
        x_limit: x(τ) の極限値（None は ∞）
        ansatz: (lead_exp, lead_coeff, step, fixed) で fixed は {添字: 係数}
    """

    KAPPA_LABEL = "πi/4"

    def __init__(self, name: str, a: int, b: int, c: int, d: int, cusp, approach: str,
                 x_limit: CycloQ = None, ansatz: tuple = None):
        if a * d - b * c == 0:
            raise ValidationError(f"チャート {name}: ad − bc = 0")
        self.name = name
        self.a, self.b, self.c, self.d = a, b, c, d
        self.cusp = cusp
        self.approach = approach
        self.x_limit = x_limit
        self.ansatz = ansatz

    @staticmethod
    def kappa():
        return mp.pi * mp.j / 4

    def mobius(self, tau):
        return (self.a * tau + self.b) / (self.c * tau + self.d)

    def q_of_tau(self, tau):
        return mp.exp(self.kappa() * self.mobius(mp.mpc(tau)))

    def tau_of_q(self, q):
        """q の主枝対数から τ を戻す"""
        return self.tau_of_w(mp.log(mp.mpc(q)) / self.kappa())

    def tau_of_w(self, w):
        """w = (aτ+b)/(cτ+d) の逆変換"""
        return (self.d * w - self.b) / (-self.c * w + self.a)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "q": f"exp(({self.KAPPA_LABEL})·({self.a}τ{self.b:+d})/({self.c}τ{self.d:+d}))",
            "cusp": "i∞" if self.cusp is None else str(self.cusp),
            "approach": self.approach,
            "x_limit": "∞" if self.x_limit is None else str(self.x_limit),
        }


# 2e^{3πi/4} = −√2 + i√2
_ZERO_CHART_LEAD = -SQRT2 + I * SQRT2

CHARTS = {
    "pole": CuspChart("pole", 2, -5, 1, -2, 2, "τ→2+i0", None,
                      (-2, CycloQ(Fraction(1, 2)), 8, {})),
    "zero": CuspChart("zero", 1, -2, 2, 0, 0, "τ→0+i0", CycloQ(0),
                      (2, _ZERO_CHART_LEAD, 8, {})),
    "half": CuspChart("half", 3, -2, 2, -1, Fraction(1, 2), "τ→1/2+i0", CycloQ(1),
                      (0, CycloQ(1), 2, {1: Fraction(4)})),
    "inf": CuspChart("inf", 1, -2, 0, 1, None, "τ→+i∞", CycloQ(-1),
                     (0, CycloQ(-1), 2, {1: Fraction(4)})),
    "one": CuspChart("one", 1, -2, 1, -1, 1, "τ→1+i0", I,
                     (0, I, 2, {1: Fraction(4)})),
    "minus_one": CuspChart("minus_one", 1, -1, 1, 1, -1, "τ→−1+i0", -I,
                           (0, -I, 2, {1: Fraction(4)})),
}

# 分岐点 (α₁=ω, x=1) のアーベル積分用チャート（half チャートの q に e^{−πi/4} を掛けたもの）
ABELIAN_CHART = CuspChart("abelian", 1, -1, 2, -1, Fraction(1, 2), "τ→1/2+i0", CycloQ(1))

# 整数 q 展開（テータ形式・g₂）用の ∞ チャート q = e^{πiτ/4}
INFINITY_CHART = CuspChart("infinity", 1, 0, 0, 1, None, "τ→+i∞")

BRANCH_CHARTS = ("half", "inf", "one", "minus_one")


def get_chart(name: str) -> CuspChart:
    if name not in CHARTS:
        raise ValidationError(f"未知のチャート: {name}（{', '.join(CHARTS)}）")
    return CHARTS[name]


class SingularityClass:
    """
    Q の (X−e)⁻² 係数 μ と局所指数 n（n²(2μ+1) = 1）
    """

    def __init__(self, mu: Fraction, n):
        self.mu = Fraction(mu)
        self.n = n

    @property
    def is_parabolic(self) -> bool:
        return self.n == PARABOLIC

    def __eq__(self, other):
        return isinstance(other, SingularityClass) and (self.mu, self.n) == (other.mu, other.n)

    def __repr__(self):
        return f"SingularityClass(mu={self.mu}, n={'±' + str(self.n) if not self.is_parabolic else self.n})"


def classify_singularity(mu) -> SingularityClass:
    """
    μ から局所の型を判定

    Returns:
        SingularityClass: μ = −1/2 なら PARABOLIC、それ以外は n > 0（±n を表す）

    Raises:
        ValidationError: n が整数にならない
    """
    mu = Fraction(mu)
    if mu == Fraction(-1, 2):
        return SingularityClass(mu, PARABOLIC)
    denominator = 2 * mu + 1
    if denominator <= 0:
        raise ValidationError(f"μ={mu}: n² = 1/(2μ+1) が正になりません")
    n_squared = 1 / denominator
    if n_squared.denominator != 1 or isqrt(n_squared.numerator) ** 2 != n_squared.numerator:
        raise ValidationError(f"μ={mu}: n² = {n_squared} は整数の平方ではありません")
    return SingularityClass(mu, isqrt(n_squared.numerator))


def schwarzian_series(X: LaurentSeries) -> LaurentSeries:
    """{X, q} = X‴/X′ − (3/2)(X″/X′)²"""
    d1 = X.derivative()
    d2 = d1.derivative()
    d3 = d2.derivative()
    ratio = d2 / d1
    return d3 / d1 - ratio * ratio * Fraction(3, 2)


def meromorphic_derivative_series(X: LaurentSeries) -> LaurentSeries:
    """[X, q] = {X, q}/X_q²"""
    d1 = X.derivative()
    return schwarzian_series(X) / (d1 * d1)


def poles_formula(n: int, A, B, C) -> dict:
    """
    X = q^{−n}(A + Bq + Cq²) に対する [X,q]·q^{−2n} の先頭3係数（閉じた式）

    Returns:
        dict: {2n: …, 2n+1: …, 2n+2: …}（q の指数 → 係数）
    """
    A, B, C = Fraction(A), Fraction(B), Fraction(C)
    base = 1 / A ** 2
    return {
        2 * n: base * Fraction(1 - n * n, 2 * n * n),
        2 * n + 1: base * Fraction(n * n - 1, n * n) * B / A,
        2 * n + 2: base * (2 * n * (n ** 3 - n - 6) * A * C - 3 * (n ** 4 - n * n - 2 * n + 2) * B * B)
        / (2 * n ** 4 * A * A),
    }
