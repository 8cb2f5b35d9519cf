"""
シュワルツ方程式の級数解（厳密な漸化式）

チャート q で x(τ) の方程式 [x,τ] = −½(x⁸+14x⁴+1)/(x⁵−x)² は
D = q d/dq を使って

    f(X)²·(2·D³X·DX − 3·(D²X)²) + P(X)·(DX)⁴ = 0,
    f = X⁵ − X,  P = X⁸ + 14X⁴ + 1

となる。X = c₀ q^{n₀} W(q^s), W = 1 + Σ w_k q^{sk} を代入すると
c₀⁴ が有理数なら W の係数は有理数になり、w_k は係数ごとに
アフィンな1次方程式で決まる（遅延評価・メモ化で O(K²)）。
"""
import logging
from fractions import Fraction

from numeric.cyclo import CycloQ
from utils.error_handler import ConvergenceError, ValidationError
from .charts import CuspChart, get_chart
from .laurent import LaurentSeries, Prefactor

logger = logging.getLogger(__name__)

_ZERO = Fraction(0)

# w_k が方程式に最初に現れる添字のずれの上限
MAX_PIVOT_SHIFT = 8


class _Engine:
    """未知係数 w_k と確定済み添字の管理"""

    def __init__(self, step: int):
        self.step = step
        self.w = [Fraction(1)]
        self.trial = None
        self.final_index = 0
        # 試行値が変わるたびに進め、確定前の係数キャッシュを無効化する
        self.generation = 0

    def set_trial(self, value):
        self.trial = value
        self.generation += 1


class _Node:
    """q^{offset}·Σ a_j q^{s·j} の遅延評価ノード"""

    def __init__(self, engine: _Engine, offset: int):
        self.engine = engine
        self.offset = offset
        self._cache = []
        self._scratch = {}
        self._scratch_generation = -1

    def coeff(self, j: int):
        if j < 0:
            return _ZERO
        engine = self.engine
        while len(self._cache) <= min(j, engine.final_index):
            self._cache.append(self._compute(len(self._cache)))
        if j < len(self._cache):
            return self._cache[j]
        if self._scratch_generation != engine.generation:
            self._scratch = {}
            self._scratch_generation = engine.generation
        if j not in self._scratch:
            self._scratch[j] = self._compute(j)
        return self._scratch[j]

    def _compute(self, j: int):
        raise NotImplementedError

    def __mul__(self, other):
        return _Mul(self, other)


class _Unknown(_Node):
    def _compute(self, j):
        engine = self.engine
        if j < len(engine.w):
            return engine.w[j]
        if engine.trial is not None and j == len(engine.w):
            return engine.trial
        return _ZERO


class _Const(_Node):
    def __init__(self, engine, value):
        super().__init__(engine, 0)
        self.value = Fraction(value)

    def _compute(self, j):
        return self.value if j == 0 else _ZERO


class _Mul(_Node):
    def __init__(self, a: _Node, b: _Node):
        super().__init__(a.engine, a.offset + b.offset)
        self.a, self.b = a, b

    def _compute(self, j):
        a, b = self.a, self.b
        total = _ZERO
        for i in range(j + 1):
            x = a.coeff(i)
            if x:
                y = b.coeff(j - i)
                if y:
                    total += x * y
        return total


class _Lin(_Node):
    """Σ scalar·node（オフセットの差は s の倍数であること）"""

    def __init__(self, engine: _Engine, terms: list):
        offset = min(node.offset for _, node in terms)
        super().__init__(engine, offset)
        self.terms = []
        for scalar, node in terms:
            shift, rem = divmod(node.offset - offset, engine.step)
            if rem:
                raise ValidationError(f"オフセット {node.offset} と {offset} が刻み {engine.step} で揃いません")
            self.terms.append((Fraction(scalar), node, shift))

    def _compute(self, j):
        total = _ZERO
        for scalar, node, shift in self.terms:
            if j >= shift:
                total += scalar * node.coeff(j - shift)
        return total


class _QDerivative(_Node):
    """D = q d/dq"""

    def __init__(self, child: _Node):
        super().__init__(child.engine, child.offset)
        self.child = child

    def _compute(self, j):
        return (self.offset + self.engine.step * j) * self.child.coeff(j)


def _build_equation(engine: _Engine, lead_exp: int, kappa: Fraction) -> _Node:
    """E/c₀⁴ を組み立てる（X̂ = q^{n₀}W, X = c₀X̂, κ = c₀⁴）"""
    x_hat = _Unknown(engine, lead_exp)
    d1 = _QDerivative(x_hat)
    d2 = _QDerivative(d1)
    d3 = _QDerivative(d2)

    x2 = x_hat * x_hat
    x4 = x2 * x2
    x5 = x4 * x_hat
    x8 = x4 * x4
    f_hat = _Lin(engine, [(kappa, x5), (-1, x_hat)])
    p_hat = _Lin(engine, [(kappa * kappa, x8), (14 * kappa, x4), (1, _Const(engine, 1))])

    g = _Lin(engine, [(2, d3 * d1), (-3, d2 * d2)])
    d1_2 = d1 * d1
    return _Lin(engine, [(1, (f_hat * f_hat) * g), (1, p_hat * (d1_2 * d1_2))])


def _rational_fourth_power(lead_coeff: CycloQ) -> Fraction:
    kappa = lead_coeff ** 4
    if not kappa.is_rational():
        raise ValidationError(f"c₀⁴ = {kappa} が有理数ではありません")
    return kappa.coords[0]


def solve_schwarz_series(chart, ansatz: tuple = None, order: int = 200) -> LaurentSeries:
    """
    チャート q での x の級数解

    Args:
        chart: CuspChart またはチャート名
        ansatz: (lead_exp, lead_coeff, step, fixed)。省略時はチャートの既定値
        order: 打ち切り次数（チャートのステップ単位、すなわち W の項数）

    Returns:
        LaurentSeries: 前因子 c₀ と有理係数 W を持つ X

    Raises:
        ConvergenceError: ピボットが0（仮定した展開形が誤り）
    """
    if not isinstance(chart, CuspChart):
        chart = get_chart(chart)
    lead_exp, lead_coeff, step, fixed = ansatz or chart.ansatz
    lead_coeff = CycloQ.coerce(lead_coeff)
    kappa = _rational_fourth_power(lead_coeff)
    count = order

    engine = _Engine(step)
    equation = _build_equation(engine, lead_exp, kappa)
    if equation.coeff(0) != 0:
        raise ConvergenceError(
            f"チャート {chart.name}: 先頭項が方程式を満たしません (E₀={equation.coeff(0)})",
            error_code="pivot",
        )

    pivots = {}
    shift = 0
    for k in range(1, count):
        if k in fixed:
            engine.w.append(Fraction(fixed[k]))
            engine.set_trial(None)
            engine.final_index = k
            continue
        for j in range(k + shift, k + shift + MAX_PIVOT_SHIFT):
            engine.set_trial(_ZERO)
            e0 = equation.coeff(j)
            engine.set_trial(Fraction(1))
            e1 = equation.coeff(j)
            pivot = e1 - e0
            if pivot:
                shift = j - k
                break
            if e0:
                raise ConvergenceError(
                    f"チャート {chart.name}: 添字 {j} で方程式が矛盾します（w_{k} が現れません）",
                    error_code="pivot",
                )
        else:
            raise ConvergenceError(
                f"チャート {chart.name}: w_{k} のピボットが0です",
                error_code="pivot",
            )
        engine.set_trial(None)
        engine.w.append(-e0 / pivot)
        engine.final_index = k
        pivots[k] = pivot

    logger.debug(f"チャート {chart.name}: {count} 項を決定（ピボットのずれ {shift}）")
    terms = {lead_exp + step * k: w for k, w in enumerate(engine.w)}
    series = LaurentSeries(terms, lead_exp + step * order, Prefactor(lead_coeff), step)
    series.pivots = pivots
    return series


def y_series_from_x(X: LaurentSeries, branch: int = 1) -> LaurentSeries:
    """
    Y² = X⁵ − X となる Y（前因子は主枝平方根 × branch）

    Args:
        X: solve_schwarz_series の結果（前因子 c₀ と有理係数）
        branch: ±1

    Raises:
        ValidationError: X⁵ − X の先頭指数が奇数
    """
    c0 = X.prefactor.as_cyclo() if X.prefactor is not None else CycloQ(1)
    kappa = _rational_fourth_power(c0)
    x_hat = X.with_prefactor(None)
    f_hat = x_hat ** 5 * kappa - x_hat
    lead = f_hat.lead_exp
    if lead % 2:
        raise ValidationError(f"X⁵ − X の先頭指数 {lead} が奇数です（分岐点チャート）")
    lead_coeff = f_hat.lead_coeff
    unit = (f_hat / lead_coeff).sqrt()
    prefactor = Prefactor.principal_sqrt(c0 * lead_coeff)
    if branch < 0:
        prefactor = -prefactor
    return LaurentSeries(unit.terms, unit.order, prefactor, unit.step)


def curve_identity_defect(X: LaurentSeries, Y: LaurentSeries) -> LaurentSeries:
    """Y² − (X⁵ − X) を厳密に計算（零級数なら恒等式が成立）"""
    c0 = X.prefactor.as_cyclo() if X.prefactor is not None else CycloQ(1)
    x_hat = X.with_prefactor(None)
    y_square = Y.with_prefactor(None) ** 2
    lhs = y_square * Y.prefactor.square()
    rhs = (x_hat ** 5) * (c0 ** 5) - x_hat * c0
    return lhs - rhs
