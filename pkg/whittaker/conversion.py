"""
大域座標の変換方程式

    [τ, μ] = c·g₂(τ)/π²   （[τ, μ] = {τ, μ}/τ_μ² = −{μ, τ}）

を q = e^{πiτ/4} の形式級数で解く。q_τ = (πi/4)q から

    {μ, q} = (16/q²)(1/32 + 20c·G(q)),  G = g₂/(20π⁴) = 1/240 + Σσ₃(k)q^{8k}

となり、μ は ψ″ + ½{μ,q}ψ = 0 の2つのフロベニウス解の比 μ = q^n·u(q) で与えられる
（n² = −8c/3、u = 1 + O(q⁸)）。
"""
import logging
from fractions import Fraction

from mpmath import mp

import config
from burnside.schwarz import default_step, schwarzian, tau_derivatives
from elliptic.modular import check_tau, dedekind_eta, eta_of_tau, g2_of_tau
from series.export import series_to_record
from series.laurent import LaurentSeries
from series.products import theta_and_divisor_series
from utils.error_handler import ConvergenceError, ValidationError
from .conjecture import local_exponents

logger = logging.getLogger(__name__)

CHART_STEP = 8
BURNSIDE_TO_WHITTAKER = Fraction(-3, 8)
ETA_FOURTH = Fraction(-2, 3)


class ConversionSeries:
    """
    変換方程式の級数解 μ = q^n·u(q)

    Attributes:
        c_ode: 方程式の係数 c
        exponent: n（有理数）
        ratio: u(q) = ψ₊/ψ₋ の冪級数（q⁸ 刻み）
        mu_of_q: n = 1 のとき q·u(q)、それ以外は None
        q_of_mu: mu_of_q の逆級数
    """

    def __init__(self, c_ode: Fraction, exponent: Fraction, ratio: LaurentSeries):
        self.c_ode = Fraction(c_ode)
        self.exponent = exponent
        self.ratio = ratio
        self.mu_of_q = None
        self.q_of_mu = None
        if exponent == 1:
            self.mu_of_q = ratio.shift(1).truncate(ratio.order)
            self.q_of_mu = self.mu_of_q.revert()

    def evaluate(self, tau):
        """
        μ(τ) = e^{nπiτ/4}·u(e^{πiτ/4})

        Returns:
            tuple: (値, 末尾の見積り)
        """
        tau = check_tau(tau)
        q = mp.exp(mp.pi * mp.j * tau / 4)
        u, tail = self.ratio.evaluate(q, config.SERIES_EVAL_GUARD)
        scale = mp.exp(mp.mpf(self.exponent.numerator) / self.exponent.denominator * mp.pi * mp.j * tau / 4)
        return scale * u, abs(scale) * tail

    def to_dict(self) -> dict:
        return {
            "c_ode": str(self.c_ode),
            "exponent": str(self.exponent),
            "chart": "q = e^{πiτ/4}",
            "ratio": series_to_record(self.ratio, "infinity"),
            "mu_of_q": series_to_record(self.mu_of_q, "infinity") if self.mu_of_q else None,
            "q_of_mu": series_to_record(self.q_of_mu, "infinity") if self.q_of_mu else None,
        }


def _schwarzian_coefficients(c_ode: Fraction, order: int) -> tuple:
    """
    {μ, q} = r₀/q² + Σ r_k q^{8k−2}

    Returns:
        tuple: (r₀, {k: r_k})
    """
    g2 = theta_and_divisor_series("g2_eisenstein", order)
    r0 = 16 * (Fraction(1, 32) + 20 * c_ode * g2.coefficient(0))
    rest = {k: 320 * c_ode * g2.coefficient(CHART_STEP * k) for k in range(1, (order + CHART_STEP - 1) // CHART_STEP)}
    return r0, rest


def _frobenius(rho: Fraction, r0: Fraction, rest: dict, order: int) -> LaurentSeries:
    """
    ψ = q^ρ·Σ b_k q^{8k} の Σ 部分

    b_k·P(ρ + 8k) = −½Σ_{j≥1} r_j·b_{k−j},  P(s) = s(s−1) + r₀/2

    Raises:
        ConvergenceError: P(ρ + 8k) = 0（対数項が必要）
    """
    b = {0: Fraction(1)}
    for k in range(1, (order + CHART_STEP - 1) // CHART_STEP):
        s = rho + CHART_STEP * k
        pivot = s * (s - 1) + r0 / 2
        if pivot == 0:
            raise ConvergenceError(
                f"漸化式のピボットが0です: ρ={rho}, k={k}",
                error_code="pivot",
                guard="n ∉ 8ℤ",
            )
        b[k] = -sum(rest[j] * b[k - j] for j in range(1, k + 1)) / (2 * pivot)
    return LaurentSeries({CHART_STEP * k: v for k, v in b.items() if v}, order)


def conversion_ode_series(c_ode=BURNSIDE_TO_WHITTAKER, order: int = None) -> ConversionSeries:
    """
    [τ, μ] = c·g₂/π² の級数解

    Args:
        c_ode: 係数 c（n² = −8c/3 が有理数の平方であること）
        order: 打ち切り次数（q の指数、省略時は config.SERIES_DEFAULTS["order"]）

    Raises:
        ValidationError: n が正の有理数にならない
        ConvergenceError: 漸化式のピボットが0
    """
    c_ode = Fraction(c_ode)
    order = order or config.SERIES_DEFAULTS["order"]
    r0, rest = _schwarzian_coefficients(c_ode, order)
    try:
        rho_minus, rho_plus = local_exponents(-r0 / 2)
    except ValidationError:
        raise ValidationError(f"c = {c_ode} では q の指数 n = √(−8c/3) が有理数になりません")
    exponent = rho_plus - rho_minus
    if exponent <= 0:
        raise ValidationError(f"c = {c_ode} では n > 0 の解がありません")
    psi_plus = _frobenius(rho_plus, r0, rest, order)
    psi_minus = _frobenius(rho_minus, r0, rest, order)
    ratio = (psi_plus / psi_minus).truncate(order)
    logger.info(f"変換方程式 c={c_ode}: n={exponent}, {order} 次まで展開")
    return ConversionSeries(c_ode, exponent, ratio)


# =============================================================================
# η̂⁴ の積分との照合（c = −2/3）
# =============================================================================

def eta_integral_series(order: int) -> LaurentSeries:
    """
    μ = ∫η̂⁴dτ ∝ q^{4/3}·u(q) の u（u = 1 + O(q⁸)）

    η̂⁴ = q^{4/3}∏(1 − q^{8k})⁴ と dτ = dq/((πi/4)q) から u の係数は p_m·4/(3m + 4)。
    """
    product = LaurentSeries({0: Fraction(1)}, order)
    for k in range(1, (order + CHART_STEP - 1) // CHART_STEP):
        product = (product * LaurentSeries({0: Fraction(1), CHART_STEP * k: Fraction(-1)}, order)).truncate(order)
    product = (product ** 4).truncate(order)
    terms = {m: c * Fraction(4, 3 * m + 4) for m, c in product.terms.items()}
    return LaurentSeries(terms, order)


def eta_quadrature_check(tau, h=None) -> dict:
    """
    μ(τ) = ∫η̂⁴dτ を数値積分で作り、{μ,τ} と −c·g₂/π²（c = −2/3）を比較

    Returns:
        dict: {"schwarzian", "expected", "residual"}
    """
    tau = check_tau(tau)
    base = tau + mp.j

    def mu(t):
        return mp.quad(lambda s: dedekind_eta(s) ** 4, [base, t])

    _, d1, d2, d3 = tau_derivatives(mu, tau, h or default_step())
    value = schwarzian(d1, d2, d3)
    expected = -_mp_fraction(ETA_FOURTH) * g2_of_tau(tau) / mp.pi ** 2
    residual = abs(value - expected) / max(mp.mpf(1), abs(expected))
    logger.debug(f"∫η̂⁴ τ={mp.nstr(tau, 6)}: 残差 {mp.nstr(residual, 5)}")
    return {"schwarzian": value, "expected": expected, "residual": residual}


def _mp_fraction(value: Fraction):
    return mp.mpf(value.numerator) / value.denominator


def conversion_ode_residual(series: ConversionSeries, tau, h=None) -> dict:
    """
    級数から数値評価した μ(τ) が {μ,τ} = −c·g₂(τ)/π² を満たすことの確認

    Returns:
        dict: {"schwarzian", "expected", "residual"}
    """
    tau = check_tau(tau)
    _, d1, d2, d3 = tau_derivatives(lambda t: series.evaluate(t)[0], tau, h)
    value = schwarzian(d1, d2, d3)
    expected = -_mp_fraction(series.c_ode) * g2_of_tau(tau) / mp.pi ** 2
    residual = abs(value - expected) / max(mp.mpf(1), abs(expected))
    return {"schwarzian": value, "expected": expected, "residual": residual}


# =============================================================================
# η̂ⁿ の線形方程式
# =============================================================================

def eta_power_ode_check(n: int, tau, h=None):
    """
    Ψ = η̂ⁿ に対する Ψ_ττ + ((n+2)/(πi))η(τ)Ψ_τ − (n/(6π²))g₂(τ)Ψ の相対残差

    η(τ), g₂(τ) は半周期 (1, τ) の格子の値。
    """
    tau = check_tau(tau)
    value, d1, d2, _ = tau_derivatives(lambda t: dedekind_eta(t) ** n, tau, h)
    eta = eta_of_tau(tau)
    g2 = g2_of_tau(tau)
    terms = [d2, (n + 2) / (mp.pi * mp.j) * eta * d1, -mp.mpf(n) / (6 * mp.pi ** 2) * g2 * value]
    residual = abs(mp.fsum(terms)) / max(mp.mpf(1), *(abs(t) for t in terms))
    logger.debug(f"η̂^{n} の方程式 τ={mp.nstr(tau, 6)}: 残差 {mp.nstr(residual, 5)}")
    return residual
