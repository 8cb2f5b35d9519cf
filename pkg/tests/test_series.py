"""
厳密な級数エンジンのテスト
"""
import json
from fractions import Fraction

import pytest
from mpmath import mp

from numeric.cyclo import SQRT2, CycloQ
from series.charts import (
    CHARTS,
    PARABOLIC,
    SingularityClass,
    classify_singularity,
    get_chart,
    meromorphic_derivative_series,
    poles_formula,
    schwarzian_series,
)
from series.export import export_series, series_to_record
from series.laurent import LaurentSeries, Prefactor
from series.products import eta_product_series, series_revert, theta_and_divisor_series
from series.recurrence import curve_identity_defect, solve_schwarz_series, y_series_from_x
from utils.error_handler import DomainError, ValidationError


def geometric(order: int) -> LaurentSeries:
    """1/(1 − q)"""
    return LaurentSeries({n: Fraction(1) for n in range(order)}, order)


# =============================================================================
# LaurentSeries
# =============================================================================

def test_inverse_of_geometric():
    one_minus_q = LaurentSeries({0: Fraction(1), 1: Fraction(-1)}, 20)
    assert one_minus_q.inverse() == geometric(20)
    assert (geometric(20) * one_minus_q).terms == {0: 1}


def test_zero_terms_dropped():
    S = LaurentSeries({0: Fraction(0), 2: Fraction(3)}, 5)
    assert S.lead_exp == 2
    assert S.lead_coeff == 3


def test_sqrt_of_square():
    S = LaurentSeries({2: Fraction(1), 3: Fraction(3)}, 12)
    assert (S * S).sqrt() == S
    assert (S * S).sqrt(branch=-1) == -S


def test_sqrt_odd_lead_rejected():
    with pytest.raises(ValidationError):
        LaurentSeries({1: Fraction(1)}, 5).sqrt()


def test_revert_catalan():
    S = LaurentSeries({1: Fraction(1), 2: Fraction(1)}, 8)
    R = S.revert()
    assert R.coeffs() == [1, -1, 2, -5, 14, -42, 132]


def test_compose_geometric():
    inner = LaurentSeries({1: Fraction(2)}, 10)
    composed = geometric(10).compose(inner)
    assert composed.coeffs()[:6] == [1, 2, 4, 8, 16, 32]


def test_derivative_and_integral():
    S = LaurentSeries({-2: Fraction(1), 0: Fraction(5), 3: Fraction(4)}, 6)
    assert S.derivative().terms == {-3: -2, 2: 12}
    assert S.q_derivative().terms == {-2: -2, 3: 12}
    with pytest.raises(ValidationError):
        LaurentSeries({-1: Fraction(1)}, 3).integral()


def test_cyclo_coefficients():
    S = LaurentSeries({0: CycloQ(1), 1: SQRT2}, 6)
    assert S.ring == "CycloQ"
    assert (S * S).coefficient(2) == 2


def test_evaluate_with_tail(precision):
    value, tail = geometric(60).evaluate(mp.mpf("0.1"))
    assert abs(value - mp.mpf(10) / 9) < mp.mpf(10) ** -35
    assert tail < mp.mpf(10) ** -55
    with pytest.raises(DomainError):
        geometric(10).evaluate(mp.mpf("0.9"), guard=0.5)


def test_coefficient_beyond_order():
    with pytest.raises(ValidationError):
        geometric(5).coefficient(5)


def test_prefactor_phase():
    prefactor = Prefactor(2, 1)
    assert not prefactor.is_exact
    assert prefactor.square() == 4 * CycloQ(0, Fraction(1, 2), 0, Fraction(1, 2))
    assert Prefactor(1, 4).as_cyclo() == CycloQ(0, 0, 1)
    assert Prefactor.principal_sqrt(CycloQ(4)) == Prefactor(2)


def test_prefactor_survives_arithmetic():
    S = LaurentSeries({0: Fraction(1), 1: Fraction(1)}, 6, Prefactor(2))
    assert S.scale(3).prefactor == Prefactor(2)
    assert S.shift(2).prefactor == Prefactor(2)
    assert S.derivative().prefactor == Prefactor(2)
    assert S.integral().prefactor == Prefactor(2)
    assert (S * S).prefactor == Prefactor(4)
    assert (S ** 3).prefactor == Prefactor(8)
    assert S.inverse().prefactor == Prefactor(Fraction(1, 2))
    assert (S * S.inverse()).terms == {0: 1}
    assert (S * S.inverse()).prefactor is None


def test_prefactor_addition_and_equality():
    S = LaurentSeries({0: Fraction(1), 1: Fraction(1)}, 4, Prefactor(2))
    plain = LaurentSeries({0: Fraction(2), 1: Fraction(2)}, 4)
    assert S == plain
    total = S + LaurentSeries({0: Fraction(1)}, 4)
    assert total.prefactor is None
    assert total == LaurentSeries({0: Fraction(3), 1: Fraction(2)}, 4)
    assert (S + S).prefactor == Prefactor(2)
    with pytest.raises(ValidationError):
        LaurentSeries({0: Fraction(1)}, 4, Prefactor(1, 1)) + plain
    with pytest.raises(ValidationError):
        LaurentSeries({1: Fraction(1)}, 5, Prefactor(2)).revert()


def test_prefactored_cusp_series_arithmetic(precision):
    X = solve_schwarz_series("pole", order=8)
    Y = y_series_from_x(X)
    assert (Y * Y - (X ** 5 - X)).terms == {}

    q = mp.mpf("0.05")
    y_value = Y.evaluate(q)[0]
    square = (Y * Y).evaluate(q)[0]
    assert abs(square - y_value ** 2) < mp.mpf("1e-25") * abs(square)
    slope = Y.derivative().evaluate(q)[0]
    numeric = mp.diff(lambda t: Y.evaluate(t)[0], q)
    assert abs(slope - numeric) < mp.mpf("1e-20") * abs(slope)


# =============================================================================
# シュワルツ微分の級数
# =============================================================================

def test_mobius_schwarzian_series():
    X = LaurentSeries({n: Fraction(1) for n in range(1, 16)}, 16)  # q/(1−q)
    assert schwarzian_series(X).terms == {}


def test_poles_formula_values():
    coefficients = poles_formula(2, 1, 3, 5)
    assert coefficients == {4: Fraction(-3, 8), 5: Fraction(9, 4), 6: Fraction(-135, 16)}


def test_poles_formula_matches_series():
    X = LaurentSeries({-2: Fraction(1), -1: Fraction(3), 0: Fraction(5)}, 20)
    M = meromorphic_derivative_series(X)
    for exponent, expected in poles_formula(2, 1, 3, 5).items():
        assert M.coefficient(exponent) == expected


@pytest.mark.parametrize("mu, expected", [
    (Fraction(-1, 2), SingularityClass(Fraction(-1, 2), PARABOLIC)),
    (Fraction(-3, 8), SingularityClass(Fraction(-3, 8), 2)),
    (Fraction(0), SingularityClass(Fraction(0), 1)),
    (Fraction(-4, 9), SingularityClass(Fraction(-4, 9), 3)),
])
def test_classify_singularity(mu, expected):
    assert classify_singularity(mu) == expected


@pytest.mark.parametrize("mu", [Fraction(-1, 4), Fraction(-1)])
def test_classify_singularity_rejects(mu):
    with pytest.raises(ValidationError):
        classify_singularity(mu)


# =============================================================================
# カスプ・チャートの級数解
# =============================================================================

def _schwarz_defect(X: LaurentSeries) -> LaurentSeries:
    """[X,q] − 1/(2q²X_q²) − Q(X)（どのチャートでも0）"""
    full = X.with_prefactor(None).scale(X.prefactor.as_cyclo())
    d1 = full.derivative()
    chart_term = (d1 * d1).shift(2).scale(2).inverse()
    x4 = full ** 4
    q_of_x = -(x4 * x4 + x4 * 14 + 1) / ((full ** 5 - full) ** 2).scale(2)
    return meromorphic_derivative_series(full) - chart_term - q_of_x


@pytest.mark.parametrize("chart", sorted(CHARTS))
def test_cusp_series_solves_schwarz_equation(chart):
    X = solve_schwarz_series(chart, order=6)
    assert _schwarz_defect(X).terms == {}


@pytest.mark.parametrize("chart", sorted(CHARTS))
def test_curve_identity_in_chart(chart):
    X = solve_schwarz_series(chart, order=8)
    Y = y_series_from_x(X)
    assert curve_identity_defect(X, Y).terms == {}


def test_pole_chart_shape():
    X = solve_schwarz_series("pole", order=6)
    assert X.lead_exp == -2
    assert X.step == 8
    assert X.prefactor == Prefactor(Fraction(1, 2))
    assert X.coeffs()[0] == 1
    assert X.ring == "Q"


def test_branch_chart_fixed_coefficient():
    X = solve_schwarz_series("half", order=4)
    assert X.coefficient(0) == 1
    assert X.coefficient(2) == 4


def test_irrational_fourth_power_rejected():
    with pytest.raises(ValidationError):
        solve_schwarz_series("pole", ansatz=(-2, 1 + SQRT2, 8, {}), order=4)


def test_unknown_chart():
    with pytest.raises(ValidationError):
        get_chart("nowhere")


def test_chart_round_trip(precision):
    chart = get_chart("pole")
    tau = mp.mpc(2.01, 0.05)
    assert abs(chart.tau_of_w(chart.mobius(tau)) - tau) < mp.mpf(10) ** -30


# =============================================================================
# η 積・テータ冪・約数和
# =============================================================================

def test_euler_pentagonal():
    eta = eta_product_series("eta", 16)
    assert eta.coeffs() == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 0, -1]


def test_x_branch_product():
    X = eta_product_series("x_branch", 8)
    assert [X.coefficient(n) for n in (0, 2, 4, 6)] == [1, 4, 8, 16]


def test_unknown_product():
    with pytest.raises(ValidationError):
        eta_product_series("nope", 8)


def test_theta_fourth_power_is_sum_of_four_squares():
    # r₄(n) = 8·Σ_{d|n, 4∤d} d
    theta = theta_and_divisor_series("theta3_pow4", 8 * 12)
    for n in range(1, 12):
        expected = 8 * sum(d for d in range(1, n + 1) if n % d == 0 and d % 4)
        assert theta.coefficient(8 * n) == expected


def test_divisor_series():
    sigma = theta_and_divisor_series("sigma1_odd", 20)
    assert [sigma.coefficient(4 * k) for k in range(5)] == [1, 4, 6, 8, 13]
    g2 = theta_and_divisor_series("g2_eisenstein", 40)
    assert [g2.coefficient(8 * k) for k in range(5)] == [Fraction(1, 240), 1, 9, 28, 73]
    with pytest.raises(ValidationError):
        theta_and_divisor_series("theta4", 10)


def test_series_revert_guards():
    with pytest.raises(ValidationError):
        series_revert(geometric(5))
    with pytest.raises(ValidationError):
        series_revert(LaurentSeries({1: Fraction(1)}, 5, Prefactor(2)))


# =============================================================================
# JSON 出力
# =============================================================================

def test_series_record():
    S = LaurentSeries.from_coeffs([1, 2, Fraction(1, 3)], lead_exp=1)
    record = series_to_record(S, "infinity")
    assert record == {
        "chart": "infinity",
        "ring": "Q",
        "lead_exp": 1,
        "step": 1,
        "order": 4,
        "prefactor": None,
        "coeffs": ["1", "2", "1/3"],
    }


def test_export_series_file(tmp_path):
    X = solve_schwarz_series("pole", order=4)
    path = tmp_path / "out" / "pole.json"
    text = export_series(X, "pole", path)
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data == json.loads(text)
    assert data["prefactor"]["text"] == "1/2"
    assert data["step"] == 8
