"""
ホイッタカーの Q・超幾何型への帰着・変換方程式のテスト
"""
from fractions import Fraction

import pytest
from mpmath import mp

from burnside.schwarz import schwarz_Q
from numeric.cyclo import I, CycloQ
from utils.error_handler import ConvergenceError, DomainError, ValidationError
from whittaker.conjecture import (
    HyperellipticCurve,
    WhittakerQ,
    accessory_decomposition,
    burnside_curve,
    conjecture_ratio,
    local_exponents,
    whittaker_Q,
    whittaker_curve,
)
from whittaker.conversion import (
    BURNSIDE_TO_WHITTAKER,
    ETA_FOURTH,
    conversion_ode_residual,
    conversion_ode_series,
    eta_integral_series,
    eta_power_ode_check,
    eta_quadrature_check,
)
from whittaker.hypergeometric import (
    HypergeometricParams,
    J_INVERSION,
    gauss_2f1,
    hypergeometric_reduce,
    j_inversion_check,
    psi_tilde_residual,
    reduce_curve,
    x4_recovery_check,
)
from whittaker.substitution import functoriality_residual, reduction_residual


# =============================================================================
# 超楕円曲線と予想の Q
# =============================================================================

def test_burnside_curve_polynomial():
    curve = burnside_curve()
    assert curve.genus == 2
    assert curve.coefficients == [0, -1, 0, 0, 0, 1]
    assert curve.is_exact


def test_curve_validation():
    with pytest.raises(ValidationError):
        HyperellipticCurve([0, 1])
    with pytest.raises(ValidationError):
        HyperellipticCurve([0, 1, 1])
    with pytest.raises(ValidationError):
        HyperellipticCurve.from_polynomial([1, 0, 0, 0, 1])
    with pytest.raises(ValidationError):
        HyperellipticCurve.from_polynomial([1, 0, 0, 2])


def test_regular_point_guard():
    with pytest.raises(DomainError):
        whittaker_Q(burnside_curve())(CycloQ(1))


def test_conjecture_ratio_is_three_quarters():
    assert conjecture_ratio(Fraction(2)) == Fraction(3, 4)
    assert conjecture_ratio(Fraction(1, 3) + I) == Fraction(3, 4)


@pytest.mark.parametrize("curve", [burnside_curve(), whittaker_curve(),
                                   HyperellipticCurve.from_polynomial([2, -1, 0, 3, 1, 1])])
def test_identity_defect_vanishes(curve):
    assert whittaker_Q(curve).identity_defect() == []


def test_accessory_parameter():
    curve = HyperellipticCurve.from_polynomial([0, 0, 0, 0, 1, 1])
    assert accessory_decomposition(curve) == [0, 0, Fraction(12, 5)]
    assert accessory_decomposition(burnside_curve()) == []


def test_decomposition_matches_conjecture_form():
    wq = whittaker_Q(burnside_curve())
    x = Fraction(3, 2) + 2 * I
    assert wq(x) == wq.conjecture_form(x)
    assert wq.half_Q_partial_fractions(x) * 2 == wq(x)


def test_wrong_accessory_gives_defect():
    wq = WhittakerQ(burnside_curve(), accessory=[1])
    assert wq.identity_defect() != []


def test_parabolic_prefactor():
    x = Fraction(2)
    parabolic = whittaker_Q(burnside_curve(), parabolic=True).conjecture_form(x)
    assert parabolic / whittaker_Q(burnside_curve()).conjecture_form(x) == Fraction(4, 3)
    assert parabolic == schwarz_Q(x)


def test_double_pole_coefficients():
    coefficients = whittaker_Q(burnside_curve()).double_pole_coefficients()
    assert set(coefficients) == {"0", "1", "-1", "i", "-i"}
    assert all(c == Fraction(-3, 16) for c in coefficients.values())
    with pytest.raises(ValidationError):
        whittaker_Q(whittaker_curve()).double_pole_coefficients()


def test_local_exponents():
    assert local_exponents(Fraction(-3, 16)) == (Fraction(1, 4), Fraction(3, 4))
    assert local_exponents(Fraction(-1, 4)) == (Fraction(1, 2), Fraction(1, 2))
    with pytest.raises(ValidationError):
        local_exponents(Fraction(1))


def test_numeric_curve(precision, tol):
    curve = HyperellipticCurve([0, 1, -1, mp.j, -mp.j])
    assert not curve.is_exact
    x = mp.mpc(0.4, 0.7)
    assert abs(whittaker_Q(curve)(x) - mp.mpf(3) / 4 * schwarz_Q(x)) < tol()


# =============================================================================
# 超幾何関数と帰着
# =============================================================================

def test_gauss_2f1_matches_mpmath(precision, tol):
    p = HypergeometricParams(Fraction(2, 5), Fraction(1, 5), Fraction(4, 5))
    z = mp.mpc(0.3, 0.2)
    value, tail = gauss_2f1(p, z)
    expected = mp.hyp2f1(mp.mpf(2) / 5, mp.mpf(1) / 5, mp.mpf(4) / 5, z)
    assert abs(value - expected) < tol()
    assert tail < tol()
    assert gauss_2f1(J_INVERSION, 0)[0] == 1


def test_gauss_2f1_disk_guard(precision):
    with pytest.raises(DomainError):
        gauss_2f1(J_INVERSION, 1)


@pytest.mark.parametrize("c", [0, -2])
def test_hypergeometric_params_reject_nonpositive_c(c):
    with pytest.raises(ValidationError):
        HypergeometricParams(1, 1, c)


def test_hypergeometric_exponents():
    assert J_INVERSION.exponents == {
        "0": (0, Fraction(1, 3)),
        "1": (0, Fraction(1, 2)),
        "∞": (Fraction(1, 12), Fraction(1, 12)),
    }


def test_reduce_whittaker_curve():
    reduction = reduce_curve(whittaker_curve())
    assert reduction.coefficient == Fraction(-6, 25)
    assert reduction.exponents == (Fraction(2, 5), Fraction(3, 5))
    assert reduction.triangle_angle == Fraction(2, 5)
    assert reduction.half_Q(Fraction(0)) == Fraction(-18, 25)
    with pytest.raises(DomainError):
        reduction.half_Q(Fraction(1))


def test_reduce_rejects_nonconstant_E():
    with pytest.raises(ValidationError):
        reduce_curve(HyperellipticCurve.from_polynomial([0, 0, 0, 0, 1, 1]))
    with pytest.raises(ValidationError):
        hypergeometric_reduce(0, 1)


def test_j_inversion(precision):
    assert j_inversion_check()["residual"] < mp.mpf(10) ** -20


def test_x4_recovery(precision, tol):
    assert x4_recovery_check(mp.mpc(0.2, 1.1))["distance"] < tol()


@pytest.mark.slow
@pytest.mark.parametrize("index", [1, 2])
def test_psi_tilde_solutions(precision, index):
    assert psi_tilde_residual(Fraction(1, 3), index) < mp.mpf(10) ** -15


@pytest.mark.slow
def test_reduction_residual(precision):
    residual, _, _ = reduction_residual()
    assert residual < mp.mpf(10) ** -15


def test_substitution_functoriality(precision):
    residual = functoriality_residual(
        schwarz_Q,
        lambda t: t * t + 2,
        mp.exp,
        mp.mpc(0.3, 0.2),
    )
    assert residual < mp.mpf(10) ** -20


# =============================================================================
# 変換方程式
# =============================================================================

def test_conversion_series_coefficients():
    series = conversion_ode_series(BURNSIDE_TO_WHITTAKER, 25)
    assert series.exponent == 1
    assert series.mu_of_q.coeffs() == [1, Fraction(-5, 21), Fraction(-78, 833)]
    assert series.q_of_mu.coeffs()[:3] == [1, Fraction(5, 21), Fraction(503, 833)]


@pytest.mark.slow
def test_conversion_series_higher_coefficients():
    series = conversion_ode_series(BURNSIDE_TO_WHITTAKER, 41)
    assert series.mu_of_q.coeffs()[3:5] == [Fraction(4001, 39445), Fraction(168948, 1711913)]
    assert series.q_of_mu.coeffs()[3] == Fraction(4138924, 2011695)


@pytest.mark.slow
@pytest.mark.parametrize("tau", [mp.mpc(0, 1), mp.mpc("0.3", "1.2")])
def test_eta_fourth_power_integral_schwarzian(precision, tau):
    # μ = ∫η̂⁴dτ のとき {μ, τ} = (2/3)·g₂/π²
    result = eta_quadrature_check(tau)
    assert result["residual"] < mp.mpf("1e-15")


@pytest.mark.slow
def test_conversion_series_solves_equation_numerically(precision):
    series = conversion_ode_series(BURNSIDE_TO_WHITTAKER, 41)
    for tau in (mp.mpc(0, 2), mp.mpc("0.5", 2)):
        assert conversion_ode_residual(series, tau)["residual"] < mp.mpf("1e-15")


def test_eta_fourth_power_series():
    series = conversion_ode_series(ETA_FOURTH, 41)
    assert series.exponent == Fraction(4, 3)
    assert series.mu_of_q is None
    assert series.ratio == eta_integral_series(41)


def test_conversion_requires_rational_exponent():
    with pytest.raises(ValidationError):
        conversion_ode_series(Fraction(-1, 8), 17)


def test_conversion_pivot_failure():
    with pytest.raises(ConvergenceError):
        conversion_ode_series(-24, 17)


@pytest.mark.parametrize("n", [-2, 0, 1, 4])
def test_eta_power_ode(precision, n):
    assert eta_power_ode_check(n, mp.mpc(0.2, 1.1)) < mp.mpf(10) ** -20

