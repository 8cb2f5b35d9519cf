"""
バーンサイドの一意化関数 x(τ), y(τ) のテスト
"""
from fractions import Fraction

import pytest
from mpmath import mp

from burnside.forms import (
    GAMMA4_ELEMENTS,
    THETA1,
    THETA2,
    ModularForm2,
    theta1_identity_residuals,
    theta1_infinity_series,
    theta1_zero_cusp_series,
)
from burnside.identities import klein_j_relation, verify_four_identities, wp_ratio_residuals
from burnside.inversion import SEED_ATTEMPTS, invert_x, psi_solution_check, seed_candidates
from burnside.schwarz import (
    check_branch_distance,
    default_step,
    fornberg_weights,
    meromorphic_derivative,
    schwarz_Q,
    schwarz_Q_partial_fractions,
    schwarz_residual,
    tau_derivatives,
    y_schwarz_residual,
)
from burnside.state import BurnsideState
from numeric.cyclo import SQRT2
from series.products import numeric_eval
from series.recurrence import solve_schwarz_series, y_series_from_x
from utils.error_handler import DomainError, ValidationError


def generic_tau():
    return mp.mpc(0.2, 1.1)


@pytest.fixture
def state(precision):
    return BurnsideState(generic_tau())


# =============================================================================
# Q(x) と差分係数
# =============================================================================

def test_schwarz_Q_exact_values():
    assert schwarz_Q(Fraction(2)) == Fraction(-(256 + 224 + 1), 2 * 30 ** 2)
    # x = √2: x⁴ = 4, x⁵ − x = 3√2
    assert schwarz_Q(SQRT2) == Fraction(-73, 36)


def test_schwarz_Q_partial_fractions(precision, tol):
    x = mp.mpc(0.7, 0.4)
    assert abs(schwarz_Q(x) - schwarz_Q_partial_fractions(x)) < tol()


def test_fornberg_three_point():
    weights = fornberg_weights([-1, 0, 1], 2)
    assert weights[0] == [0, 1, 0]
    assert weights[1] == [Fraction(-1, 2), 0, Fraction(1, 2)]
    assert weights[2] == [1, -2, 1]


def test_tau_derivatives_of_exp(precision):
    tau = mp.mpc(0.3, 0.2)
    expected = mp.exp(tau)
    for h in (None, mp.ldexp(1, -21)):
        for value in tau_derivatives(mp.exp, tau, h):
            assert abs(value - expected) < mp.mpf(10) ** -25
    assert tau_derivatives(mp.exp, tau) == tau_derivatives(mp.exp, tau, default_step())


def test_mobius_has_zero_schwarzian(precision):
    def mobius(t):
        return (2 * t + 1) / (t + 3)

    assert abs(meromorphic_derivative(mobius, mp.mpc(0.1, 0.7))) < mp.mpf(10) ** -25


def test_exp_schwarzian(precision):
    tau = mp.mpc(0.3, 0.2)
    expected = -mp.mpf(1) / 2 / mp.exp(2 * tau)
    assert abs(meromorphic_derivative(mp.exp, tau) - expected) < mp.mpf(10) ** -25


def test_branch_distance_guard(precision):
    with pytest.raises(DomainError):
        check_branch_distance(mp.mpc(1e-40, 0), radius=mp.mpf(10) ** -10)
    check_branch_distance(mp.mpc(0.5, 0.5), radius=mp.mpf(10) ** -10)


def test_branch_distance_default_radius_scales_with_precision(precision):
    check_branch_distance(mp.mpc(-1) + mp.mpf("1e-6"))
    with pytest.raises(DomainError):
        check_branch_distance(mp.mpc(-1) + mp.mpf("1e-12"))


# =============================================================================
# x(τ), y(τ)
# =============================================================================

def test_curve_identity(state, tol):
    assert state.curve_residual() < tol()


def test_four_identities(state, tol):
    residuals = verify_four_identities(state)
    assert set(residuals) == {"zeta_square", "wp_prime_1", "wp_prime_tau", "quartic"}
    assert all(r < tol() for r in residuals.values())


def test_wp_ratios(state, tol):
    assert all(r < tol() for r in wp_ratio_residuals(state).values())


def test_klein_j_relation(state, tol):
    result = klein_j_relation(state)
    assert result["j_relation"] < tol()
    assert result["quartic_root"] < tol()


def test_schwarz_equation_closed(precision, tol):
    result = schwarz_residual(generic_tau(), method="closed")
    assert result.relative < tol()


@pytest.mark.slow
def test_schwarz_equation_numeric(precision):
    assert schwarz_residual(generic_tau()).relative < mp.mpf(10) ** -20


@pytest.mark.slow
def test_y_schwarz_equation(precision):
    assert y_schwarz_residual(generic_tau()) < mp.mpf(10) ** -20


def test_below_real_axis_rejected(precision):
    with pytest.raises(DomainError):
        BurnsideState(mp.mpc(0.2, -1))


# =============================================================================
# Θ₁, Θ₂
# =============================================================================

@pytest.mark.parametrize("form", [THETA1, THETA2])
@pytest.mark.parametrize("element", GAMMA4_ELEMENTS)
def test_weight_two(precision, tol, form, element):
    assert form.weight_residual(generic_tau(), element) < tol()


def test_theta1_identities(precision, tol):
    residuals = theta1_identity_residuals(generic_tau())
    assert all(r < tol() for r in residuals.values())


def test_unknown_form():
    with pytest.raises(ValidationError):
        ModularForm2("Theta3")


@pytest.mark.slow
@pytest.mark.parametrize("tau", [mp.mpc(0, 3), mp.mpc("0.3", "1.2")])
def test_theta1_infinity_expansion(precision, tau):
    # q⁸ = −e^{2πiτ} のチャートで直接の値と一致
    value, tail = theta1_infinity_series(tau)
    direct = THETA1.value_at(tau)
    assert abs(value - direct) <= max(mp.mpf("1e-25"), 4 * tail) * max(1, abs(direct))


@pytest.mark.slow
@pytest.mark.parametrize("tau", [mp.mpc("0.05", "0.25"), mp.mpc("0.1", "0.4")])
def test_theta1_zero_cusp_expansion(precision, tau):
    value, tail = theta1_zero_cusp_series(tau)
    direct = THETA1.value_at(tau)
    assert abs(value - direct) <= max(mp.mpf("1e-20"), 4 * tail) * max(1, abs(direct))


# =============================================================================
# 逆写像と Ψ
# =============================================================================

@pytest.mark.slow
def test_invert_x(precision, tol):
    tau = generic_tau()
    a = BurnsideState(tau).x
    found = invert_x(a, seed=tau + mp.mpc(0.01, 0.01))
    assert abs(BurnsideState(found).x - a) < tol() * max(1, abs(a))


def test_invert_x_rejects_branch_value(precision):
    with pytest.raises(DomainError):
        invert_x(1)


def test_psi_guard_near_quartic(precision):
    with pytest.raises(DomainError):
        psi_solution_check(mp.root(5, 4))


@pytest.mark.slow
def test_psi_solutions(precision):
    a = BurnsideState(generic_tau()).x
    residuals = psi_solution_check(a, seed=generic_tau())
    assert set(residuals) == {(0, 1), (1, 0)}
    assert all(r < mp.mpf(10) ** -20 for r in residuals.values())


@pytest.mark.slow
def test_psi_solution_without_seed(precision):
    residuals = psi_solution_check(2)
    assert all(r < mp.mpf(10) ** -15 for r in residuals.values())


@pytest.mark.slow
def test_invert_x_without_seed_reaches_cusp_region(precision, tol):
    candidates = seed_candidates(mp.mpc(2))
    assert 0 < len(candidates) <= SEED_ATTEMPTS
    assert [d for d, _ in candidates] == sorted(d for d, _ in candidates)

    tau = invert_x(2)
    assert abs(BurnsideState(tau).x - 2) <= 2 * tol()


@pytest.mark.slow
def test_invert_x_near_cusp_value(precision, tol):
    target = BurnsideState(mp.mpc(0, 5)).x * mp.mpf("1.001")
    assert abs(target + 1) < mp.mpf("1e-2")
    tau = invert_x(target, seed=mp.mpc(0, 5))
    assert mp.im(tau) > 5
    assert abs(BurnsideState(tau).x - target) <= tol()


# =============================================================================
# カスプ級数と数値評価
# =============================================================================

def _near(value, expected, tail):
    return abs(value - expected) <= max(mp.mpf("1e-20") * abs(expected), 4 * tail)


@pytest.mark.slow
@pytest.mark.parametrize("chart, tau, order", [
    ("pole", mp.mpc(2, "0.25"), 12),
    ("inf", mp.mpc(0, 2), 80),
])
def test_state_matches_cusp_series(precision, chart, tau, order):
    X = solve_schwarz_series(chart, order=order)
    Y = y_series_from_x(X)
    state = BurnsideState(tau)

    x_value, x_tail = numeric_eval(X, chart, tau)
    assert _near(state.x, x_value, x_tail)

    # y は ℘ から作る値そのもので、級数 Y の枝とは符号だけ異なりうる
    y_value, y_tail = numeric_eval(Y, chart, tau)
    assert _near(state.y, y_value, y_tail) or _near(state.y, -y_value, y_tail)
    assert abs(state.y ** 2 - (state.x ** 5 - state.x)) <= mp.mpf("1e-25") * max(1, abs(state.y) ** 2)
