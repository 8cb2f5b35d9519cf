"""
ヤコビ被覆・分岐の表・トーラス上の方程式のテスト
"""
from fractions import Fraction

import pytest
from mpmath import mp

from numeric.cyclo import I, K_MINUS, K_PLUS, ONE, CycloQ
from torus.abelian import alpha_of_tau, series_checks, series_vs_numeric
from torus.cover import (
    BURNSIDE_COVER_PARAMS,
    WP_ALEPH,
    JacobiCover,
    burnside_torus,
    cover_wp_of_x,
    omega_by_modular_inversion,
    invariants_from_roots,
    jacobi_k,
    lambda_of_wp,
    lambda_of_x,
    rescaling_residual,
    wp_via_lambda,
    weierstrass_roots,
    x_roots_of_wp,
)
from torus.fuchsian import (
    BURNSIDE,
    ELLIPTIC_ORDER_2,
    LAMBDA_ELLIPTIC,
    LOCAL_COEFFICIENT,
    PUNCTURE,
    VARIANTS,
    FuchsianTorusEq,
    lambda_fuchsian_Q,
    lambda_local_coefficients,
    renormalized_constants,
    x_of_lambda,
)
from torus.ramification import (
    ALPHA_TO_X,
    X_TO_ALPHA,
    aleph_coefficient_closed_form,
    aleph_series_coefficient,
    aleph_value_check,
    discriminant_polynomial,
    discriminant_values,
    puiseux_at_branch,
    puiseux_closed_form,
    ramification_profile,
)
from torus.xi import circle_path, holo_period_check, refine_path, xi_solution_check
from utils.error_handler import DomainError, ValidationError


# =============================================================================
# ヤコビの被覆（厳密）
# =============================================================================

def test_jacobi_k_for_burnside_parameters():
    assert jacobi_k(*BURNSIDE_COVER_PARAMS) == (K_PLUS, K_MINUS)


def test_jacobi_k_rejects_degenerate_parameters():
    with pytest.raises(ValidationError):
        jacobi_k(ONE, I)


def test_weierstrass_roots_and_invariants():
    e, e_prime, e_dprime = weierstrass_roots(K_PLUS)
    assert e == CycloQ(0, Fraction(1, 3))
    assert e_prime == CycloQ(Fraction(-1, 2), Fraction(-1, 6))
    assert e_dprime == CycloQ(Fraction(1, 2), Fraction(-1, 6))
    assert (e + e_prime + e_dprime).is_zero()

    g2, g3 = invariants_from_roots((e, e_prime, e_dprime))
    assert g2 == CycloQ(Fraction(5, 3))
    assert g3 == CycloQ(0, Fraction(-7, 27))


def test_cover_agrees_with_lambda_route():
    for x in (CycloQ(2), CycloQ(0, 1, 1), CycloQ(Fraction(1, 3), 0, -1)):
        assert cover_wp_of_x(x) == wp_via_lambda(x)


def test_cover_poles_raise():
    with pytest.raises(DomainError):
        cover_wp_of_x(I)
    with pytest.raises(DomainError):
        lambda_of_x(CycloQ(-1))
    with pytest.raises(DomainError):
        lambda_of_x(mp.mpc(-1, 1e-40))


def test_critical_values_are_roots_of_discriminant():
    values = discriminant_values()
    assert values["i√i"] == WP_ALEPH
    assert values["-i√i"] == CycloQ(Fraction(1, 2), Fraction(-1, 6))
    for value in values.values():
        assert discriminant_polynomial(value).is_zero()


def test_x_roots_of_wp(precision):
    wp = mp.mpc("0.4", "0.3")
    r1, r2 = x_roots_of_wp(wp)
    assert abs(r1 * r2 + mp.j) < mp.mpf("1e-35")
    for root in (r1, r2):
        assert abs(cover_wp_of_x(root) - wp) < mp.mpf("1e-30")


def test_x_roots_reject_e_prime(precision):
    e_prime = weierstrass_roots(K_PLUS)[1].to_mpc()
    with pytest.raises(DomainError):
        x_roots_of_wp(e_prime)


def test_lambda_of_wp_inverts_cover(precision):
    x = CycloQ(2, 0, 1)
    assert abs(lambda_of_wp(wp_via_lambda(x).to_mpc()) - lambda_of_x(x).to_mpc()) < mp.mpf("1e-35")


@pytest.mark.parametrize("sign", [1, -1])
def test_holomorphic_differential_reduction(precision, sign):
    cover = JacobiCover(*BURNSIDE_COVER_PARAMS)
    points = [mp.mpc("0.3", "0.1"), mp.mpc(2, -1), mp.mpc("-0.7", "2.2")]
    assert cover.reduction_residual(points, sign) < mp.mpf("1e-30")


def test_rescaled_invariants(precision):
    assert rescaling_residual(mp.mpc("0.3", "0.2")) < mp.mpf("1e-20")


# =============================================================================
# 分岐の表
# =============================================================================

@pytest.mark.parametrize("direction, ramification_sum", [(ALPHA_TO_X, 2), (X_TO_ALPHA, 6)])
def test_riemann_hurwitz_gives_genus_two(direction, ramification_sum):
    profile = ramification_profile(direction)
    assert profile.ramification_sum == ramification_sum
    assert profile.genus_cover == 2
    assert profile.to_dict()["genus_cover"] == 2


def test_unknown_direction_raises():
    with pytest.raises(ValidationError):
        ramification_profile("sideways")


@pytest.mark.slow
def test_aleph_lies_over_branch_value(precision):
    torus = burnside_torus()
    assert abs(torus.lp.g2 - mp.mpf(5) / 3) < mp.mpf("1e-25")
    assert abs(torus.lp.g3 + 7 * mp.sqrt(2) / 27) < mp.mpf("1e-25")
    assert mp.re(torus.aleph) == 0
    assert 0 < mp.im(torus.aleph) < mp.im(torus.omega_prime)

    residuals = aleph_value_check(torus)
    assert residuals["wp"] < mp.mpf("1e-20")
    assert residuals["cubic"] < mp.mpf("1e-20")

    assert abs(aleph_series_coefficient(1, torus) - aleph_coefficient_closed_form()) < mp.mpf("1e-25")
    minus = aleph_series_coefficient(-1, torus)
    assert abs(minus ** 2 + aleph_coefficient_closed_form() ** 2) < mp.mpf("1e-25")


@pytest.mark.slow
def test_puiseux_coefficients_match_closed_form(precision):
    computed, closed = puiseux_at_branch(), puiseux_closed_form()
    assert abs(computed["sqrt"] ** 2 + mp.j * (1 + mp.sqrt(2))) < mp.mpf("1e-25")
    assert abs(computed["sqrt"] ** 2 - closed["sqrt"] ** 2) < mp.mpf("1e-25")
    product = computed["sqrt"] * computed["sqrt3"]
    assert abs(product - closed["sqrt"] * closed["sqrt3"]) < mp.mpf("1e-25")
    assert abs(product - (mp.mpf(1) / 6 + mp.j * (1 + mp.sqrt(2)) / 4)) < mp.mpf("1e-25")


# =============================================================================
# λ 平面の方程式
# =============================================================================

def test_lambda_local_coefficients():
    puncture, elliptic = LOCAL_COEFFICIENT[PUNCTURE], LOCAL_COEFFICIENT[ELLIPTIC_ORDER_2]
    assert lambda_local_coefficients() == {
        "0": puncture,
        "1": puncture,
        "-2+2√2": elliptic,
        "-2-2√2": elliptic,
        "∞": puncture,
    }


@pytest.mark.parametrize("point", [CycloQ(0), CycloQ(1), LAMBDA_ELLIPTIC[0], LAMBDA_ELLIPTIC[1]])
def test_lambda_singular_points_raise(point):
    with pytest.raises(DomainError):
        lambda_fuchsian_Q(point)


def test_x_of_lambda_inverts_lambda(precision):
    lam = mp.mpc("0.6", "-1.3")
    for x in x_of_lambda(lam):
        assert abs(lambda_of_x(x) - lam) < mp.mpf("1e-30")


def test_unknown_variant_raises():
    with pytest.raises(ValidationError):
        FuchsianTorusEq("KLEIN")


def test_alpha_sheet_must_be_sign():
    with pytest.raises(ValidationError):
        alpha_of_tau(mp.mpc(0, 1), sheet=0)


# =============================================================================
# 経路
# =============================================================================

def test_refine_path_subdivides_by_guard_distance(precision):
    refined = refine_path([2, 3])
    assert len(refined) == 5
    assert refined[0] == 2
    assert abs(refined[-1] - 3) < mp.mpf("1e-35")


def test_refine_path_rejects_branch_point(precision):
    with pytest.raises(DomainError):
        refine_path([mp.mpc("-0.5"), mp.mpc("0.5")])


def test_circle_path_is_closed(precision):
    path = circle_path(0.5, 0.6, nodes=8)
    assert len(path) == 9
    assert abs(path[0] - path[-1]) < mp.mpf("1e-35")
    assert all(abs(abs(p - mp.mpf(0.5)) - mp.mpf(0.6)) < mp.mpf("1e-30") for p in path)


# =============================================================================
# トーラスの定数とトーラス上の方程式
# =============================================================================

def _cell_points(torus):
    return [
        torus.omega / 3 + torus.omega_prime / 2,
        torus.omega / 2 + torus.omega_prime / 3,
        mp.mpf("1.3") * torus.omega + mp.mpf("0.7") * torus.omega_prime,
    ]


@pytest.mark.slow
def test_omega_digits_and_modular_inversion(precision):
    omega = burnside_torus().omega
    assert abs(omega - mp.mpf("2.118156723947863188505038347005")) < mp.mpf(10) ** -30
    assert abs(omega_by_modular_inversion() - omega) < mp.mpf("1e-25") * omega


@pytest.mark.slow
@pytest.mark.parametrize("variant", VARIANTS)
def test_torus_equation_forms_agree(precision, variant):
    equation = FuchsianTorusEq(variant)
    for alpha in _cell_points(burnside_torus()):
        assert equation.forms_residual(alpha) < mp.mpf("1e-15")
        assert equation.construction_residual(alpha) < mp.mpf("1e-15")
        assert equation.ellipticity_residual(alpha) < mp.mpf("1e-15")
        assert equation.constant_term_residual(alpha) < mp.mpf("1e-15")


@pytest.mark.slow
@pytest.mark.parametrize("variant", VARIANTS)
def test_torus_equation_local_table(precision, variant):
    table = FuchsianTorusEq(variant).local_coefficient_table()
    kinds = {PUNCTURE, ELLIPTIC_ORDER_2} if variant == BURNSIDE else {ELLIPTIC_ORDER_2}
    assert {entry["type"] for entry in table} == kinds
    for entry in table:
        expected = entry["expected_quadratic"]
        assert abs(entry["quadratic"] - mp.mpf(expected.numerator) / expected.denominator) < mp.mpf("1e-12")
        assert abs(entry["residue"] - entry["expected_residue"]) < mp.mpf("1e-12")


@pytest.mark.slow
def test_renormalized_zeta_at_aleph(precision):
    constants = renormalized_constants()
    assert abs(constants["zeta_aleph"] - mp.mpf("3.83102282421")) < mp.mpf(10) ** -11


@pytest.mark.slow
def test_xi_solves_torus_equation(precision):
    torus = burnside_torus()
    for alpha in _cell_points(torus)[:2]:
        results = xi_solution_check(alpha)
        assert [r["coefficients"] for r in results] == [(1, 0), (0, 1)]
        assert all(r["residual"] < mp.mpf("1e-10") for r in results)


@pytest.mark.slow
def test_holomorphic_period_is_lattice_point(precision):
    result = holo_period_check()
    assert result["coordinates"] != (0, 0)
    assert result["integer_residual"] < mp.mpf("1e-8")
    assert result["alpha_residual"] < mp.mpf("1e-8")


@pytest.mark.slow
def test_abelian_differential_series_checks(precision):
    checks = series_checks()
    assert checks == {name: True for name in checks}
    assert {"dalpha_table", "alpha_table", "integral_coefficients"} <= set(checks)


@pytest.mark.slow
@pytest.mark.parametrize("tau", [mp.mpc("0.5", "0.1"), mp.mpc("0.52", "0.12")])
def test_abelian_series_matches_numeric(precision, tau):
    result = series_vs_numeric(tau)
    assert result["residual"] < mp.mpf("1e-15")
