"""
楕円関数・モジュラー関数のテスト
"""
import pytest
from mpmath import mp

from elliptic.integrals import complete_elliptic_K, elliptic_K_agm, half_periods_from_invariants, wp_inverse
from elliptic.modular import (
    check_tau,
    dedekind_eta,
    dedekind_eta_product,
    klein_j,
    log_eta_derivative_residual,
    unit_lattice,
    verify_diff_system,
)
from elliptic.weierstrass import (
    HalfPeriods,
    eisenstein_row_sum,
    lattice_params,
    reduce_to_cell,
    weierstrass_p,
    wp_family,
    wp_ode_residual,
)
from utils.error_handler import DomainError



def generic_tau():
    return mp.mpc(0.2, 1.1)


def test_klein_j_normalization(precision, tol):
    assert abs(klein_j(mp.j) - 1) < tol()
    assert abs(klein_j(mp.sqrt(2) * mp.j) - mp.mpf(125) / 27) < tol()


def test_klein_j_modular_invariance(precision, tol):
    tau = generic_tau()
    assert abs(klein_j(tau + 1) - klein_j(tau)) < tol() * abs(klein_j(tau))
    assert abs(klein_j(-1 / tau) - klein_j(tau)) < tol() * abs(klein_j(tau))


def test_wp_ode_and_legendre(precision, tol):
    lp = unit_lattice(generic_tau())
    assert wp_ode_residual(mp.mpc(0.3, 0.2), lp) < tol()
    assert lp.legendre_residual() < tol()


def test_wp_matches_row_sums(precision, tol):
    hp = HalfPeriods(1, mp.j)
    z = mp.mpc(0.3, 0.2)
    assert abs(weierstrass_p(z, hp) - eisenstein_row_sum(z, hp)) < tol()


def test_wp_is_periodic(precision, tol):
    lp = lattice_params(HalfPeriods(1, generic_tau()))
    z = mp.mpc(0.3, 0.2)
    shifted = z + 2 * lp.omega - 4 * lp.omega_prime
    assert abs(weierstrass_p(shifted, lp) - weierstrass_p(z, lp)) < tol() * abs(weierstrass_p(z, lp))


def test_sigma_zeta_consistency(precision, tol):
    lp = lattice_params(HalfPeriods(1, generic_tau()))
    z = mp.mpc(0.4, 0.3)
    _, zeta, _, _ = wp_family(z, lp)
    sigma = wp_family(z, lp)[0]
    sigma_derivative = mp.diff(lambda t: wp_family(t, lp)[0], z)
    assert abs(sigma_derivative / sigma - zeta) < mp.mpf(10) ** -25


def test_lattice_point_guard(precision):
    with pytest.raises(DomainError):
        weierstrass_p(2, HalfPeriods(1, mp.j))


def test_reduce_to_cell(precision):
    lp = lattice_params(HalfPeriods(1, mp.j))
    base = mp.mpc(0.3, 0.2)
    z0, m, n = reduce_to_cell(base + 4 - 2 * mp.j, lp)
    assert (m, n) == (2, -1)
    assert abs(z0 - base) < mp.mpf(10) ** -30


def test_degenerate_half_periods():
    with pytest.raises(DomainError):
        HalfPeriods(1, -mp.j)
    with pytest.raises(DomainError):
        check_tau(mp.mpc(0.5, 0))


def test_dedekind_eta_product(precision, tol):
    tau = generic_tau()
    assert abs(dedekind_eta(tau) - dedekind_eta_product(tau, 80)) < tol()
    # η(i) = Γ(1/4) / (2π^{3/4})
    assert abs(dedekind_eta(mp.j) - mp.gamma(mp.mpf(1) / 4) / (2 * mp.pi ** (mp.mpf(3) / 4))) < tol()


@pytest.mark.slow
def test_diff_system(precision):
    residuals = verify_diff_system(generic_tau())
    assert set(residuals) == {"g2", "g3", "eta"}
    assert all(r < mp.mpf(10) ** -20 for r in residuals.values())


@pytest.mark.slow
def test_log_eta_derivative(precision):
    assert log_eta_derivative_residual(generic_tau()) < mp.mpf(10) ** -20


def test_complete_elliptic_K(precision, tol):
    m = mp.mpc(0.3, 0.1)
    assert abs(complete_elliptic_K(m) - elliptic_K_agm(m)) < tol()
    assert abs(complete_elliptic_K(0) - mp.pi / 2) < tol()
    with pytest.raises(DomainError):
        complete_elliptic_K(2)


def test_half_periods_from_invariants(precision, tol):
    lp = unit_lattice(mp.j)
    recovered = lattice_params(half_periods_from_invariants(lp.g2, lp.g3))
    assert abs(recovered.g2 - lp.g2) < tol() * abs(lp.g2)
    assert abs(recovered.g3 - lp.g3) < tol() * max(1, abs(lp.g2))


def test_wp_inverse(precision, tol):
    lp = unit_lattice(generic_tau())
    z = mp.mpc(0.35, 0.25)
    v = weierstrass_p(z, lp)
    assert abs(wp_inverse(v, lp, z) - z) < tol()


def test_wp_inverse_at_half_period(precision, tol):
    lp = unit_lattice(generic_tau())
    assert abs(wp_inverse(lp.e, lp, mp.mpc(0.9, 0.1)) - lp.omega) < tol()
