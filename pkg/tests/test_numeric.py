"""
numeric パッケージのテスト（ℚ(i,√2) の厳密演算と精度設定）
"""
from fractions import Fraction

import pytest
from mpmath import mp

from numeric.cyclo import GAMMA, I, I_SQRT2, K_MINUS, K_PLUS, ONE, SQRT2, SQRT_I, ZERO, CycloQ, cyclo_arith, embed
from numeric.precision import ToleranceConfig, format_value, matching_digits, parse_complex, workprec
from utils.error_handler import ValidationError


# =============================================================================
# CycloQ
# =============================================================================

def test_basis_products():
    assert SQRT2 * SQRT2 == 2
    assert I * I == -1
    assert I_SQRT2 * I_SQRT2 == -2
    assert SQRT2 * I == I_SQRT2


def test_inverse_and_division():
    unit = 1 + SQRT2
    assert unit.inverse() == GAMMA
    assert (3 + I) / (3 + I) == ONE
    x = CycloQ(Fraction(1, 3), -2, 5, Fraction(7, 2))
    assert x * x.inverse() == ONE
    assert 1 / x == x.inverse()


def test_division_by_zero():
    with pytest.raises(ValidationError):
        ONE / ZERO


def test_negative_power():
    assert GAMMA ** -2 == (1 + SQRT2) ** 2
    assert SQRT_I ** 8 == ONE
    assert SQRT_I ** 2 == I


def test_k_plus_minus_are_roots():
    # k² − k − 1/4 = 0
    for k in (K_PLUS, K_MINUS):
        assert k * k - k - Fraction(1, 4) == ZERO
    assert K_PLUS + K_MINUS == ONE


def test_conjugations():
    x = CycloQ(1, 2, 3, 4)
    assert x.conjugate() == CycloQ(1, 2, -3, -4)
    assert x.galois_sqrt2() == CycloQ(1, -2, 3, -4)
    assert (x * x.conjugate()).imag == ZERO


def test_sqrt_table():
    assert CycloQ(3, 2).sqrt() == 1 + SQRT2
    assert CycloQ(-1).sqrt() == I
    assert I.sqrt() == SQRT_I
    assert CycloQ(Fraction(9, 4)).sqrt() == CycloQ(Fraction(3, 2))
    assert CycloQ(-8).sqrt() == 2 * I_SQRT2


def test_sqrt_outside_field():
    with pytest.raises(ValidationError):
        CycloQ(5).sqrt()


def test_predicates_and_text():
    assert CycloQ(2).is_rational()
    assert not SQRT2.is_rational()
    assert (1 + SQRT2).is_integral()
    assert not K_PLUS.is_integral()
    assert str(1 + SQRT2) == "1+√2"
    assert str(ZERO) == "0"
    assert str(-I) == "-i"
    assert K_PLUS.to_json() == ["1/2", "1/2", "0", "0"]


def test_immutable():
    with pytest.raises(AttributeError):
        ONE._c = (0, 0, 0, 0)


def test_float_rejected():
    with pytest.raises(ValidationError):
        CycloQ(0.5)


def test_cyclo_arith():
    assert cyclo_arith(SQRT2, SQRT2, "mul") == 2
    assert cyclo_arith(ONE, I, "sub") == CycloQ(1, 0, -1)
    with pytest.raises(ValidationError):
        cyclo_arith(ONE, ONE, "pow")


def test_embed(precision):
    value = embed(SQRT_I, 128)
    assert abs(value - mp.exp(mp.j * mp.pi / 4)) < mp.mpf(2) ** -120
    with pytest.raises(ValidationError):
        embed(ONE, 32)


# =============================================================================
# 精度設定
# =============================================================================

def test_tolerance_default():
    tol = ToleranceConfig(precision_bits=200)
    assert tol.residual_tol == mp.ldexp(1, -100)
    assert ToleranceConfig(128, residual_tol=1e-20).residual_tol == mp.mpf(1e-20)


@pytest.mark.parametrize("bits, residual", [(32, None), (128, 0), (128, -1e-5)])
def test_tolerance_invalid(bits, residual):
    with pytest.raises(ValidationError):
        ToleranceConfig(bits, residual)


def test_workprec_restores():
    saved = mp.prec
    with workprec(300):
        assert mp.prec == 300
    assert mp.prec == saved
    with pytest.raises(ValidationError):
        with workprec(16):
            pass


@pytest.mark.parametrize("text, expected", [
    ("2i", mp.mpc(0, 2)),
    ("1/2+i", mp.mpc(0.5, 1)),
    ("i", mp.mpc(0, 1)),
])
def test_parse_complex_simple(precision, text, expected):
    assert parse_complex(text) == expected


def test_parse_complex_expressions(precision):
    assert abs(parse_complex("sqrt2*i") - mp.sqrt(2) * mp.j) < mp.eps * 4
    rho = parse_complex("exp(2*pi*i/3)")
    assert abs(rho ** 3 - 1) < mp.eps * 16


@pytest.mark.parametrize("text", ["", "__import__('os')", "foo*i", "1+;"])
def test_parse_complex_rejects(text):
    with pytest.raises(ValidationError):
        parse_complex(text)


def test_format_and_digits(precision):
    assert format_value(mp.mpf(1) / 4, 15).startswith("0.25")
    assert format_value(mp.mpf(1), 20).endswith("±1e-20")
    assert matching_digits(mp.mpf("1.0000001"), mp.mpf(1)) in (6, 7)
