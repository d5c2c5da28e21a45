from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coefficients import Coefficient
from coefficients import ONE
from coefficients import PI2
from coefficients import ZERO
from coefficients import c_n
from coefficients import c_r_rho
from coefficients import double_factorial
from coefficients import e_n
from coefficients import f_lr
from coefficients import f_lr_closed
from coefficients import f_lr_sum
from coefficients import gamma_ratio_half
from coefficients import minus_pi2_power
from errors import CoefficientError
from errors import OddPiExponentError

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)
coeffs = st.dictionaries(
    st.integers(min_value=0, max_value=4).map(lambda n: 2 * n),
    fractions,
    max_size=4,
).map(Coefficient)


@given(coeffs, coeffs, coeffs)
def test_addition_is_associative_and_commutative(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a


@given(coeffs, coeffs, coeffs)
def test_multiplication_is_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(coeffs)
def test_identities_and_inverse(a):
    assert a + ZERO == a
    assert a * ONE == a
    assert (a - a).is_zero()
    assert a * ZERO == ZERO


def test_zero_entries_vanish():
    coeff = Coefficient({0: 1, 2: 0})
    assert coeff.pi_exponents() == [0]
    assert Coefficient({2: Fraction(1, 2)}) - Coefficient({2: Fraction(1, 2)}) == ZERO


def test_pi_powers_multiply_by_exponent():
    assert PI2 * PI2 == Coefficient({4: 1})
    assert (ONE + PI2) * (ONE - PI2) == Coefficient({0: 1, 4: -1})


def test_compares_with_plain_rationals():
    assert Coefficient.rational(Fraction(3, 2)) == Fraction(3, 2)
    assert Coefficient.rational(2) == 2
    assert PI2 != 1


@pytest.mark.parametrize("exponent", [1, 3, -2])
def test_odd_or_negative_pi_exponent_is_rejected(exponent):
    with pytest.raises(OddPiExponentError):
        Coefficient({exponent: 1})


@pytest.mark.parametrize(
    "n, expected",
    [(-1, 1), (0, 1), (1, 1), (5, 15), (6, 48)],
)
def test_double_factorial(n, expected):
    assert double_factorial(n) == expected


@pytest.mark.parametrize(
    "n, expected",
    [(1, Fraction(1, 2)), (2, Fraction(-1, 8)), (3, Fraction(1, 16)), (4, Fraction(-5, 128))],
)
def test_c_n(n, expected):
    assert c_n(n) == expected


@pytest.mark.parametrize(
    "n, expected",
    [(0, 1), (1, Fraction(-1, 2)), (2, Fraction(3, 8)), (3, Fraction(-5, 16))],
)
def test_e_n(n, expected):
    assert e_n(n) == expected


@pytest.mark.parametrize(
    "l, r, expected",
    [
        (0, 0, 1),
        (0, 1, Fraction(3, 2)),
        (1, 1, Fraction(-1, 2)),
        (0, 2, Fraction(15, 8)),
        (1, 2, Fraction(-5, 4)),
        (2, 2, Fraction(3, 8)),
    ],
)
def test_f_lr_values(l, r, expected):
    assert f_lr(l, r) == expected


@pytest.mark.parametrize("r", range(11))
def test_f_lr_forms_agree_and_sum_to_one(r):
    assert all(f_lr_sum(l, r) == f_lr_closed(l, r) for l in range(r + 1))
    assert sum(f_lr(l, r) for l in range(r + 1)) == 1


def test_c_r_rho_values():
    assert c_r_rho(0, 0) == ONE
    assert c_r_rho(1, 0) == Coefficient({2: Fraction(1, 2)})
    assert c_r_rho(1, 1) == Coefficient({2: Fraction(-1, 2)})
    assert c_r_rho(2, 2) == Coefficient({4: gamma_ratio_half(2, 2)})
    assert gamma_ratio_half(2, 2) == Fraction(3, 8)


def test_minus_pi2_power():
    assert minus_pi2_power(0) == ONE
    assert minus_pi2_power(1) == Coefficient({2: -1})
    assert minus_pi2_power(2) == Coefficient({4: 1})


@pytest.mark.parametrize(
    "call",
    [
        lambda: c_n(0),
        lambda: e_n(-1),
        lambda: f_lr(2, 1),
        lambda: f_lr(-1, 3),
        lambda: gamma_ratio_half(1, 2),
        lambda: double_factorial(-3),
    ],
)
def test_out_of_range_arguments(call):
    with pytest.raises(CoefficientError):
        call()


def test_mismatching_f_lr_forms_are_reported(monkeypatch):
    import coefficients

    monkeypatch.setattr(coefficients, "f_lr_sum", lambda l, r: Fraction(0))
    with pytest.raises(CoefficientError, match="summation form"):
        coefficients.f_lr(0, 1)
