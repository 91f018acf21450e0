"""
Scalar arithmetic, text codec and specialization tests.
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings

from src.algebra.scalars import (
    ONE,
    Q,
    ZERO,
    as_scalar,
    eval_at,
    from_fraction,
    inverse,
    parse_scalar,
    q_binomial,
    q_factorial,
    q_int,
    qpow,
    scalar_arith,
    to_text,
)
from src.utils.exceptions import (
    ScalarDivisionError,
    ScalarParseError,
    VanishingDenominatorError,
    ZeroSpecializationError,
)
from tests.strategies import laurent, nonzero_laurent, scalars


def test_q_integer_text():
    """(3)_{q^-2} prints in descending exponents."""
    assert to_text(q_int(3, qpow(-2))) == "1 + q^-2 + q^-4"


def test_text_is_canonical():
    assert to_text(parse_scalar("q^-4 + 1 + q^-2")) == "1 + q^-2 + q^-4"
    assert to_text(parse_scalar("(q^2 - 1)/(q - 1)")) == "q + 1"
    assert to_text(parse_scalar("1/(1 - q)")) == "(1)/(-q + 1)"
    assert to_text(parse_scalar("-q^-1")) == "-q^-1"
    assert to_text(ZERO) == "0"


def test_rational_coefficients():
    half = from_fraction(Fraction(1, 2))
    assert to_text(half * Q) == "1/2*q"
    assert parse_scalar("1/2*q") == half * Q


def test_q_integers_at_one():
    for n in range(6):
        assert q_int(n, ONE) == from_fraction(n)


def test_q_binomial():
    assert q_binomial(4, 2, Q) == parse_scalar("1 + q + 2*q^2 + q^3 + q^4")
    assert q_binomial(3, 5, Q) == ZERO
    assert q_factorial(3, Q) == (ONE + Q) * (ONE + Q + Q ** 2)


def test_eval_at():
    assert eval_at(q_int(3, Q), 2) == 7
    assert eval_at(qpow(-1), "1/2") == 2
    assert eval_at(q_int(2, qpow(-2)), 2) == Fraction(5, 4)
    assert eval_at(parse_scalar("1/(q + 1)"), Fraction(3, 2)) == Fraction(2, 5)


def test_eval_at_zero():
    with pytest.raises(ZeroSpecializationError):
        eval_at(Q, 0)


def test_vanishing_denominator():
    with pytest.raises(VanishingDenominatorError):
        eval_at(parse_scalar("1/(q - 1)"), 1)


@pytest.mark.parametrize("text", ["", "   ", "x + 1", "(q + 1", "q^", "2**"])
def test_parse_errors(text):
    with pytest.raises(ScalarParseError):
        parse_scalar(text)


def test_division_by_zero():
    with pytest.raises(ScalarDivisionError):
        scalar_arith(ONE, ZERO, "div")
    with pytest.raises(ScalarDivisionError):
        inverse(ZERO)


def test_as_scalar():
    assert as_scalar(3) == from_fraction(3)
    assert as_scalar("q") == Q
    assert as_scalar(Q) is Q


@given(scalars())
@settings(max_examples=40, deadline=None)
def test_text_parses_back(s):
    assert parse_scalar(to_text(s)) == s


@given(laurent(), laurent(), nonzero_laurent())
@settings(max_examples=40, deadline=None)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert c * inverse(c) == ONE
    assert scalar_arith(scalar_arith(a, c, "div"), c, "mul") == a


@given(laurent(), laurent())
@settings(max_examples=40, deadline=None)
def test_specialization_is_a_homomorphism(a, b):
    point = Fraction(3, 2)
    assert eval_at(a + b, point) == eval_at(a, point) + eval_at(b, point)
    assert eval_at(a * b, point) == eval_at(a, point) * eval_at(b, point)


def test_q_pascal():
    for nu in (Q, qpow(-2), ONE):
        for n in range(2, 7):
            for k in range(1, n):
                assert q_binomial(n, k, nu) == q_binomial(n - 1, k - 1, nu) + nu ** k * q_binomial(n - 1, k, nu)
