"""
Exact arithmetic in the field Q(q) of rational functions in one formal variable q.

Scalars are sympy fraction-field elements: sympy keeps every element reduced
(numerator and denominator coprime, sign normalized), so equality and hashing
are exact. This module adds the Laurent-polynomial view used for printing and
specialization, the text codec, and the q-integer family.

>>> to_text(q_int(3, qpow(-2)))
'1 + q^-2 + q^-4'
"""
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Tuple, Union

from sympy import Rational, Symbol
from sympy.core.sympify import SympifyError
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.domains import QQ
from sympy.polys.fields import FracElement
from sympy.polys.polyerrors import CoercionFailed, PolynomialError

from src.utils.exceptions import (
    ScalarDivisionError,
    ScalarParseError,
    VanishingDenominatorError,
    ZeroSpecializationError,
)

Q_SYMBOL = Symbol("q")
FIELD = QQ.frac_field(Q_SYMBOL)

# Elements of Q(q); sympy FracElement instances of FIELD.
Scalar = FracElement

ZERO: Scalar = FIELD.zero
ONE: Scalar = FIELD.one
Q: Scalar = FIELD.from_sympy(Q_SYMBOL)

ScalarLike = Union[Scalar, int, Fraction, str]

_SCALAR_TEXT = re.compile(r"^[0-9q\s+\-*/^()]+$")
_TRANSFORMATIONS = standard_transformations + (convert_xor,)


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


@dataclass(frozen=True)
class LaurentPoly:
    """Finite sum of c_k q^k with exact rational c_k; zero coefficients are never stored."""
    terms: Tuple[Tuple[int, Fraction], ...] = ()

    @classmethod
    def from_mapping(cls, coefficients: Mapping[int, Fraction]) -> "LaurentPoly":
        return cls(tuple(sorted((k, Fraction(c)) for k, c in coefficients.items() if c != 0)))

    @property
    def coefficients(self) -> Dict[int, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def lowest_exponent(self) -> int:
        return self.terms[0][0]

    def shift(self, k: int) -> "LaurentPoly":
        return LaurentPoly(tuple((e + k, c) for e, c in self.terms))

    def scale(self, factor: Fraction) -> "LaurentPoly":
        return LaurentPoly.from_mapping({e: c * factor for e, c in self.terms})

    def evaluate(self, point: Fraction) -> Fraction:
        return sum((c * point ** e for e, c in self.terms), Fraction(0))

    def to_scalar(self) -> Scalar:
        total = ZERO
        for e, c in self.terms:
            total += from_fraction(c) * qpow(e)
        return total

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e, c in sorted(self.terms, key=lambda t: -t[0]):
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if e == 0:
                body = str(magnitude)
            else:
                power = "q" if e == 1 else f"q^{e}"
                body = power if magnitude == 1 else f"{magnitude}*{power}"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text


def qpow(k: int) -> Scalar:
    """q^k for any integer k."""
    return Q ** k


def from_fraction(value: Union[int, Fraction]) -> Scalar:
    value = Fraction(value)
    return FIELD.from_sympy(Rational(value.numerator, value.denominator))


def as_scalar(value: ScalarLike) -> Scalar:
    """Coerce ints, Fractions and Scalar strings to Scalars."""
    if isinstance(value, FracElement):
        return value
    if isinstance(value, str):
        return parse_scalar(value)
    return from_fraction(value)


def laurent_parts(s: Scalar) -> Tuple[LaurentPoly, LaurentPoly]:
    """
    Canonical (numerator, denominator) pair of Laurent polynomials.

    The denominator's lowest exponent is 0 and its lowest-degree coefficient
    is 1; numerator and denominator share no polynomial factor.
    """
    numer = LaurentPoly.from_mapping({m[0]: _to_fraction(c) for m, c in s.numer.terms()})
    denom = LaurentPoly.from_mapping({m[0]: _to_fraction(c) for m, c in s.denom.terms()})
    shift = denom.lowest_exponent()
    lead = denom.terms[0][1]
    return numer.shift(-shift).scale(1 / lead), denom.shift(-shift).scale(1 / lead)


def term_count(s: Scalar) -> int:
    """Number of stored monomials; used as the elimination pivot weight."""
    return len(s.numer.terms()) + len(s.denom.terms())


def to_text(s: Scalar) -> str:
    """Canonical text form, e.g. '1 + q^-2 + q^-4' or '(1)/(-q + 1)'."""
    numer, denom = laurent_parts(s)
    if denom.terms == ((0, Fraction(1)),):
        return numer.to_text()
    return f"({numer.to_text()})/({denom.to_text()})"


def parse_scalar(text: str) -> Scalar:
    """Parse integer coefficients, q^k (k any integer), + - * / and parentheses."""
    if not text or not text.strip():
        raise ScalarParseError(text, "empty input")
    if not _SCALAR_TEXT.match(text):
        raise ScalarParseError(text, "only digits, q, + - * / ^ and parentheses are allowed")
    try:
        expr = parse_expr(text, local_dict={"q": Q_SYMBOL}, transformations=_TRANSFORMATIONS)
        return FIELD.from_sympy(expr)
    except (SyntaxError, TypeError, ValueError, SympifyError, CoercionFailed, PolynomialError, ZeroDivisionError) as e:
        raise ScalarParseError(text, str(e) or e.__class__.__name__)
    except Exception as e:  # tokenizer errors surface under several names
        raise ScalarParseError(text, e.__class__.__name__)


_ARITH: Dict[str, Callable[[Scalar, Scalar], Scalar]] = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def scalar_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """
    Exact field arithmetic in Q(q).

    Args:
        a: Left operand
        b: Right operand
        op: One of add, sub, mul, div

    Returns:
        The reduced result

    Raises:
        ScalarDivisionError: op is div and b is zero
    """
    if op not in _ARITH:
        raise ValueError(f"Unknown scalar operation '{op}'")
    if op == "div" and not b:
        raise ScalarDivisionError()
    return _ARITH[op](a, b)


def inverse(s: Scalar) -> Scalar:
    if not s:
        raise ScalarDivisionError()
    return ONE / s


def q_int(n: int, nu: Scalar) -> Scalar:
    """(n)_nu = 1 + nu + ... + nu^(n-1); equals n at nu = 1."""
    if n < 0:
        raise ValueError("q-integers are defined for n >= 0")
    total = ZERO
    power = ONE
    for _ in range(n):
        total += power
        power *= nu
    return total


def q_factorial(n: int, nu: Scalar) -> Scalar:
    result = ONE
    for k in range(1, n + 1):
        result *= q_int(k, nu)
    return result


def q_binomial(n: int, k: int, nu: Scalar) -> Scalar:
    """(n)_nu! / ((k)_nu! (n-k)_nu!), and 0 outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return ZERO
    return q_factorial(n, nu) / (q_factorial(k, nu) * q_factorial(n - k, nu))


def eval_at(s: Scalar, q0: Union[Fraction, int, str]) -> Fraction:
    """
    Exact value of s at q = q0.

    Args:
        s: The Scalar to specialize
        q0: A nonzero rational, as a Fraction, int or text such as "3/2"

    Returns:
        numerator(q0) / denominator(q0) as a Fraction

    Raises:
        ZeroSpecializationError: q0 is zero
        VanishingDenominatorError: the reduced denominator vanishes at q0
    """
    point = Fraction(q0)
    if point == 0:
        raise ZeroSpecializationError()
    numer, denom = laurent_parts(s)
    value = denom.evaluate(point)
    if value == 0:
        raise VanishingDenominatorError(point)
    return numer.evaluate(point) / value


def scalar_sum(values: Iterable[Scalar]) -> Scalar:
    total = ZERO
    for v in values:
        total += v
    return total
