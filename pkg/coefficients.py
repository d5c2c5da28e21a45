"""
Exact arithmetic in the coefficient ring Q[pi^2] and the closed-form
combinatorial factors of the perturbation expansion.

Rationals are fractions.Fraction throughout; a Coefficient is a finite map
from an even, non-negative power of pi to a nonzero Fraction.
"""
import math
from collections.abc import Iterator
from collections.abc import Mapping
from fractions import Fraction
from typing import Union

from errors import CoefficientError
from errors import OddPiExponentError

Rational = Fraction
Scalar = Union[int, Fraction]


class Coefficient:
    """Element of Q[pi^2], stored as {pi_exponent: Fraction}."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, Scalar] | None = None):
        clean: dict[int, Fraction] = {}
        for exponent, value in (terms or {}).items():
            if not isinstance(exponent, int) or exponent < 0 or exponent % 2:
                raise OddPiExponentError(
                    f"pi exponent must be even and non-negative, got {exponent!r}",
                )
            value = Fraction(value)
            if value:
                clean[exponent] = value
        self._terms = dict(sorted(clean.items()))
        self._hash: int | None = None

    @classmethod
    def rational(cls, value: Scalar, pi_exponent: int = 0) -> "Coefficient":
        return cls({pi_exponent: value})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return iter(self._terms.items())

    def pi_exponents(self) -> list[int]:
        return list(self._terms)

    def min_pi_exponent(self) -> int:
        return min(self._terms) if self._terms else 0

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def _coerce(self, other: object) -> "Coefficient":
        if isinstance(other, Coefficient):
            return other
        if isinstance(other, (int, Fraction)):
            return Coefficient.rational(other)
        return NotImplemented

    def __add__(self, other: object) -> "Coefficient":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return coeff_add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "Coefficient":
        return Coefficient({e: -v for e, v in self._terms.items()})

    def __sub__(self, other: object) -> "Coefficient":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return coeff_add(self, -other)

    def __rsub__(self, other: object) -> "Coefficient":
        return -self + other

    def __mul__(self, other: object) -> "Coefficient":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return coeff_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Coefficient.rational(other)
        if not isinstance(other, Coefficient):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{e}: {v}" for e, v in self._terms.items())
        return f"Coefficient({{{body}}})"


ZERO = Coefficient()
ONE = Coefficient.rational(1)
PI2 = Coefficient.rational(1, 2)


def coeff_add(a: Coefficient, b: Coefficient) -> Coefficient:
    """Pointwise sum per pi-exponent; zero entries vanish."""
    total = dict(a.items())
    for exponent, value in b.items():
        total[exponent] = total.get(exponent, 0) + value
    return Coefficient(total)


def coeff_mul(a: Coefficient, b: Coefficient) -> Coefficient:
    """Convolution over pi-exponents."""
    product: dict[int, Fraction] = {}
    for e1, v1 in a.items():
        for e2, v2 in b.items():
            product[e1 + e2] = product.get(e1 + e2, 0) + v1 * v2
    return Coefficient(product)


def double_factorial(n: int) -> int:
    """n!! with the conventions (-1)!! = 0!! = 1."""
    if n < -1:
        raise CoefficientError(f"double factorial undefined for {n}")
    return math.prod(range(n, 0, -2))


def c_n(n: int) -> Fraction:
    """Taylor coefficient of sqrt(1 + x): (-1)^(n+1) (2n-3)!! / (n! 2^n)."""
    if n < 1:
        raise CoefficientError(f"c_n requires n >= 1, got {n}")
    sign = 1 if n % 2 else -1
    return Fraction(sign * double_factorial(2 * n - 3), math.factorial(n) * 2**n)


def e_n(n: int) -> Fraction:
    """Taylor coefficient of (1 + x)^(-1/2), with e_0 = 1."""
    if n < 0:
        raise CoefficientError(f"e_n requires n >= 0, got {n}")
    sign = -1 if n % 2 else 1
    return Fraction(sign * double_factorial(2 * n - 1), 2**n * math.factorial(n))


def _check_lr(l: int, r: int) -> None:
    if l < 0 or l > r:
        raise CoefficientError(f"f_lr requires 0 <= l <= r, got l={l}, r={r}")


def f_lr_sum(l: int, r: int) -> Fraction:
    """Summation form: sum_{n=l}^{r} e_n C(n, l) (-1)^(n-l)."""
    _check_lr(l, r)
    return sum(
        (e_n(n) * math.comb(n, l) * (-1) ** (n - l) for n in range(l, r + 1)),
        Fraction(0),
    )


def f_lr_closed(l: int, r: int) -> Fraction:
    """Closed form: (-1)^l / l! * (2r+1)!! / (2^r (2l+1) (r-l)!)."""
    _check_lr(l, r)
    return Fraction(
        (-1) ** l * double_factorial(2 * r + 1),
        math.factorial(l) * 2**r * (2 * l + 1) * math.factorial(r - l),
    )


def f_lr(l: int, r: int) -> Fraction:
    """f_{l,r}; the summation and closed forms are evaluated and must agree."""
    summed = f_lr_sum(l, r)
    closed = f_lr_closed(l, r)
    if summed != closed:
        raise CoefficientError(
            f"f_lr({l}, {r}): summation form {summed} != closed form {closed}",
        )
    return closed


def _half_gamma(n: int) -> Fraction:
    # Gamma(n + 1/2) / sqrt(pi), by Gamma(x + 1) = x Gamma(x)
    value = Fraction(1)
    if n >= 0:
        for j in range(n):
            value *= Fraction(2 * j + 1, 2)
    else:
        for j in range(n, 0):
            value /= Fraction(2 * j + 1, 2)
    return value


def gamma_ratio_half(r: int, rho: int) -> Fraction:
    """Gamma(r - rho + 1/2) / (Gamma(-rho + 1/2) r!), exact."""
    if rho < 0 or rho > r:
        raise CoefficientError(
            f"gamma_ratio_half requires 0 <= rho <= r, got r={r}, rho={rho}",
        )
    return _half_gamma(r - rho) / _half_gamma(-rho) / math.factorial(r)


def c_r_rho(r: int, rho: int) -> Coefficient:
    """c(r, rho) = pi^(2r) Gamma(r - rho + 1/2) / (Gamma(-rho + 1/2) r!)."""
    return Coefficient({2 * r: gamma_ratio_half(r, rho)})


def minus_pi2_power(beta: int) -> Coefficient:
    """(-i pi)^(2 beta) = (-pi^2)^beta."""
    return Coefficient({2 * beta: (-1) ** beta})
