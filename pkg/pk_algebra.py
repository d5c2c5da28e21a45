"""
Fixed-mass word algebra.

A word is a string of letters; every adjacent pair is joined by one line
(b in the pk layer, B in the expanded layer), so the degree of a word is
its length minus one. In the pk layer the letters p and k multiply by the
contraction rules p p = k k = p, p k = k p = k, i.e. the group Z_2 with p as
identity. Polynomials carry a mandatory truncation order.
"""
import re
from collections.abc import Callable
from collections.abc import Iterable
from collections.abc import Iterator
from collections.abc import Mapping
from enum import Enum
from fractions import Fraction

from typing_extensions import Self

from coefficients import Coefficient
from coefficients import ONE
from coefficients import Scalar
from errors import NonTerminatingSeriesError
from errors import WordError


class Letter(str, Enum):
    P = "p"
    K = "k"
    S = "s"


LETTER_RANK = {Letter.P.value: 0, Letter.K.value: 1, Letter.S.value: 2}


def b_degree(word: str) -> int:
    return len(word) - 1


def word_key(word: str) -> tuple[int, tuple[int, ...]]:
    """Canonical order: by length, then lexicographic with p < k < s."""
    return len(word), tuple(LETTER_RANK[c] for c in word)


def contract(left: str, right: str) -> str:
    return Letter.P.value if left == right else Letter.K.value


def word_mul(w1: str, w2: str) -> str:
    """Concatenate two pk-words, contracting the junction letters."""
    return w1[:-1] + contract(w1[-1], w2[0]) + w2[1:]


def parse_word(text: str, separator: str, alphabet: str = "pk") -> str:
    """'pbkbp' -> 'pkp' (separator 'b'), 'sBk' -> 'sk' (separator 'B')."""
    pattern = f"[{alphabet}]({re.escape(separator)}[{alphabet}])*"
    if not re.fullmatch(pattern, text):
        raise WordError(f"malformed word {text!r} for separator {separator!r}")
    return text.replace(separator, "")


def format_word(word: str, separator: str) -> str:
    return separator.join(word)


class WordPoly:
    """Finite linear combination of words with Coefficient values."""

    alphabet = "pk"
    separator = "b"

    __slots__ = ("_terms", "order")

    def __init__(self, terms: Mapping[str, Coefficient] | None = None, order: int = 0):
        if order < 0:
            raise ValueError(f"truncation order must be >= 0, got {order}")
        self.order = order
        clean: dict[str, Coefficient] = {}
        for word, coeff in (terms or {}).items():
            self._check_word(word)
            if len(word) - 1 > order or not coeff:
                continue
            clean[word] = coeff
        self._terms = {w: clean[w] for w in sorted(clean, key=word_key)}

    @classmethod
    def _check_word(cls, word: str) -> None:
        if not word or any(c not in cls.alphabet for c in word):
            raise WordError(
                f"word {word!r} is not a non-empty string over {cls.alphabet!r}",
            )

    @classmethod
    def from_pairs(
        cls,
        pairs: Iterable[tuple[str, Coefficient]],
        order: int,
    ) -> Self:
        """Build from (word, coefficient) pairs, summing repeated words."""
        acc: dict[str, Coefficient] = {}
        for word, coeff in pairs:
            acc[word] = acc[word] + coeff if word in acc else coeff
        return cls(acc, order)

    @classmethod
    def monomial(cls, word: str, coeff: Coefficient | Scalar = 1, order: int = 0):
        if not isinstance(coeff, Coefficient):
            coeff = Coefficient.rational(coeff)
        return cls({word: coeff}, max(order, len(word) - 1))

    @property
    def terms(self) -> dict[str, Coefficient]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[str, Coefficient]]:
        return iter(self._terms.items())

    def words(self) -> list[str]:
        return list(self._terms)

    def coefficient(self, word: str) -> Coefficient:
        return self._terms.get(word, Coefficient())

    def min_degree(self) -> int | None:
        if not self._terms:
            return None
        return min(len(w) for w in self._terms) - 1

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __contains__(self, word: object) -> bool:
        return word in self._terms

    def truncate(self, order: int) -> Self:
        if order > self.order:
            raise ValueError(
                f"cannot extend truncation order {self.order} to {order}",
            )
        return type(self)(self._terms, order)

    def _same_kind(self, other: object) -> bool:
        return type(other) is type(self)

    def __add__(self, other: "WordPoly") -> Self:
        if not self._same_kind(other):
            return NotImplemented
        order = min(self.order, other.order)
        pairs = list(self.items()) + list(other.items())
        return type(self).from_pairs(pairs, order)

    def __neg__(self) -> Self:
        return type(self)({w: -c for w, c in self.items()}, self.order)

    def __sub__(self, other: "WordPoly") -> Self:
        if not self._same_kind(other):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: Coefficient | Scalar) -> Self:
        if not isinstance(factor, Coefficient):
            factor = Coefficient.rational(factor)
        return type(self)({w: c * factor for w, c in self.items()}, self.order)

    def __rmul__(self, factor: object) -> Self:
        if isinstance(factor, (Coefficient, int, Fraction)):
            return self.scale(factor)
        return NotImplemented

    def map_letters(self, mapping: Mapping[str, str]) -> Self:
        """Substitute letters word by word; colliding words are summed."""
        pairs = (
            ("".join(mapping.get(c, c) for c in word), coeff)
            for word, coeff in self.items()
        )
        return type(self).from_pairs(pairs, self.order)

    def __eq__(self, other: object) -> bool:
        if not self._same_kind(other):
            return NotImplemented
        return self.order == other.order and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.order, tuple(self._terms.items())))

    def __repr__(self) -> str:
        body = ", ".join(
            f"{format_word(w, self.separator)}: {c!r}" for w, c in self.items()
        )
        return f"{type(self).__name__}({{{body}}}, order={self.order})"


class PkPoly(WordPoly):
    """Polynomial in pk-words joined by b-lines."""

    alphabet = "pk"
    separator = "b"

    __slots__ = ()

    def __mul__(self, other: object) -> "PkPoly":
        if isinstance(other, PkPoly):
            return poly_mul(self, other)
        if isinstance(other, (Coefficient, int, Fraction)):
            return self.scale(other)
        return NotImplemented


def identity(order: int) -> PkPoly:
    """The identity word p as a polynomial."""
    return PkPoly({Letter.P.value: ONE}, order)


def poly_add(a: PkPoly, b: PkPoly) -> PkPoly:
    return a + b


def poly_truncate(a: PkPoly, order: int) -> PkPoly:
    return a.truncate(order)


def poly_mul(a: PkPoly, b: PkPoly) -> PkPoly:
    """Bilinear extension of word_mul, truncated to the smaller order."""
    order = min(a.order, b.order)
    acc: dict[str, Coefficient] = {}
    right = list(b.items())
    for w1, c1 in a.items():
        budget = order - (len(w1) - 1)
        if budget < 0:
            break
        for w2, c2 in right:
            if len(w2) - 1 > budget:
                # words are stored by ascending length
                break
            word = word_mul(w1, w2)
            term = c1 * c2
            acc[word] = acc[word] + term if word in acc else term
    return PkPoly(acc, order)


def poly_pow(a: PkPoly, n: int, order: int | None = None) -> PkPoly:
    """n-fold product with a^0 = p."""
    if n < 0:
        raise ValueError(f"poly_pow requires n >= 0, got {n}")
    order = a.order if order is None else min(order, a.order)
    base = a.truncate(order)
    result = identity(order)
    for _ in range(n):
        result = poly_mul(result, base)
        if not result:
            break
    return result


def apply_power_series(
    coeff_fn: Callable[[int], Fraction],
    const_term: Scalar,
    arg: PkPoly,
    order: int,
) -> PkPoly:
    """const_term * p + sum_{n >= 1} coeff_fn(n) * arg^n, truncated at order."""
    order = min(order, arg.order)
    arg = arg.truncate(order)
    if any(len(w) == 1 for w in arg.words()):
        raise NonTerminatingSeriesError(
            "power series argument contains a b-degree-0 word",
        )
    result = identity(order).scale(const_term)
    min_degree = arg.min_degree()
    if min_degree is None:
        return result
    power = identity(order)
    n = 1
    while n * min_degree <= order:
        power = poly_mul(power, arg)
        if not power:
            break
        result = result + power.scale(coeff_fn(n))
        n += 1
    return result
