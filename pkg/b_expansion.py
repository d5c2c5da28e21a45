"""
Expansion of pk-cores into B-words over {p, k, s}.

Every b-line becomes sum_j (-1)^j B(sB)^j, the left wrapper b^< becomes
sum_i (-1)^i (sB)^i and the right wrapper b^> becomes sum_i (-1)^i (Bs)^i.
Only final series are expanded; products of s-bearing words are never formed.
"""
import itertools
import logging
from collections import Counter

from coefficients import Coefficient
from errors import RouteMismatchError
from pk_algebra import PkPoly
from pk_algebra import WordPoly
from series_builders import SeriesId
from series_builders import layer_core
from series_builders import series_k_chain
from series_builders import series_p_chain


class BPoly(WordPoly):
    """Polynomial in words over {p, k, s} joined by B-lines."""

    alphabet = "pks"
    separator = "B"

    __slots__ = ()


def _insertions(slots: int, count: int):
    # s-counts per slot, all ways to place `count` letters in `slots` slots
    for combo in itertools.combinations_with_replacement(range(slots), count):
        filled = Counter(combo)
        yield [filled[i] for i in range(slots)]


def _expand_word(word: str, budget: int, wrapped: bool):
    """Yield (expanded word, number of inserted s) for one pk-word."""
    internal = len(word) - 1
    slots = internal + 2 if wrapped else internal
    max_s = budget if slots else 0
    for count in range(max_s + 1):
        for fill in _insertions(slots, count):
            if wrapped:
                left, lines, right = fill[0], fill[1:-1], fill[-1]
            else:
                left, lines, right = 0, fill, 0
            parts = ["s" * left]
            for letter, inserted in zip(word, lines + [0]):
                parts.append(letter + "s" * inserted)
            parts.append("s" * right)
            yield "".join(parts), count


def expand_core(core: PkPoly, order: int, wrapped: bool = True) -> BPoly:
    """Substitute the b-line series (and the wrapper series when wrapped)."""
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    order = min(order, core.order)
    pairs: list[tuple[str, Coefficient]] = []
    for word, coeff in core.items():
        budget = order - (len(word) - 1)
        if budget < 0:
            break
        for expanded, inserted in _expand_word(word, budget, wrapped):
            pairs.append((expanded, -coeff if inserted % 2 else coeff))
    return BPoly.from_pairs(pairs, order)


def expand_direct_ktilde(order: int) -> BPoly:
    """k~ = sum_beta (-pi^2)^beta b^< k (bk)^(2 beta) b^>, expanded."""
    return expand_core(series_k_chain(order), order)


def expand_direct_pres(order: int) -> BPoly:
    """p~res = sum_beta (-pi^2)^beta b^< p (bp)^(2 beta) b^>, expanded."""
    return expand_core(series_p_chain(order), order)


DIRECT_ROUTES = {
    SeriesId.Ktilde: expand_direct_ktilde,
    SeriesId.PtildeRes: expand_direct_pres,
}


def expand_named(series: SeriesId | str, order: int) -> BPoly:
    series = SeriesId.parse(series) if isinstance(series, str) else series
    core, wrapped = layer_core(series, order)
    expanded = expand_core(core, order, wrapped)
    direct = DIRECT_ROUTES.get(series)
    if direct is not None:
        other = direct(order)
        if other != expanded:
            raise RouteMismatchError(
                f"{series.value}: core route and direct route differ at order {order}",
            )
    logging.debug(f"expanded {series.value} to B-order {order}: {len(expanded)} terms")
    return expanded


def replace_p_by_k(poly: WordPoly) -> WordPoly:
    """Map every p to k; words that collide are summed."""
    return poly.map_letters({"p": "k"})
