"""
Builders for every named series of the rescaled perturbation expansion.

Each builder returns a PkPoly core truncated at a requested b-order. Two
wrapper conventions are in use:

    checked core C':  series = b'^< C' b'^>, products are plain poly_mul
                      since b'^> b'^< = p;
    plain core C:     series = b^< C b^>, products go through the junction
                      M = p + pi^2 pbpbp since b^> b^< = M.

to_plain(C') = N C' N with N = M^(-1/2), and to_checked(C) = (p+A) C (p+A)
with p + A = M^(1/2). The cores of A, X, U, Y and p~Y are inner series that
are never wrapped.
"""
import itertools
import logging
import math
from collections.abc import Callable
from collections.abc import Iterable
from collections.abc import Iterator
from enum import Enum
from fractions import Fraction

from coefficients import Coefficient
from coefficients import ONE
from coefficients import c_n
from coefficients import c_r_rho
from coefficients import e_n
from coefficients import f_lr
from coefficients import minus_pi2_power
from errors import EngineError
from errors import TruncationInvariantError
from pk_algebra import PkPoly
from pk_algebra import apply_power_series
from pk_algebra import identity
from pk_algebra import poly_pow
from pk_algebra import word_mul

HALF = Fraction(1, 2)


class SeriesId(str, Enum):
    A = "A"
    X = "X"
    U_aux = "U_aux"
    Ktilde = "Ktilde"
    Ptilde = "Ptilde"
    PtildeY = "PtildeY"
    Y = "Y"
    Ttilde = "Ttilde"
    P = "P"
    KtildeRes_flow = "KtildeRes_flow"
    KtildeRes_closed = "KtildeRes_closed"
    PtildeRes = "PtildeRes"
    Pres = "Pres"
    Phe = "Phe"

    @classmethod
    def parse(cls, name: str) -> "SeriesId":
        try:
            return cls(name)
        except ValueError:
            known = ", ".join(s.value for s in cls)
            raise EngineError(f"unknown series {name!r}; known: {known}") from None


class Wrapping(Enum):
    NONE = "none"
    CHECKED = "checked"
    PLAIN = "plain"


SubsetQ = frozenset[int]


def _check_order(order: int) -> None:
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")


def series_M(order: int) -> PkPoly:
    """p + pi^2 pbpbp, the value of b^> b^<."""
    return PkPoly({"p": ONE, "ppp": Coefficient.rational(1, 2)}, order)


def _pi2_ppp(order: int) -> PkPoly:
    return PkPoly({"ppp": Coefficient.rational(1, 2)}, order)


def series_A(order: int) -> PkPoly:
    """A with p + A = (p + pi^2 pbpbp)^(1/2)."""
    _check_order(order)
    return apply_power_series(c_n, 1, _pi2_ppp(order), order) - identity(order)


def series_sqrt_M(order: int) -> PkPoly:
    return identity(order) + series_A(order)


def series_N(order: int) -> PkPoly:
    """(p + pi^2 pbpbp)^(-1/2)."""
    _check_order(order)
    return apply_power_series(e_n, 1, _pi2_ppp(order), order)


def _chain(letter: str, order: int) -> PkPoly:
    terms = {
        letter * (2 * beta + 1): minus_pi2_power(beta)
        for beta in range(order // 2 + 1)
    }
    return PkPoly(terms, order)


def series_k_chain(order: int) -> PkPoly:
    """sum_beta (-pi^2)^beta k(bk)^(2 beta), the plain core of k~."""
    _check_order(order)
    return _chain("k", order)


def series_p_chain(order: int) -> PkPoly:
    """sum_beta (-pi^2)^beta p(bp)^(2 beta) = (p + pi^2 pbpbp)^(-1)."""
    _check_order(order)
    return _chain("p", order)


def to_plain(core: PkPoly) -> PkPoly:
    normalizer = series_N(core.order)
    return normalizer * core * normalizer


def to_checked(core: PkPoly) -> PkPoly:
    root = series_sqrt_M(core.order)
    return root * core * root


def junction_mul(a: PkPoly, b: PkPoly) -> PkPoly:
    """Product of two plain-wrapped series: a M b."""
    return a * series_M(min(a.order, b.order)) * b


def series_ktilde_core(order: int) -> PkPoly:
    """Checked core of k~: (p+A) k-chain (p+A)."""
    return to_checked(series_k_chain(order))


def series_U(order: int) -> PkPoly:
    """U = p + X = k~ k~ in the checked convention."""
    ktilde = series_ktilde_core(order)
    return ktilde * ktilde


def series_X(order: int) -> PkPoly:
    x = series_U(order) - identity(order)
    low = [w for w in x.words() if len(w) <= 2]
    if low:
        raise TruncationInvariantError(
            f"X carries terms of b-degree below 2: {', '.join(low)}",
        )
    return x


def series_ptilde_core(order: int) -> PkPoly:
    """p~ = (p + X)^(1/2), checked."""
    return apply_power_series(c_n, 1, series_X(order), order)


def _neumann(n: int) -> Fraction:
    return Fraction((-1) ** n)


def series_Y(order: int) -> PkPoly:
    """Y = (p + X)^(-1) as a Neumann series."""
    return apply_power_series(_neumann, 1, series_X(order), order)


def series_ptildeY(order: int) -> PkPoly:
    """p~ Y = (p + X)^(-1/2)."""
    return apply_power_series(e_n, 1, series_X(order), order)


def series_t_core(order: int) -> PkPoly:
    """t~ = (p~ - k~)/2, checked."""
    return (series_ptilde_core(order) - series_ktilde_core(order)).scale(HALF)


def series_P_core(order: int) -> PkPoly:
    """P = (p - p~Y k~)/2, checked."""
    product = series_ptildeY(order) * series_ktilde_core(order)
    return (identity(order) - product).scale(HALF)


def series_P_via_tYt(order: int) -> PkPoly:
    t = series_t_core(order)
    return t * series_Y(order) * t


def sigma(r: int, rho: int, q: Iterable[int]) -> int:
    """sigma(r, rho, Q) = 1 + sum of the positions in {1..2r+1} outside Q."""
    members: SubsetQ = frozenset(q)
    positions = range(1, 2 * r + 2)
    if not 0 <= rho <= r:
        raise ValueError(f"sigma requires 0 <= rho <= r, got r={r}, rho={rho}")
    if len(members) != 2 * rho or not members <= set(positions):
        raise ValueError(
            f"Q={sorted(members)} is not a {2 * rho}-subset of 1..{2 * r + 1}",
        )
    return 1 + sum(x for x in positions if x not in members)


def build_G(r: int, rho: int) -> PkPoly:
    """Signed sum over the 2 rho-subsets Q of k-words with p at the positions in Q."""
    length = 2 * r + 1
    terms: dict[str, Coefficient] = {}
    for q in itertools.combinations(range(1, length + 1), 2 * rho):
        word = "".join("p" if n in q else "k" for n in range(1, length + 1))
        sign = -1 if sigma(r, rho, q) % 2 else 1
        terms[word] = Coefficient.rational(sign)
    return PkPoly(terms, 2 * r)


def series_kres_core_closed(order: int) -> PkPoly:
    _check_order(order)
    pairs = []
    for r in range(order // 2 + 1):
        for rho in range(r + 1):
            coeff = c_r_rho(r, rho)
            pairs.extend((w, c * coeff) for w, c in build_G(r, rho).items())
    return PkPoly.from_pairs(pairs, order)


def series_S_l(l: int, order: int) -> PkPoly:
    """(k-chain M)^(2l) k-chain."""
    if l < 0:
        raise ValueError(f"series_S_l requires l >= 0, got {l}")
    chain = series_k_chain(order)
    bracket = chain * series_M(order)
    return poly_pow(bracket, 2 * l, order) * chain


def series_kres_core_flow(order: int) -> PkPoly:
    """sum_n e_n sum_l C(n, l) (-1)^(n-l) S(l), plain."""
    _check_order(order)
    top = order // 2
    s_terms = [series_S_l(l, order) for l in range(top + 1)]
    result = PkPoly({}, order)
    for n in range(top + 1):
        weight = e_n(n)
        for l in range(n + 1):
            factor = weight * math.comb(n, l) * (-1) ** (n - l)
            result = result + s_terms[l].scale(factor)
    return result


def series_kres_core_lsum(order: int) -> PkPoly:
    """sum_l f_{l,r} S(l) with r = order // 2, plain."""
    _check_order(order)
    r = order // 2
    result = PkPoly({}, order)
    for l in range(r + 1):
        result = result + series_S_l(l, order).scale(f_lr(l, r))
    return result


def series_kres_core_rescaled(order: int) -> PkPoly:
    """k~ p~Y with the checked wrappers converted, plain."""
    return to_plain(series_ktilde_core(order) * series_ptildeY(order))


def series_pres_core(order: int) -> PkPoly:
    """Plain core of p~res = b'^< p b'^>, i.e. N p N."""
    return to_plain(identity(order))


def series_Pres_core(order: int) -> PkPoly:
    """Residual projector (p~res - k~)/2, plain."""
    return (series_pres_core(order) - series_k_chain(order)).scale(HALF)


def series_Phe_core(order: int) -> PkPoly:
    """High-energy part (k~ - k~res)/2, plain."""
    return (series_k_chain(order) - series_kres_core_closed(order)).scale(HALF)


def series_Phe_via_projector(order: int) -> PkPoly:
    return to_plain(series_P_core(order)) - series_Pres_core(order)


NATIVE_BUILDERS: dict[SeriesId, tuple[Callable[[int], PkPoly], Wrapping]] = {
    SeriesId.A: (series_A, Wrapping.NONE),
    SeriesId.X: (series_X, Wrapping.NONE),
    SeriesId.U_aux: (series_U, Wrapping.NONE),
    SeriesId.Y: (series_Y, Wrapping.NONE),
    SeriesId.PtildeY: (series_ptildeY, Wrapping.NONE),
    SeriesId.Ktilde: (series_ktilde_core, Wrapping.CHECKED),
    SeriesId.Ptilde: (series_ptilde_core, Wrapping.CHECKED),
    SeriesId.Ttilde: (series_t_core, Wrapping.CHECKED),
    SeriesId.P: (series_P_core, Wrapping.CHECKED),
    SeriesId.KtildeRes_flow: (series_kres_core_flow, Wrapping.PLAIN),
    SeriesId.KtildeRes_closed: (series_kres_core_closed, Wrapping.PLAIN),
    SeriesId.PtildeRes: (series_pres_core, Wrapping.PLAIN),
    SeriesId.Pres: (series_Pres_core, Wrapping.PLAIN),
    SeriesId.Phe: (series_Phe_core, Wrapping.PLAIN),
}


def native_core(series: SeriesId, order: int) -> tuple[PkPoly, Wrapping]:
    series = SeriesId(series)
    builder, wrapping = NATIVE_BUILDERS[series]
    core = builder(order)
    logging.debug(f"built {series.value} to order {order}: {len(core)} terms")
    return core, wrapping


def plain_core(series: SeriesId, order: int) -> PkPoly:
    """The core over plain wrappers (inner series are returned unchanged)."""
    core, wrapping = native_core(series, order)
    if wrapping is Wrapping.CHECKED:
        return to_plain(core)
    return core


def layer_core(series: SeriesId, order: int) -> tuple[PkPoly, bool]:
    """The core handed to the B-layer expansion and whether wrappers apply."""
    wrapping = NATIVE_BUILDERS[SeriesId(series)][1]
    return plain_core(series, order), wrapping is not Wrapping.NONE


def _bracket_factors(budget: int) -> list[tuple[str, int, int]]:
    # (word, sign, b-degree) for one factor k(bk)^(2 beta) (p | pbpbp)
    factors = []
    for beta in range(budget // 2 + 1):
        chain = "k" * (2 * beta + 1)
        sign = -1 if beta % 2 else 1
        factors.append((chain, sign, 2 * beta))
        if 2 * beta + 2 <= budget:
            factors.append((word_mul(chain, "ppp"), sign, 2 * beta + 2))
    return factors


def enumerate_S_l_occurrences(l: int, order: int) -> Iterator[tuple[str, int]]:
    """
    Every product term of S(l) before like words are merged.

    Yields (word, sign) with the pi^2 powers omitted; the enumeration runs
    over the beta index and the p | pbpbp branch of each of the 2l bracket
    factors and over the trailing alpha index.
    """
    if l < 0:
        raise ValueError(f"S(l) requires l >= 0, got {l}")
    factors = _bracket_factors(order)

    def extend(word: str, sign: int, degree: int, remaining: int):
        if remaining == 0:
            for alpha in range(0, (order - degree) // 2 + 1):
                tail = "k" * (2 * alpha + 1)
                alpha_sign = -1 if alpha % 2 else 1
                yield word_mul(word, tail), sign * alpha_sign
            return
        for factor, factor_sign, factor_degree in factors:
            if degree + factor_degree > order:
                continue
            yield from extend(
                word_mul(word, factor),
                sign * factor_sign,
                degree + factor_degree,
                remaining - 1,
            )

    yield from extend("p", 1, 0, 2 * l)


def word_sign(word: str) -> int:
    """(-1)^(1 + sum of the k positions), positions counted from 1."""
    total = 1 + sum(i for i, c in enumerate(word, start=1) if c == "k")
    return -1 if total % 2 else 1
