from collections import Counter

import pytest

import series_builders
from coefficients import ONE
from errors import EngineError
from errors import TruncationInvariantError
from pk_algebra import PkPoly
from pk_algebra import identity
from rendering import parse_text_poly
from series_builders import HALF
from series_builders import SeriesId
from series_builders import Wrapping
from series_builders import build_G
from series_builders import enumerate_S_l_occurrences
from series_builders import junction_mul
from series_builders import layer_core
from series_builders import native_core
from series_builders import plain_core
from series_builders import series_A
from series_builders import series_k_chain
from series_builders import series_kres_core_closed
from series_builders import series_kres_core_flow
from series_builders import series_kres_core_lsum
from series_builders import series_kres_core_rescaled
from series_builders import series_ktilde_core
from series_builders import series_M
from series_builders import series_N
from series_builders import series_p_chain
from series_builders import series_P_core
from series_builders import series_P_via_tYt
from series_builders import series_Phe_core
from series_builders import series_Phe_via_projector
from series_builders import series_pres_core
from series_builders import series_Pres_core
from series_builders import series_ptilde_core
from series_builders import series_S_l
from series_builders import series_U
from series_builders import series_X
from series_builders import sigma
from series_builders import to_checked
from series_builders import to_plain
from series_builders import word_sign


def pk(text: str, order: int) -> PkPoly:
    return parse_text_poly(text, "pk", order)


def test_junction_and_its_roots():
    assert series_M(2) == pk("p + pi^2 pbpbp", 2)
    assert series_N(2) == pk("p - 1/2 pi^2 pbpbp", 2)
    assert series_A(4) == pk("1/2 pi^2 pbpbp - 1/8 pi^4 pbpbpbpbp", 4)
    assert series_N(6) * series_N(6) == series_p_chain(6)


def test_chains():
    assert series_k_chain(4) == pk("k - pi^2 kbkbk + pi^4 kbkbkbkbk", 4)
    assert series_p_chain(3) == pk("p - pi^2 pbpbp", 3)
    assert series_p_chain(6) * series_M(6) == identity(6)


def test_wrapper_conversions_are_inverse():
    core = series_kres_core_closed(6)
    assert to_plain(to_checked(core)) == core
    assert to_plain(series_ktilde_core(6)) == series_k_chain(6)


def test_ktilde_checked_core():
    assert series_ktilde_core(2) == pk(
        "k - pi^2 kbkbk + 1/2 pi^2 (pbpbk + kbpbp)",
        2,
    )


def test_X_second_order():
    assert series_X(2) == pk("pi^2 (pbpbp - pbkbk - kbkbp + kbpbk)", 2)


@pytest.mark.parametrize("order", [2, 4, 6])
def test_X_starts_at_second_order(order):
    assert series_X(order).min_degree() == 2


def test_X_with_low_order_terms_is_rejected(monkeypatch):
    monkeypatch.setattr(
        series_builders,
        "series_U",
        lambda order: PkPoly({"p": ONE, "pk": ONE}, order),
    )
    with pytest.raises(TruncationInvariantError):
        series_X(2)


def test_ptilde_squares_to_U():
    ptilde = series_ptilde_core(6)
    assert ptilde * ptilde == series_U(6)


@pytest.mark.parametrize(
    "r, rho, q, expected",
    [(1, 0, [], 7), (1, 1, [1, 2], 4), (1, 1, [1, 3], 3), (1, 1, [2, 3], 2), (0, 0, [], 2)],
)
def test_sigma(r, rho, q, expected):
    assert sigma(r, rho, q) == expected


@pytest.mark.parametrize(
    "r, rho, q",
    [(1, 2, [1, 2, 3, 4]), (1, 1, [1]), (1, 1, [1, 4]), (-1, 0, [])],
)
def test_sigma_rejects_invalid_subsets(r, rho, q):
    with pytest.raises(ValueError):
        sigma(r, rho, q)


def test_build_G():
    assert build_G(0, 0) == pk("k", 0)
    assert build_G(1, 0) == pk("-kbkbk", 2)
    assert build_G(1, 1) == pk("pbpbk - pbkbp + kbpbp", 2)
    assert len(build_G(2, 1)) == 10


def test_kres_closed_second_order():
    assert series_kres_core_closed(2) == pk(
        "k + 1/2 pi^2 (-kbpbp + pbkbp - pbpbk - kbkbk)",
        2,
    )


def test_S_l():
    assert series_S_l(0, 2) == pk("k - pi^2 kbkbk", 2)
    assert series_S_l(1, 2) == pk("k + pi^2 (pbpbk - pbkbp + kbpbp - 2 kbkbk)", 2)
    with pytest.raises(ValueError):
        series_S_l(-1, 2)


@pytest.mark.parametrize("order", range(7))
def test_kres_routes_agree(order):
    closed = series_kres_core_closed(order)
    assert series_kres_core_flow(order) == closed
    assert series_kres_core_lsum(order) == closed
    assert series_kres_core_rescaled(order) == closed


def test_ptilde_res():
    assert series_pres_core(2) == pk("p - pi^2 pbpbp", 2)
    assert series_pres_core(6) == series_p_chain(6)
    assert series_Pres_core(2) == pk("1/2 [p - k - pi^2 pbpbp + pi^2 kbkbk]", 2)


def test_phe_second_order():
    assert series_Phe_core(2) == pk(
        "1/4 pi^2 (-kbkbk - pbkbp + pbpbk + kbpbp)",
        2,
    )
    assert series_Phe_core(1).is_zero()


@pytest.mark.parametrize("order", [2, 4])
def test_projector_routes_agree(order):
    assert series_P_via_tYt(order) == series_P_core(order)
    assert series_Phe_via_projector(order) == series_Phe_core(order)
    pres = series_pres_core(order)
    kres = series_kres_core_closed(order)
    assert plain_core(SeriesId.P, order) == (pres - kres).scale(HALF)


def test_plain_projector_is_idempotent_with_the_junction():
    P = plain_core(SeriesId.P, 4)
    assert junction_mul(P, P) == P


def test_native_core_reports_its_wrapping():
    core, wrapping = native_core(SeriesId.Ktilde, 2)
    assert wrapping is Wrapping.CHECKED
    assert core == series_ktilde_core(2)
    assert native_core(SeriesId.PtildeRes, 2)[1] is Wrapping.PLAIN
    assert native_core(SeriesId.Y, 2)[1] is Wrapping.NONE


@pytest.mark.parametrize(
    "series, wrapped",
    [(SeriesId.A, False), (SeriesId.X, False), (SeriesId.PtildeY, False), (SeriesId.Ktilde, True), (SeriesId.Phe, True)],
)
def test_layer_core_flags_wrapped_series(series, wrapped):
    assert layer_core(series, 2)[1] is wrapped


def test_unknown_series_name():
    with pytest.raises(EngineError, match="unknown series"):
        SeriesId.parse("Qtilde")


def test_S_l_occurrences_at_second_order():
    counts = Counter(
        word for word, _ in enumerate_S_l_occurrences(1, 2) if len(word) == 3
    )
    assert counts == {"kkk": 2, "ppk": 1, "pkp": 1, "kpp": 1}
    for word, sign in enumerate_S_l_occurrences(1, 2):
        assert sign == word_sign(word)


@pytest.mark.parametrize(
    "word, sign",
    [("k", 1), ("kkk", -1), ("kkkkk", 1), ("kpp", 1), ("pkp", -1), ("ppk", 1)],
)
def test_word_sign(word, sign):
    assert word_sign(word) == sign


@pytest.mark.parametrize("order", [0, 2, 4, 6])
def test_kres_words_have_an_even_number_of_p(order):
    odd = [w for w in series_kres_core_closed(order).words() if w.count("p") % 2]
    assert odd == []


@pytest.mark.parametrize("l", [0, 1, 2])
def test_S_l_words_have_an_even_number_of_p(l):
    odd = [w for w in series_S_l(l, 4).words() if w.count("p") % 2]
    assert odd == []


def test_X_is_not_restricted_to_even_p():
    assert {"ppp", "pkk", "kpk", "kkp"} <= set(series_X(2).words())
