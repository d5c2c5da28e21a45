import pytest
from hypothesis import given
from hypothesis import strategies as st

import b_expansion
from b_expansion import BPoly
from b_expansion import expand_core
from b_expansion import expand_direct_ktilde
from b_expansion import expand_direct_pres
from b_expansion import expand_named
from b_expansion import replace_p_by_k
from coefficients import Coefficient
from coefficients import ONE
from errors import EngineError
from errors import RouteMismatchError
from errors import WordError
from pk_algebra import PkPoly
from pk_algebra import b_degree
from rendering import parse_text_poly
from series_builders import SeriesId
from series_builders import plain_core


ORDER = 4

pk_words = st.text(alphabet="pk", min_size=1, max_size=ORDER)
small_coefficients = st.builds(
    lambda value, exponent: Coefficient({exponent: value}),
    st.integers(min_value=-3, max_value=3),
    st.sampled_from([0, 2]),
)
pk_polys = st.dictionaries(pk_words, small_coefficients, max_size=4).map(
    lambda terms: PkPoly(terms, ORDER),
)


def B(text: str, order: int) -> BPoly:
    return parse_text_poly(text, "b", order)


def test_ktilde_to_first_order():
    assert expand_named(SeriesId.Ktilde, 1) == B("k - sBk - kBs", 1)


def test_single_letter_with_wrappers():
    core = PkPoly({"p": ONE}, 2)
    assert expand_core(core, 2) == B("p - sBp - pBs + sBsBp + sBpBs + pBsBs", 2)


def test_inner_series_are_not_wrapped():
    core = PkPoly({"pk": ONE}, 3)
    assert expand_core(core, 3, wrapped=False) == B("pBk - pBsBk + pBsBsBk", 3)


def test_expansion_order_is_capped_by_the_core():
    core = PkPoly({"k": ONE}, 1)
    assert expand_core(core, 3).order == 1
    with pytest.raises(ValueError):
        expand_core(core, -1)


@pytest.mark.parametrize("series", [SeriesId.X, SeriesId.Y, SeriesId.A])
def test_inner_series_have_no_boundary_s(series):
    expanded = expand_named(series, 3)
    assert all(w[0] != "s" and w[-1] != "s" for w in expanded.words())


@pytest.mark.parametrize("order", [0, 3, 5])
def test_direct_routes_match_the_cores(order):
    assert expand_direct_ktilde(order) == expand_core(plain_core(SeriesId.Ktilde, order), order)
    assert expand_direct_pres(order) == expand_core(plain_core(SeriesId.PtildeRes, order), order)


def test_diverging_direct_route_is_reported(monkeypatch):
    monkeypatch.setitem(b_expansion.DIRECT_ROUTES, SeriesId.Ktilde, expand_direct_pres)
    with pytest.raises(RouteMismatchError, match="Ktilde"):
        expand_named(SeriesId.Ktilde, 2)


def test_series_can_be_named_by_string():
    assert expand_named("PtildeRes", 2) == expand_named(SeriesId.PtildeRes, 2)
    with pytest.raises(EngineError):
        expand_named("Ktilda", 2)


def test_replacement_rule_maps_kres_onto_ktilde():
    kres = expand_named(SeriesId.KtildeRes_closed, 5)
    assert replace_p_by_k(kres) == expand_named(SeriesId.Ktilde, 5)


def test_replacement_keeps_the_layer():
    assert isinstance(replace_p_by_k(B("pBs", 1)), BPoly)
    assert replace_p_by_k(B("pBs - kBs", 1)).is_zero()


def test_b_words_reject_unknown_letters():
    with pytest.raises(WordError):
        BPoly({"pq": ONE}, 1)


@given(pk_polys, pk_polys, st.booleans())
def test_expansion_is_additive(a, b, wrapped):
    assert expand_core(a + b, ORDER, wrapped) == (
        expand_core(a, ORDER, wrapped) + expand_core(b, ORDER, wrapped)
    )


@given(pk_polys, small_coefficients, st.booleans())
def test_expansion_commutes_with_scaling(a, factor, wrapped):
    assert expand_core(a.scale(factor), ORDER, wrapped) == (
        expand_core(a, ORDER, wrapped).scale(factor)
    )


@given(pk_words, st.booleans())
def test_dropping_s_recovers_the_source_word(word, wrapped):
    expanded = expand_core(PkPoly.monomial(word, 1, ORDER), ORDER, wrapped)
    assert word in expanded
    for w in expanded.words():
        assert w.replace("s", "") == word
        assert b_degree(w) == b_degree(word) + w.count("s")


@pytest.mark.parametrize("series", [SeriesId.P, SeriesId.Ttilde])
def test_named_expansions_keep_the_pk_skeleton(series):
    core = plain_core(series, ORDER)
    for w in expand_named(series, ORDER).words():
        source = w.replace("s", "")
        assert source in core
        assert b_degree(w) >= b_degree(source)
