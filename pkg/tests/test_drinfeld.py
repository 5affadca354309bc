import json
from math import factorial

import pytest
from hypothesis import given, strategies as st

from diffhopf.drinfeld import (
    FiltrationReport,
    delta_map,
    delta_n,
    delta_phi,
    delta_phi_inclusion_exclusion,
    filtration_component,
    iterated_coproduct,
    kappa,
    vee_membership,
)
from diffhopf.hopfdiff import HopfPresentation
from diffhopf.ncpoly import NCPoly, TensorElt, parse_poly

H = HopfPresentation("H", None, 6)


def P(text):
    return parse_poly(text, H.amb)


def test_delta_two_of_a2():
    # [PAPER] δ_n(a_n) = n! a1^{⊗n}; here n = 2
    assert delta_n(H, 2, P("a2")).format() == "2 (a1 ⊗ a1)"


@pytest.mark.parametrize("n", range(1, 6))
def test_delta_top(n):
    a1 = H.gen(1)
    lhs = delta_n(H, n, H.gen(n))
    rhs = a1 if n == 1 else TensorElt.pure(*([a1] * n))
    assert lhs == rhs.scale(factorial(n))


def test_low_orders():
    p = P("3 + a1*a2")
    assert iterated_coproduct(H, 0, p) == H.counit(p)
    assert iterated_coproduct(H, 1, p) == p
    # δ_1 = id - uε
    assert delta_n(H, 1, p) == P("a1*a2")


def test_kappa_examples():
    # [PAPER] κ(α_1) = 1, κ(α_n) = n-1
    assert kappa(H, P("a1")) == 1
    for n in range(2, 6):
        assert kappa(H, H.alpha(n)) == n - 1
    # [TRIVIAL] constants lie in Ker δ_1
    assert kappa(H, P("1")) == 0
    with pytest.raises(ValueError):
        kappa(H, NCPoly.zero(H.amb))


word = st.lists(st.integers(1, 3), min_size=0, max_size=3).map(tuple)


@st.composite
def elements(draw):
    terms = draw(st.dictionaries(st.tuples(word, st.just(0)), st.integers(-3, 3), min_size=1, max_size=3))
    return NCPoly(terms, H.amb)


@given(elements(), st.integers(1, 4), st.data())
def test_pruned_delta_matches_inclusion_exclusion(p, n, data):
    # [DERIVED] the inclusion-exclusion sum over partial coproducts
    phi = data.draw(st.sets(st.integers(1, n), min_size=1))
    assert delta_phi(H, phi, n, p) == delta_phi_inclusion_exclusion(H, phi, n, p)


@given(elements(), st.integers(2, 5))
def test_delta_vanishes_below_its_order(p, n):
    low = NCPoly({k: v for k, v in p.terms.items() if sum(k[0]) < n}, H.amb)
    assert not delta_n(H, n, low)


@given(elements(), st.integers(2, 4))
def test_delta_has_no_unit_factors(p, n):
    for ws, _ in delta_n(H, n, p).terms:
        assert all(ws)


def test_filtration_report_schema():
    rep = filtration_component(H, 3)
    assert isinstance(rep, FiltrationReport)
    data = json.loads(rep.dumps())
    assert data["weight"] == 3
    assert [lv["k"] for lv in data["levels"]] == [0, 1, 2, 3]
    assert all(set(lv) == {"k", "dimD", "dimTheta", "equal"} for lv in data["levels"])
    assert rep.all_equal
    # [DERIVED] D_w contains all of weight w; D_0 meets it trivially
    assert data["levels"][-1]["dimD"] == 4 and data["levels"][0]["dimD"] == 0


def test_membership_certificates():
    # [DERIVED] ħ x1 passes; x2 alone has valuation 0 at δ_1 and 1 at δ_2
    ok = vee_membership(H, NCPoly.gen(1, H.amb).shift_h(1))
    assert ok.member
    bad = vee_membership(H, NCPoly.gen(2, H.amb))
    assert not bad.member and bad.valuations == {1: 0, 2: 1}


def test_delta_map_cache_is_per_presentation():
    assert delta_map(H) is delta_map(HopfPresentation("H", None, 6))
    assert delta_map(H) is not delta_map(HopfPresentation("H", None, 5))
