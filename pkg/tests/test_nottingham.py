from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from diffhopf.hopfdiff import CommElt, HopfPresentation, abelianize
from diffhopf.ncpoly import NCPoly
from diffhopf.nottingham import (
    DiffSeries,
    OddDiffSeries,
    compose,
    compose_closed_form,
    invert,
    pair,
    parse_series,
    quotient_project,
    shift_sum_series,
)

M = 5
H = HopfPresentation("H", None, M)


def compose_oracle(f, g):
    """Untruncated polynomial substitution, then drop degrees above M+1.

    Dropping at the end is harmless because ``g`` has no constant term.
    """

    def mul(p, q):
        out = {}
        for i, a in p.items():
            for j, b in q.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return out

    fp = dict(enumerate(f.poly()))
    gp = dict(enumerate(g.poly()))
    total, power = {}, {0: Fraction(1)}
    for k in range(max(fp) + 1):
        if fp.get(k):
            for d, c in power.items():
                total[d] = total.get(d, 0) + fp[k] * c
        power = mul(power, gp)
    return type(f)([total.get(d, 0) for d in range(2, f.bound + 2)])


# --- examples ---------------------------------------------------------------


def test_square_of_x_plus_x2():
    # [TRIVIAL] (x+x²)∘(x+x²) = x + 2x² + 2x³ + x⁴
    f = parse_series("x + x^2", 4)
    assert compose(f, f) == DiffSeries([2, 2, 1, 0])


def test_inverse_has_signed_catalan_coefficients():
    # [DERIVED] the inverse of x + x² is Σ (-1)^n C_n x^{n+1}
    catalan = [comb(2 * n, n) // (n + 1) for n in range(1, 7)]
    inv = invert(parse_series("x + x^2", 6))
    assert list(inv.coeffs) == [(-1) ** n * c for n, c in enumerate(catalan, start=1)]
    assert inv.format() == "x - x^2 + 2 x^3 - 5 x^4 + 14 x^5 - 42 x^6 + 132 x^7"


@pytest.mark.parametrize("ell", range(1, 5))
def test_shift_sum_identity(ell):
    # [DERIVED] (x/(1-x))^{ℓ+1} = Σ_j C(j+ℓ, ℓ) x^{ℓ+1+j}, so a_s = 1 + C(s, ℓ)
    f, g = shift_sum_series(ell, 7)
    c = compose(f, g)
    for s in range(1, 8):
        assert c.coeff(s) == 1 + comb(s, ell)


def test_pair_examples():
    f = parse_series("x + x^2", 3)
    g = parse_series("x + 2 x^2", 3)
    a1, a2 = CommElt.var(1), CommElt.var(2)
    assert pair(a1 * a1, f) == 1
    assert pair(a1 * a2 + a1, g) == 2
    # [DERIVED] a2(f∘g) = 4 by substitution
    H3 = HopfPresentation("H", None, 3)
    delta = abelianize(H3.coproduct(H3.gen(2)))
    assert pair(delta, f, g) == 4
    with pytest.raises(ValueError):
        pair(delta, f)
    with pytest.raises(ValueError):
        pair(CommElt.var(4), f)


def test_parse_series_forms():
    assert parse_series("x - 1/2 x^3") == DiffSeries([0, Fraction(-1, 2)])
    assert parse_series("x+x^2", 4).bound == 4
    assert parse_series("x", 3) == DiffSeries.identity(3)
    for bad in ("", "2x + x^2", "x x^2", "x + $", "x^2"):
        with pytest.raises(ValueError):
            parse_series(bad)


def test_json_round_trip():
    f = DiffSeries([Fraction(1, 3), -2, 0, 5])
    assert DiffSeries.from_json(f.dumps()) == f
    with pytest.raises(ValueError):
        DiffSeries.from_json({"bound": 3, "coeffs": [["1", "1"]]})


def test_odd_series_validation():
    with pytest.raises(ValueError):
        OddDiffSeries([1, 0, 0])
    o = parse_series("x + x^3", 4, odd=True)
    assert isinstance(o, OddDiffSeries)
    assert isinstance(invert(o), OddDiffSeries)
    with pytest.raises(ValueError):
        parse_series("x + x^2", 4, odd=True)


def test_bounds_must_agree():
    with pytest.raises(ValueError):
        compose(DiffSeries.identity(3), DiffSeries.identity(4))
    with pytest.raises(ValueError):
        quotient_project(DiffSeries.identity(3), 4)
    with pytest.raises(ValueError):
        DiffSeries.identity(3).coeff(0)


# --- properties -------------------------------------------------------------

coeff = st.fractions(min_value=-3, max_value=3, max_denominator=3)
series = st.lists(coeff, min_size=M, max_size=M).map(DiffSeries)
odd_series = st.lists(coeff, min_size=M, max_size=M).map(
    lambda cs: OddDiffSeries([c if n % 2 else 0 for n, c in enumerate(cs)])
)


@given(series, series)
def test_substitution_matches_oracle(f, g):
    assert compose(f, g) == compose_oracle(f, g)


@given(series, series)
def test_closed_form_matches_substitution(f, g):
    assert compose_closed_form(f, g) == compose(f, g)


@given(series, series, series)
def test_group_axioms(f, g, h):
    e = DiffSeries.identity(M)
    assert compose(compose(f, g), h) == compose(f, compose(g, h))
    assert compose(e, f) == f == compose(f, e)
    fi = invert(f)
    assert compose(f, fi) == e == compose(fi, f)


word = st.lists(st.integers(1, 3), min_size=1, max_size=3).map(tuple)


@st.composite
def elements(draw):
    terms = draw(st.dictionaries(st.tuples(word, st.just(0)), st.integers(-3, 3), min_size=1, max_size=3))
    return NCPoly(terms, H.amb)


@given(elements(), series, series)
def test_pairing_dualises_the_coproduct(p, f, g):
    # [DERIVED] evaluation is multiplicative, so duality on generators extends
    assert pair(abelianize(H.coproduct(p)), f, g) == pair(abelianize(p), compose(f, g))


@given(elements(), series)
def test_pairing_dualises_the_antipode(p, f):
    assert pair(abelianize(H.antipode(p)), f) == pair(abelianize(p), invert(f))


@given(series, series, st.integers(0, M))
def test_quotient_is_a_morphism(f, g, nu):
    assert quotient_project(compose(f, g), nu) == compose(quotient_project(f, nu), quotient_project(g, nu))


@given(odd_series, odd_series)
def test_odd_series_form_a_subgroup(f, g):
    assert isinstance(compose(f, g), OddDiffSeries)
    assert isinstance(invert(f), OddDiffSeries)
    assert compose(f, g) == compose_oracle(f, g)
