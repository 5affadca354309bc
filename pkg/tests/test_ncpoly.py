from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from diffhopf.ncpoly import (
    Ambient,
    LaurentCoeff,
    NCPoly,
    ParseError,
    TensorElt,
    compositions,
    echelon_polys,
    kernel_basis,
    nullspace,
    parse_poly,
    rank,
    rref,
    same_span,
    words_of_weight,
)

AMB = Ambient(None, 8)


# --- strategies -------------------------------------------------------------

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)
words = st.lists(st.integers(1, 3), min_size=0, max_size=3).map(tuple)


@st.composite
def polys(draw, hbar=True):
    terms = draw(st.dictionaries(st.tuples(words, st.integers(-1, 1) if hbar else st.just(0)), rationals, max_size=4))
    return NCPoly(terms, AMB)


# --- oracles ----------------------------------------------------------------


def rref_oracle(rows, ncols):
    """Textbook Gauss-Jordan over Fractions."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return pivots, m[:r]


# --- examples ---------------------------------------------------------------


def test_parse_and_format_examples():
    # [TRIVIAL] text syntax round trip
    p = parse_poly("-a2 + 2 a1*a1", AMB)
    assert p.format() == "-a2 + 2 a1*a1"
    assert parse_poly("h^-1*a2", AMB) == NCPoly.word((2,), AMB, hpow=-1)
    assert parse_poly("(a1 + a2)*(a1 - a2)", AMB) == parse_poly("a1*a1 - a1*a2 + a2*a1 - a2*a2", AMB)


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as e:
        parse_poly("a1 + $", AMB)
    assert e.value.pos == 5


def test_truncation_drops_heavy_words():
    amb = Ambient(None, 3)
    a2 = NCPoly.gen(2, amb)
    assert (a2 * a2).is_zero()
    assert NCPoly.gen(1, amb) ** 3 == NCPoly.word((1, 1, 1), amb)


def test_nu_restricts_letters():
    with pytest.raises(ValueError):
        NCPoly.gen(4, Ambient(3, 8))


def test_laurent_coefficients():
    # [TRIVIAL] (1 + ħ)(1 - ħ) = 1 - ħ²
    a = LaurentCoeff({0: 1, 1: 1})
    b = LaurentCoeff({0: 1, 1: -1})
    assert a * b == LaurentCoeff({0: 1, 2: -1})
    assert LaurentCoeff({-1: 2, 3: 1}).valuation() == -1
    assert LaurentCoeff({-1: 2, 3: 1}).evaluate(2) == Fraction(9)


def test_compositions_count():
    # [DERIVED] compositions of w number 2^(w-1); with k parts C(w-1, k-1)
    from math import comb

    for w in range(1, 8):
        assert len(list(compositions(w))) == 2 ** (w - 1)
        for k in range(1, w + 1):
            assert len(list(compositions(w, k))) == comb(w - 1, k - 1)
    assert len(words_of_weight(5, AMB)) == 16


def test_tensor_flip_and_product():
    a1, a2 = NCPoly.gen(1, AMB), NCPoly.gen(2, AMB)
    t = TensorElt.pure(a1, a2)
    assert t.flip() == TensorElt.pure(a2, a1)
    assert t * t == TensorElt.pure(a1 * a1, a2 * a2)


def test_rref_matches_textbook_elimination():
    rows = [[2, 4, 1], [1, 2, 0], [3, 6, Fraction(1, 2)]]
    assert rref(rows, 3) == rref_oracle(rows, 3)
    assert rank(rows, 3) == 2


def test_kernel_basis_example():
    # [DERIVED] δ_2 on weight 2: a2 ↦ 2 a1⊗a1, a1a1 ↦ 2 a1⊗a1, so the kernel is a2 - a1a1
    a2, a11 = NCPoly.gen(2, AMB), NCPoly.word((1, 1), AMB)
    img = TensorElt.pure(NCPoly.gen(1, AMB), NCPoly.gen(1, AMB)).scale(2)
    (k,) = kernel_basis([a2, a11], [img, img])
    assert same_span([k], [a2 - a11])


# --- properties -------------------------------------------------------------


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p + q) - q == p


@given(polys())
def test_format_parse_round_trip(p):
    assert parse_poly(p.format(), AMB) == p


@given(polys(hbar=False), polys(hbar=False))
def test_specialize_is_a_ring_map(p, q):
    assert (p * q).specialize(1) == p.specialize(1) * q.specialize(1)


@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=5))
def test_rref_oracle_agreement(rows):
    assert rref(rows, 4) == rref_oracle([r for r in rows if any(r)], 4)


@given(st.lists(st.dictionaries(st.integers(0, 4), st.integers(-3, 3), max_size=4), min_size=1, max_size=5))
def test_nullspace_vectors_are_in_kernel(cols):
    cols = [{k: v for k, v in c.items() if v} for c in cols]
    for vec in nullspace(cols, list(range(5))):
        for k in range(5):
            assert sum(vec[j] * cols[j].get(k, 0) for j in range(len(cols))) == 0
    r = rank([[c.get(k, 0) for c in cols] for k in range(5)], len(cols))
    assert len(nullspace(cols, list(range(5)))) == len(cols) - r


@given(st.lists(polys(hbar=False), min_size=1, max_size=4))
def test_echelon_spans_input(ps):
    ps = [p for p in ps if p]
    ech = echelon_polys(ps)
    assert same_span(ech, ps)
    assert len(ech) <= len(ps)
