from fractions import Fraction
from itertools import product
from math import comb

import pytest
from hypothesis import given, strategies as st

from diffhopf.hopfdiff import CommElt, HopfPresentation, abelianize, commutative_coproduct
from diffhopf.ncpoly import NCPoly, TensorElt, parse_poly

H = HopfPresentation("H", None, 8)
K = HopfPresentation("K", None, 8)


def P(text, pres=H):
    return parse_poly(text, pres.amb)


def coproduct_oracle(n, binom_top, step=1):
    """``Δ(g_n)`` from the defining sum, enumerating words letter by letter."""
    terms = {(((step * n,), ()), 0): 1, (((), (step * n,)), 0): 1}
    for m in range(1, n):
        t = n - m
        for k in range(1, t + 1):
            c = comb(binom_top(m), k)
            for parts in product(range(1, t + 1), repeat=k):
                if sum(parts) == t:
                    key = (((step * m,), tuple(step * p for p in parts)), 0)
                    terms[key] = terms.get(key, 0) + c
    return {k: v for k, v in terms.items() if v}


@pytest.mark.parametrize("n", range(1, 8))
def test_coproduct_matches_defining_sum(n):
    # [DERIVED] direct enumeration of Q^m_{n-m} = Σ_k C(m+1,k) P^(k)
    got = {k: v for k, v in H.coproduct(H.gen(n)).terms.items()}
    assert got == coproduct_oracle(n, lambda m: m + 1)


@pytest.mark.parametrize("n", range(1, 5))
def test_odd_coproduct_matches_defining_sum(n):
    # [DERIVED] binomials C(2m+1, k) for the odd family
    got = dict(K.coproduct(K.gen(2 * n)).terms)
    assert got == coproduct_oracle(n, lambda m: 2 * m + 1, step=2)


def test_small_coproducts():
    # [PAPER] Δ(a2) = a2⊗1 + 1⊗a2 + 2 a1⊗a1
    a1 = H.gen(1)
    assert H.coproduct(H.gen(2)) == TensorElt.pure(H.gen(2), H.one()) + TensorElt.pure(H.one(), H.gen(2)) + TensorElt.pure(a1, a1).scale(2)
    # [DERIVED] Q^1_2 = 2 a2 + a1a1, Q^2_1 = 3 a1
    assert H.coproduct(H.gen(3)).format() == "(1 ⊗ a3) + 2 (a1 ⊗ a2) + (a1 ⊗ a1*a1) + 3 (a2 ⊗ a1) + (a3 ⊗ 1)"


def test_small_antipodes():
    # [DERIVED] recursion S(a_n) = -a_n - Σ a_m S(Q^m_{n-m})
    assert H.antipode(H.gen(1)) == P("-a1")
    assert H.antipode(H.gen(2)) == P("-a2 + 2 a1*a1")
    assert H.antipode(H.gen(3)) == P("-a3 + 2 a1*a2 + 3 a2*a1 - 5 a1*a1*a1")


def test_q_and_z_examples():
    # [TRIVIAL] Q^0_t = a_t; Q^l_1 = (l+1) a1; Z^l_1 = 0
    for t in range(1, 6):
        assert H.Q_poly(0, t) == H.gen(t)
    for ell in range(6):
        assert H.Q_poly(ell, 1) == H.gen(1).scale(ell + 1)
        assert H.Z_poly(ell, 1).is_zero()
    # [DERIVED] Z^0_t = a_t - a1^t = α_t
    for t in range(2, 6):
        assert H.Z_poly(0, t) == H.alpha(t)


def test_alpha_coefficients():
    # [TRIVIAL] α_n = a_n - a1^n in H
    assert H.alpha(3) == P("a3 - a1*a1*a1")
    # [DERIVED] odd family: α = a_{2n} - ((2n-1)!!/n!) a2^n
    assert K.alpha(4) == P("a4 - 3/2 a2*a2", K)
    assert K.alpha(6) == P("a6 - 5/2 a2*a2*a2", K)


def test_odd_family_rejects_odd_letters():
    with pytest.raises(ValueError):
        K.coproduct(P("a3"))


def test_abelianization_matches_commutative_coproduct():
    # [DERIVED] independent commutative computation
    for n in range(1, 7):
        assert abelianize(H.coproduct(H.gen(n))) == commutative_coproduct(n, 8)


def test_comm_elt_arithmetic():
    x, y = CommElt.var(1), CommElt.var(2)
    assert x * y == y * x
    assert (x + y) * (x - y) == x * x - y * y
    assert (x * y).evaluate([{1: 2, 2: 3}]) == 6
    assert CommElt.from_monomials([[1], [2]]).flip() == CommElt.from_monomials([[2], [1]])


# --- properties -------------------------------------------------------------

word = st.lists(st.integers(1, 3), min_size=0, max_size=3).map(tuple)


@st.composite
def elements(draw):
    terms = draw(st.dictionaries(st.tuples(word, st.just(0)), st.integers(-3, 3), min_size=1, max_size=3))
    return NCPoly(terms, H.amb)


@given(elements(), elements())
def test_coproduct_is_multiplicative(p, q):
    assert H.coproduct(p * q) == H.coproduct(p) * H.coproduct(q)


@given(elements(), elements())
def test_antipode_is_antimultiplicative(p, q):
    assert H.antipode(p * q) == H.antipode(q) * H.antipode(p)


@given(elements())
def test_hopf_axioms_on_random_elements(p):
    d = H.coproduct(p)
    assert H.coproduct_at(d, 0) == H.coproduct_at(d, 1)
    assert H.counit_at(d, 0) == p == H.counit_at(d, 1)
    unit = NCPoly.scalar(H.counit(p), H.amb)
    assert H.multiply(d, left_map=H.antipode) == unit == H.multiply(d, right_map=H.antipode)


@given(elements())
def test_alpha_change_of_variables_round_trip(p):
    assert H.alpha_convert(H.alpha_convert(p, "a->alpha"), "alpha->a") == p


@given(st.integers(0, 6), st.integers(0, 6))
def test_q_evaluation_law(ell, t):
    # [PAPER] Q^l_t(1) = C(l+t, l)
    assert H.evaluate_at_ones(H.Q_poly(ell, t)).evaluate(1) == comb(ell + t, ell)
    # [DERIVED] the odd analog C(2l+t, t)
    assert K.evaluate_at_ones(K.Q_poly(ell, min(t, 4))).evaluate(1) == comb(2 * ell + min(t, 4), min(t, 4))


def test_antipode_recursions_agree():
    for n in range(1, 9):
        assert H.antipode_gen(n) == H.antipode_gen_right(n)
    for n in range(2, 9, 2):
        assert K.antipode_gen(n) == K.antipode_gen_right(n)


def test_evaluate_counts_coefficients():
    assert H.evaluate_at_ones(P("2 a1*a2 - a3 + 1/2")).evaluate(1) == Fraction(3, 2)
