import pytest
from hypothesis import given, strategies as st

from diffhopf.freelie import FreeLie, HallElement, LieElement, NotLieError, is_lyndon, standard_factorization
from diffhopf.ncpoly import NCPoly, compositions

L = FreeLie(None, 6)


def lyndon_oracle(w):
    """Strictly smaller than all proper rotations."""
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


def test_lyndon_test_matches_rotation_oracle():
    for n in range(1, 9):
        for w in compositions(n):
            assert is_lyndon(w) == lyndon_oracle(w), w


def test_hall_counts():
    # [DERIVED] brute-force count of Lyndon compositions
    for w in range(1, 7):
        expected = sum(1 for c in compositions(w) if lyndon_oracle(c))
        assert len(L.hall_of_weight(w)) == expected
    assert [len(L.hall_of_weight(w)) for w in range(1, 7)] == [1, 1, 2, 3, 6, 9]


def test_standard_factorization():
    # [TRIVIAL] w = uv with v the longest proper Lyndon suffix
    assert standard_factorization((1, 1, 2)) == ((1,), (1, 2))
    assert standard_factorization((1, 2, 2)) == ((1, 2), (2,))
    for n in range(2, 8):
        for w in compositions(n):
            if len(w) > 1 and is_lyndon(w):
                u, v = standard_factorization(w)
                assert u + v == w and is_lyndon(u) and is_lyndon(v)


def test_hall_formatting_and_gradings():
    h = HallElement((1, 1, 2))
    assert h.format() == "[x1,[x1,x2]]"
    assert h.weight == 4 and h.lie_degree == 3
    # [DERIVED] τ(x1) = 1, τ(x_n) = n-1, τ of a bracket from the table of δ_•
    assert HallElement((1,)).tau == 1
    assert HallElement((5,)).tau == 4
    assert HallElement((1, 2)).tau == 1
    assert HallElement((2, 3)).tau == 2


def test_pbw_dimension_matches_free_algebra():
    # [DERIVED] U(L) = T(V), so PBW monomials of weight w number 2^(w-1)
    for w in range(1, 7):
        assert len(L.pbw_monomials(w)) == 2 ** (w - 1)


def test_from_poly_rejects_non_lie():
    with pytest.raises(NotLieError):
        L.from_poly(NCPoly.word((1, 2), L.amb))


def test_cobracket_examples():
    x = L.x
    # [PAPER] δ_*(x5) = 3 x4 ∧ x1
    assert L.cobracket(x(5), "star").format() == "3 (x4 ∧ x1)"
    # [DERIVED] δ_•(x3) = 2 x1∧x2 + 3 x2∧x1 = x2∧x1
    assert L.cobracket(x(3), "bullet").terms == {(x(2), x(1)): 1, (x(1), x(2)): -1}
    # [TRIVIAL] x1 and x2 are in both kernels
    for n in (1, 2):
        assert not L.cobracket(x(n), "bullet") and not L.cobracket(x(n), "star")


def test_cometabelian_defect_separates_the_cobrackets():
    # [DERIVED] every δ_* term contains x1 and δ_*(x1) = 0, so the defect vanishes
    big = FreeLie(None, 8)
    assert all(not big.cometabelian_defect(n, "star") for n in range(1, 9))
    assert big.cometabelian_defect(7, "bullet")


# --- properties -------------------------------------------------------------

hall4 = L.hall_basis(4)


@st.composite
def lie_elements(draw):
    terms = draw(st.dictionaries(st.sampled_from(hall4), st.integers(-3, 3), min_size=1, max_size=3))
    return LieElement(L, terms)


@given(lie_elements(), lie_elements())
def test_bracket_is_antisymmetric_and_realised_by_commutators(u, v):
    assert L.bracket(u, v) == -L.bracket(v, u)
    # may be truncated at weight 6; the commutator is truncated the same way
    assert L.to_poly(L.bracket(u, v)) == L.to_poly(u).commutator(L.to_poly(v))


@given(lie_elements(), lie_elements(), lie_elements())
def test_jacobi(u, v, w):
    br = L.bracket
    assert not (br(u, br(v, w)) + br(v, br(w, u)) + br(w, br(u, v)))


@given(lie_elements())
def test_lie_coordinates_round_trip(x):
    assert L.from_poly(L.to_poly(x)) == x


@given(st.dictionaries(st.lists(st.integers(1, 3), min_size=1, max_size=3).map(tuple), st.integers(-3, 3), max_size=4))
def test_pbw_decomposition_round_trip(terms):
    p = NCPoly({(w, 0): c for w, c in terms.items()}, L.amb)
    coords = L.pbw_decompose(p)
    assert L.pbw_reassemble(coords) == p


@given(lie_elements(), lie_elements(), st.sampled_from(["bullet", "star"]))
def test_cobracket_cocycle(u, v, which):
    lhs = L.cobracket(L.bracket(u, v), which)
    rhs = L.adjoint_action(u, L.cobracket(v, which)) - L.adjoint_action(v, L.cobracket(u, which))
    assert lhs == rhs


@given(lie_elements(), st.sampled_from(["bullet", "star"]))
def test_cobracket_is_antisymmetric(x, which):
    assert L.cobracket(x, which).is_antisymmetric()


def test_alpha_grading_round_trip():
    for w in range(1, 5):
        for m in L.pbw_monomials(w):
            p = L.alpha_b(m)
            assert L.alpha_to_a(L.a_to_alpha(p)) == p
            assert L.tau_degree(p) == m.tau
