"""Free Lie algebra on generators ``x_n`` (weight ``n``), its Lyndon-Hall basis,
PBW coordinates in the tensor algebra, and two Lie cobrackets.

Hall elements are Lyndon words bracketed by standard factorization. The
total order ⪯ is weight first, then lexicographic on the word.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Iterator, Mapping, Sequence

from .ncpoly import (
    Ambient,
    NCPoly,
    Scalar,
    TensorElt,
    Word,
    compositions,
    default_trunc,
    fmt_rational,
    nullspace,
    rref,
    word_key,
)


class NotLieError(ValueError):
    """Raised when an associative polynomial is not in the free Lie algebra."""


def is_lyndon(w: Word) -> bool:
    """Strictly smaller than every proper rotation (equivalently, every proper suffix)."""
    return bool(w) and all(w < w[i:] for i in range(1, len(w)))


def standard_factorization(w: Word) -> tuple[Word, Word]:
    """``w = u v`` with ``v`` the longest proper Lyndon suffix."""
    if len(w) < 2:
        raise ValueError("a single letter has no factorization")
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise AssertionError("unreachable for Lyndon input")


@total_ordering
class HallElement:
    """A Lyndon word with its standard bracketing."""

    __slots__ = ("word", "_key", "_hash")

    def __init__(self, word: Iterable[int]):
        word = tuple(word)
        if not is_lyndon(word):
            raise ValueError(f"{word} is not a Lyndon word")
        self.word = word
        self._key = (sum(word), word)
        self._hash = hash(word)

    @property
    def weight(self) -> int:
        return self._key[0]

    @property
    def lie_degree(self) -> int:
        return len(self.word)

    @property
    def dminus(self) -> int:
        return sum(n - 1 + (n == 1) for n in self.word)

    @property
    def d(self) -> int:
        return len(self.word) - 1

    @property
    def tau(self) -> int:
        return self.dminus - self.d

    def factors(self) -> tuple[HallElement, HallElement]:
        u, v = standard_factorization(self.word)
        return HallElement(u), HallElement(v)

    def is_generator(self) -> bool:
        return len(self.word) == 1

    def __eq__(self, other) -> bool:
        return isinstance(other, HallElement) and self.word == other.word

    def __lt__(self, other: HallElement) -> bool:
        return self._key < other._key

    def __hash__(self) -> int:
        return self._hash

    def format(self, letter: str = "x") -> str:
        if len(self.word) == 1:
            return f"{letter}{self.word[0]}"
        u, v = self.factors()
        return f"[{u.format(letter)},{v.format(letter)}]"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"HallElement({self.word})"


class PBWMonomial(tuple):
    """A ⪯-non-decreasing tuple of Hall elements."""

    def __new__(cls, factors: Iterable[HallElement] = ()):
        factors = tuple(factors)
        if any(factors[i + 1] < factors[i] for i in range(len(factors) - 1)):
            raise ValueError("PBW factors must be non-decreasing")
        return super().__new__(cls, factors)

    @property
    def tau(self) -> int:
        return sum(h.tau for h in self)

    @property
    def weight(self) -> int:
        return sum(h.weight for h in self)

    def format(self, letter: str = "x") -> str:
        return "*".join(h.format(letter) for h in self) if self else "1"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"PBWMonomial({self.format()})"


def _fmt_terms(items: Sequence[tuple[str, Fraction]]) -> str:
    if not items:
        return "0"
    out = []
    for i, (body, c) in enumerate(items):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        s = body if a == 1 else f"{fmt_rational(a)} {body}"
        if i == 0:
            out.append(("-" if c < 0 else "") + s)
        else:
            out.append(f" {sign} {s}")
    return "".join(out)


class FreeLie:
    """``L_ν`` truncated at weight ``trunc``, realised inside ``T(V_ν)``."""

    def __init__(self, nu: int | None = None, trunc: int | None = None):
        self.nu = nu
        self.trunc = default_trunc() if trunc is None else trunc
        self.amb = Ambient(nu, self.trunc)
        self._hall: dict[int, list[HallElement]] = {}
        self._expansion: dict[HallElement, dict[Word, Fraction]] = {}
        self._pbw: dict[int, list[PBWMonomial]] = {}
        self._inverse: dict[int, tuple[list[Word], list[dict[int, Fraction]]]] = {}
        self._cob: dict[tuple[str, HallElement], TensorElt] = {}

    def __repr__(self) -> str:
        return f"FreeLie(nu={self.nu}, trunc={self.trunc})"

    # bases
    def letters(self) -> list[int]:
        return list(self.amb.letters())

    def hall_of_weight(self, w: int) -> list[HallElement]:
        if w not in self._hall:
            if w < 1 or w > self.trunc:
                self._hall[w] = []
            else:
                ws = [c for c in compositions(w, letters=self.letters()) if is_lyndon(c)]
                self._hall[w] = sorted(HallElement(c) for c in ws)
        return self._hall[w]

    def hall_basis(self, weight_bound: int | None = None, lie_degree_bound: int | None = None) -> list[HallElement]:
        """All Hall elements of weight ≤ bound in ⪯ order."""
        W = self.trunc if weight_bound is None else min(weight_bound, self.trunc)
        out = [h for w in range(1, W + 1) for h in self.hall_of_weight(w)]
        if lie_degree_bound is not None:
            out = [h for h in out if h.lie_degree <= lie_degree_bound]
        return out

    def x(self, n: int) -> HallElement:
        self.amb.check_letter(n)
        return HallElement((n,))

    def hall(self, word: Iterable[int]) -> HallElement:
        return HallElement(word)

    # associative realisation
    def expansion(self, h: HallElement) -> dict[Word, Fraction]:
        """The bracket polynomial of ``h`` in the free associative algebra."""
        if h not in self._expansion:
            if h.is_generator():
                self._expansion[h] = {h.word: Fraction(1)}
            else:
                u, v = h.factors()
                pu, pv = self.expansion(u), self.expansion(v)
                out: dict[Word, Fraction] = {}
                for a, ca in pu.items():
                    for b, cb in pv.items():
                        out[a + b] = out.get(a + b, 0) + ca * cb
                        out[b + a] = out.get(b + a, 0) - ca * cb
                self._expansion[h] = {k: v for k, v in out.items() if v}
        return self._expansion[h]

    def to_poly(self, h: HallElement | LieElement) -> NCPoly:
        if isinstance(h, HallElement):
            return NCPoly({(w, 0): c for w, c in self.expansion(h).items()}, self.amb)
        out: dict = {}
        for b, c in h.terms.items():
            for w, v in self.expansion(b).items():
                out[(w, 0)] = out.get((w, 0), 0) + c * v
        return NCPoly({k: v for k, v in out.items() if v}, self.amb)

    def lie_coordinates(self, poly: Mapping[Word, Scalar] | NCPoly) -> dict[HallElement, Fraction]:
        """Hall coordinates of a Lie polynomial by peeling off lex-minimal words.

        Each ``P_l`` is ``l`` plus lexicographically larger rearrangements, so
        the smallest surviving word is always the next Lyndon word to remove.
        """
        if isinstance(poly, NCPoly):
            if not poly.is_h_free():
                raise ValueError("Lie coordinates need ħ-free input")
            poly = {w: c for (w, _), c in poly.terms.items()}
        rest = {w: Fraction(c) for w, c in poly.items() if c}
        out: dict[HallElement, Fraction] = {}
        while rest:
            w = min(rest)
            if not is_lyndon(w):
                raise NotLieError(f"word {w} left over: input is not a Lie polynomial")
            h = HallElement(w)
            c = rest[w]
            out[h] = c
            for u, v in self.expansion(h).items():
                nv = rest.get(u, 0) - c * v
                if nv:
                    rest[u] = nv
                else:
                    rest.pop(u, None)
        return out

    def element(self, terms: Mapping[HallElement, Scalar] | HallElement) -> LieElement:
        if isinstance(terms, HallElement):
            terms = {terms: 1}
        return LieElement(self, terms)

    def from_poly(self, p: NCPoly | Mapping[Word, Scalar]) -> LieElement:
        return LieElement(self, self.lie_coordinates(p))

    def bracket(self, u: LieElement | HallElement, v: LieElement | HallElement) -> LieElement:
        pu = self.to_poly(u)
        pv = self.to_poly(v)
        return self.from_poly(pu * pv - pv * pu)

    # PBW
    def pbw_monomials(self, w: int) -> list[PBWMonomial]:
        """⪯-non-decreasing products of Hall elements of total weight ``w``."""
        if w not in self._pbw:
            basis = self.hall_basis(w)

            def rec(rest: int, start: int) -> Iterator[tuple]:
                if rest == 0:
                    yield ()
                    return
                for i in range(start, len(basis)):
                    h = basis[i]
                    if h.weight > rest:
                        break
                    for tail in rec(rest - h.weight, i):
                        yield (h,) + tail

            self._pbw[w] = [PBWMonomial(m) for m in rec(w, 0)]
        return self._pbw[w]

    def pbw_expand(self, m: PBWMonomial) -> dict[Word, Fraction]:
        out: dict[Word, Fraction] = {(): Fraction(1)}
        for h in m:
            e = self.expansion(h)
            nxt: dict[Word, Fraction] = {}
            for a, ca in out.items():
                for b, cb in e.items():
                    nxt[a + b] = nxt.get(a + b, 0) + ca * cb
            out = nxt
        return {k: v for k, v in out.items() if v}

    def pbw_poly(self, m: PBWMonomial) -> NCPoly:
        return NCPoly({(w, 0): c for w, c in self.pbw_expand(m).items()}, self.amb)

    def _inverse_matrix(self, w: int):
        if w not in self._inverse:
            monos = self.pbw_monomials(w)
            words = sorted(compositions(w, letters=self.letters()), key=word_key)
            col = {u: j for j, u in enumerate(words)}
            n = len(words)
            if len(monos) != n:
                raise AssertionError("PBW count differs from word count")
            rows = []
            for i, m in enumerate(monos):
                row = [Fraction(0)] * (2 * n)
                for u, c in self.pbw_expand(m).items():
                    row[col[u]] = c
                row[n + i] = Fraction(1)
                rows.append(row)
            pivots, red = rref(rows, 2 * n)
            if pivots[:n] != list(range(n)):
                raise AssertionError("PBW expansions are not a basis")
            inv = [{i: r[n + i] for i in range(n) if r[n + i]} for r in red[:n]]
            self._inverse[w] = (words, inv)
        return self._inverse[w]

    def pbw_decompose(self, p: NCPoly) -> dict[tuple[PBWMonomial, int], Fraction]:
        """Coordinates of ``p`` in the PBW basis, keyed ``(monomial, ħ-power)``."""
        out: dict = {}
        for w in sorted(p.weights()):
            comp = p.graded_component(w)
            if w == 0:
                for (_, e), c in comp.terms.items():
                    out[(PBWMonomial(), e)] = c
                continue
            words, inv = self._inverse_matrix(w)
            idx = {u: j for j, u in enumerate(words)}
            monos = self.pbw_monomials(w)
            for (u, e), c in comp.terms.items():
                for i, v in inv[idx[u]].items():
                    key = (monos[i], e)
                    out[key] = out.get(key, 0) + c * v
        return {k: v for k, v in out.items() if v}

    def pbw_reassemble(self, coords: Mapping[tuple[PBWMonomial, int], Scalar]) -> NCPoly:
        out: dict = {}
        for (m, e), c in coords.items():
            for u, v in self.pbw_expand(m).items():
                out[(u, e)] = out.get((u, e), 0) + c * v
        return NCPoly({k: v for k, v in out.items() if v}, self.amb)

    # gradings on H through the α-generators
    def alpha_to_a(self, p: NCPoly) -> NCPoly:
        from .hopfdiff import HopfPresentation

        return HopfPresentation("H", self.nu, self.trunc).alpha_convert(p, "alpha->a")

    def a_to_alpha(self, p: NCPoly) -> NCPoly:
        from .hopfdiff import HopfPresentation

        return HopfPresentation("H", self.nu, self.trunc).alpha_convert(p, "a->alpha")

    def alpha_b(self, h: HallElement | PBWMonomial) -> NCPoly:
        """``α_b`` (or an ordered product of them) written in the ``a``-generators of H."""
        if isinstance(h, HallElement):
            return self.alpha_to_a(self.to_poly(h))
        return self.alpha_to_a(self.pbw_poly(h))

    def tau_degree(self, p: NCPoly, space: str = "H") -> int:
        """Largest τ among PBW monomials supporting ``p``.

        ``space="H"`` reads ``p`` in the ``a``-generators and first rewrites it
        in the α's; ``space="U"`` reads ``p`` directly as an element of U(L).
        """
        if not p:
            raise ValueError("τ is undefined on 0")
        q = self.a_to_alpha(p) if space == "H" else p
        return max(m.tau for m, _ in self.pbw_decompose(q))

    def theta_basis(self, w: int, k: int) -> list[NCPoly]:
        """``Θ_k`` at weight ``w``: the α-PBW monomials with τ ≤ k, in a-generators."""
        return [self.alpha_b(m) for m in self.pbw_monomials(w) if m.tau <= k]

    # cobrackets
    def _cobracket_gen(self, which: str, n: int) -> TensorElt:
        amb = self.amb
        out = TensorElt.zero(2, amb)

        def wedge(i: int, j: int, c: int) -> TensorElt:
            xi, xj = NCPoly.gen(i, amb), NCPoly.gen(j, amb)
            return (TensorElt.pure(xi, xj) - TensorElt.pure(xj, xi)).scale(c)

        if which == "bullet":
            for ell in range(1, n):
                out = out + wedge(ell, n - ell, ell + 1)
        elif which == "star":
            if n >= 3:
                out = wedge(n - 1, 1, n - 2)
        else:
            raise ValueError(f"unknown cobracket {which!r}")
        return out

    def _prim(self, h: HallElement) -> TensorElt:
        p = self.to_poly(h)
        one = NCPoly.one(self.amb)
        return TensorElt.pure(p, one) + TensorElt.pure(one, p)

    def cobracket_assoc(self, h: HallElement, which: str) -> TensorElt:
        """δ(h) as an antisymmetric tensor of associative polynomials."""
        key = (which, h)
        if key not in self._cob:
            if h.is_generator():
                val = self._cobracket_gen(which, h.word[0])
            else:
                u, v = h.factors()
                val = self._prim(u).commutator(self.cobracket_assoc(v, which)) - self._prim(v).commutator(
                    self.cobracket_assoc(u, which)
                )
            self._cob[key] = val
        return self._cob[key]

    def tensor_coordinates(self, t: TensorElt) -> dict[tuple[HallElement, ...], Fraction]:
        """Hall coordinates of an element of ``L^{⊗r}`` given by words."""
        if not t.is_h_free():
            raise ValueError("tensor has ħ-content")
        cur: dict[tuple, Fraction] = {ws: c for (ws, _), c in t.terms.items()}
        for pos in range(t.rank):
            groups: dict[tuple, dict[Word, Fraction]] = {}
            for key, c in cur.items():
                rest = key[:pos] + key[pos + 1 :]
                groups.setdefault(rest, {})[key[pos]] = c
            nxt: dict[tuple, Fraction] = {}
            for rest, poly in groups.items():
                for h, c in self.lie_coordinates(poly).items():
                    k = rest[:pos] + (h,) + rest[pos:]
                    nxt[k] = nxt.get(k, 0) + c
            cur = {k: v for k, v in nxt.items() if v}
        return cur

    def cobracket(self, x: LieElement | HallElement, which: str = "bullet") -> LieTensor:
        """δ_• (``which="bullet"``) or δ_* (``which="star"``), extended as a 1-cocycle."""
        if isinstance(x, HallElement):
            x = self.element(x)
        total = TensorElt.zero(2, self.amb)
        for h, c in x.terms.items():
            total = total + self.cobracket_assoc(h, which).scale(c)
        return LieTensor(self, self.tensor_coordinates(total))

    def cobracket_bullet(self, x) -> LieTensor:
        return self.cobracket(x, "bullet")

    def cobracket_star(self, x) -> LieTensor:
        return self.cobracket(x, "star")

    def cobracket_kernel(self, w: int, which: str = "bullet") -> list[LieElement]:
        """Basis of ``Ker δ`` inside the weight-``w`` slice, in reduced echelon form."""
        basis = self.hall_of_weight(w)
        cols = [dict(self.cobracket(h, which).terms) for h in basis]
        vecs = nullspace(cols)
        return [LieElement(self, {basis[i]: c for i, c in enumerate(v) if c}) for v in vecs]

    def subalgebra_slice(self, generators: Sequence[int], w: int) -> list[LieElement]:
        """Hall elements in the letters ``generators`` of weight ``w``: a basis of
        that slice of the free Lie subalgebra they generate."""
        allowed = set(generators)
        return [self.element(h) for h in self.hall_of_weight(w) if set(h.word) <= allowed]

    def abelian_cobracket(self, n: int, which: str = "bullet") -> dict[tuple[int, int], Fraction]:
        """The Lie coalgebra induced on ``L/[L,L]``, evaluated on ``x_n``.

        ``[L,L]`` is a coideal for a 1-cocycle cobracket, so dropping every
        term with a bracket factor gives a well-defined map ``V → V∧V``.
        """
        t = self.cobracket(self.x(n), which)
        return {
            (u.word[0], v.word[0]): c for (u, v), c in t.terms.items() if u.is_generator() and v.is_generator()
        }

    def cometabelian_defect(self, n: int, which: str = "bullet") -> dict[tuple[int, ...], Fraction]:
        """``(δ̄ ⊗ δ̄) δ̄ (x_n)`` in ``V^{⊗4}``.

        It vanishes for every ``n`` exactly when the dual Lie algebra of the
        induced coalgebra is metabelian. A Lie bialgebra isomorphism induces a
        linear isomorphism intertwining the two defects, so this property is
        an isomorphism invariant.
        """
        out: dict[tuple[int, ...], Fraction] = {}
        for (i, j), c in self.abelian_cobracket(n, which).items():
            for (a, b), c1 in self.abelian_cobracket(i, which).items():
                for (d, e), c2 in self.abelian_cobracket(j, which).items():
                    k = (a, b, d, e)
                    out[k] = out.get(k, 0) + c * c1 * c2
        return {k: v for k, v in out.items() if v}

    def adjoint_action(self, x: HallElement | LieElement, t: LieTensor) -> LieTensor:
        """``x.t`` on ``L ⊗ L``: ``[x,a]⊗b + a⊗[x,b]``."""
        if isinstance(x, HallElement):
            x = self.element(x)
        px = self.to_poly(x)
        one = NCPoly.one(self.amb)
        prim = TensorElt.pure(px, one) + TensorElt.pure(one, px)
        return LieTensor(self, self.tensor_coordinates(prim.commutator(t.to_assoc())))


class LieElement:
    """Finite combination of Hall elements with rational coefficients."""

    __slots__ = ("lie", "terms")

    def __init__(self, lie: FreeLie, terms: Mapping[HallElement, Scalar]):
        self.lie = lie
        self.terms = {h: Fraction(c) for h, c in terms.items() if c}

    def __add__(self, other: LieElement) -> LieElement:
        out = dict(self.terms)
        for h, c in other.terms.items():
            out[h] = out.get(h, 0) + c
        return LieElement(self.lie, out)

    def __neg__(self) -> LieElement:
        return LieElement(self.lie, {h: -c for h, c in self.terms.items()})

    def __sub__(self, other: LieElement) -> LieElement:
        return self + (-other)

    def scale(self, c: Scalar) -> LieElement:
        return LieElement(self.lie, {h: v * c for h, v in self.terms.items()})

    def bracket(self, other: LieElement) -> LieElement:
        return self.lie.bracket(self, other)

    def __eq__(self, other) -> bool:
        return isinstance(other, LieElement) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def weights(self) -> set[int]:
        return {h.weight for h in self.terms}

    def tau_values(self) -> set[int]:
        return {h.tau for h in self.terms}

    def format(self, letter: str = "x") -> str:
        items = sorted(self.terms.items(), key=lambda kv: kv[0])
        return _fmt_terms([(h.format(letter), c) for h, c in items])

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"LieElement({self})"


class LieTensor:
    """Element of ``L^{⊗r}`` in Hall coordinates."""

    __slots__ = ("lie", "terms", "rank")

    def __init__(self, lie: FreeLie, terms: Mapping[tuple[HallElement, ...], Scalar], rank: int = 2):
        self.lie = lie
        self.terms = {k: Fraction(c) for k, c in terms.items() if c}
        self.rank = len(next(iter(self.terms))) if self.terms else rank

    def __add__(self, other: LieTensor) -> LieTensor:
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return LieTensor(self.lie, out, self.rank)

    def __neg__(self) -> LieTensor:
        return LieTensor(self.lie, {k: -c for k, c in self.terms.items()}, self.rank)

    def __sub__(self, other: LieTensor) -> LieTensor:
        return self + (-other)

    def scale(self, c: Scalar) -> LieTensor:
        return LieTensor(self.lie, {k: v * c for k, v in self.terms.items()}, self.rank)

    def __eq__(self, other) -> bool:
        return isinstance(other, LieTensor) and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def permute(self, perm: Sequence[int]) -> LieTensor:
        """Factor ``i`` of the result is factor ``perm[i]`` of ``self``."""
        return LieTensor(self.lie, {tuple(k[p] for p in perm): c for k, c in self.terms.items()}, self.rank)

    def flip(self) -> LieTensor:
        return self.permute((1, 0))

    def is_antisymmetric(self) -> bool:
        return self.rank == 2 and not (self + self.flip())

    def to_assoc(self) -> TensorElt:
        amb = self.lie.amb
        out = TensorElt.zero(self.rank, amb)
        for k, c in self.terms.items():
            out = out + TensorElt.pure(*(self.lie.to_poly(h) for h in k)).scale(c)
        return out

    def wedge_terms(self) -> list[tuple[HallElement, HallElement, Fraction]]:
        """``(u, v, c)`` with ``u ≻ v`` such that the tensor is ``Σ c u∧v``."""
        if not self.is_antisymmetric():
            raise ValueError("tensor is not antisymmetric")
        out = [(u, v, c) for (u, v), c in self.terms.items() if v < u]
        return sorted(out, key=lambda t: (t[0], t[1]), reverse=True)

    def tau_values(self) -> set[int]:
        return {sum(h.tau for h in k) for k in self.terms}

    def format(self, letter: str = "x") -> str:
        if self.rank == 2 and self.is_antisymmetric():
            return _fmt_terms(
                [(f"({u.format(letter)} ∧ {v.format(letter)})", c) for u, v, c in self.wedge_terms()]
            )
        items = sorted(self.terms.items(), key=lambda kv: kv[0])
        return _fmt_terms([("(" + " ⊗ ".join(h.format(letter) for h in k) + ")", c) for k, c in items])

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"LieTensor({self})"

