"""Hopf structure of the non-commutative algebra of formal diffeomorphisms.

Two families are supported. ``H`` has one generator ``a_n`` of weight ``n``
for each ``n``. ``K`` (the odd quotient) keeps only ``a_2, a_4, ...``, with
odd-family binomials ``C(2l+1, k)`` in place of ``C(l+1, k)``. In both,

    Δ(g_n) = g_n ⊗ 1 + 1 ⊗ g_n + Σ_{m<n} g_m ⊗ Q^m_{n-m}

where ``g_n`` is ``a_n`` (family H) or ``a_{2n}`` (family K).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial, prod
from typing import Iterable, Mapping, Sequence

from .ncpoly import (
    Ambient,
    LaurentCoeff,
    NCPoly,
    Scalar,
    TensorElt,
    Word,
    compositions,
    default_trunc,
    fmt_rational,
    word_key,
)

FAMILIES = ("H", "K")


class HopfPresentation:
    """One of the two families, truncated at generator bound ``nu`` and weight ``trunc``."""

    def __init__(self, family: str = "H", nu: int | None = None, trunc: int | None = None):
        family = {"full": "H", "odd": "K"}.get(family, family)
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}")
        self.family = family
        self.trunc = default_trunc() if trunc is None else trunc
        self.nu = nu
        self.amb = Ambient(nu, self.trunc)
        self._delta_gen: dict[int, TensorElt] = {}
        self._anti_gen: dict[int, NCPoly] = {}
        self._q: dict[tuple[int, int], NCPoly] = {}
        self._p: dict[tuple[int, int], NCPoly] = {}

    def __eq__(self, other) -> bool:
        return isinstance(other, HopfPresentation) and (self.family, self.nu, self.trunc) == (
            other.family,
            other.nu,
            other.trunc,
        )

    def __hash__(self) -> int:
        return hash((self.family, self.nu, self.trunc))

    def __repr__(self) -> str:
        return f"HopfPresentation({self.family!r}, nu={self.nu}, trunc={self.trunc})"

    # generators
    @property
    def step(self) -> int:
        """Weight of the first generator: 1 for H, 2 for K."""
        return 1 if self.family == "H" else 2

    def letter(self, i: int) -> int:
        """Letter of the ``i``-th generator."""
        return self.step * i

    def index(self, letter: int) -> int:
        if letter % self.step:
            raise ValueError(f"a{letter} is not a generator of family {self.family}")
        return letter // self.step

    def generator_letters(self) -> list[int]:
        return [n for n in self.amb.letters() if n % self.step == 0]

    def gen(self, letter: int) -> NCPoly:
        self.index(letter)
        return NCPoly.gen(letter, self.amb)

    def one(self) -> NCPoly:
        return NCPoly.one(self.amb)

    def check(self, p: NCPoly) -> None:
        if p.amb != self.amb:
            raise ValueError(f"element lives in {p.amb}, expected {self.amb}")
        for w, _ in p.terms:
            for n in w:
                self.index(n)

    def _binom_top(self, ell: int) -> int:
        return ell + 1 if self.family == "H" else 2 * ell + 1

    # polynomial families
    def P_poly(self, t: int, k: int) -> NCPoly:
        """Sum of ``g_{j1}···g_{jk}`` over compositions ``j1+…+jk = t``."""
        if k < 1 or k > t:
            raise ValueError("need 1 <= k <= t")
        if (t, k) in self._p:
            return self._p[(t, k)]
        s = self.step
        letters = [i for i in range(1, t + 1) if self.amb.nu is None or s * i <= self.amb.nu]
        terms = {(tuple(s * j for j in comp), 0): Fraction(1) for comp in compositions(t, k, letters)}
        self._p[(t, k)] = NCPoly(terms, self.amb)
        return self._p[(t, k)]

    def Q_poly(self, ell: int, t: int) -> NCPoly:
        """``Σ_k C(top, k) P^{(k)}_t`` with ``top = ell+1`` (H) or ``2 ell+1`` (K)."""
        if t < 0 or ell < 0:
            raise ValueError("Q is defined for non-negative indices")
        key = (ell, t)
        if key not in self._q:
            if t == 0:
                out = self.one()
            else:
                top = self._binom_top(ell)
                out = NCPoly.zero(self.amb)
                for k in range(1, t + 1):
                    c = comb(top, k)
                    if c:
                        out = out + self.P_poly(t, k).scale(c)
            self._q[key] = out
        return self._q[key]

    def Z_poly(self, ell: int, t: int) -> NCPoly:
        """``Q^ell_t - C(top+t-1, t) g_1^t``: Q with its pure ``g_1``-power removed."""
        if t < 1:
            raise ValueError("Z is defined for t >= 1")
        q = self.Q_poly(ell, t)
        top = self._binom_top(ell)
        return q - self.gen(self.step) ** t * comb(top + t - 1, t)

    # Hopf structure
    def coproduct_gen(self, letter: int) -> TensorElt:
        if letter not in self._delta_gen:
            i = self.index(letter)
            g = self.gen(letter)
            one = self.one()
            out = TensorElt.pure(g, one) + TensorElt.pure(one, g)
            for m in range(1, i):
                out = out + TensorElt.pure(self.gen(self.letter(m)), self.Q_poly(m, i - m))
            self._delta_gen[letter] = out
        return self._delta_gen[letter]

    def coproduct(self, p: NCPoly) -> TensorElt:
        """Δ extended multiplicatively; a graded algebra morphism into rank 2."""
        self.check(p)
        return _apply_morphism(p, self.coproduct_gen, 2, self.amb)

    def counit(self, p: NCPoly) -> LaurentCoeff:
        return p.constant_term()

    def antipode_gen(self, letter: int) -> NCPoly:
        """``S(g_n) = -g_n - Σ_m g_m S(Q^m_{n-m})``."""
        if letter not in self._anti_gen:
            i = self.index(letter)
            out = -self.gen(letter)
            for m in range(1, i):
                out = out - self.gen(self.letter(m)) * self.antipode(self.Q_poly(m, i - m))
            self._anti_gen[letter] = out
        return self._anti_gen[letter]

    def antipode_gen_right(self, letter: int) -> NCPoly:
        """Independent recursion ``S(g_n) = -g_n - Σ_m S(g_m) Q^m_{n-m}``."""
        memo: dict[int, NCPoly] = {}

        def rec(j: int) -> NCPoly:
            if j not in memo:
                out = -self.gen(self.letter(j))
                for m in range(1, j):
                    out = out - rec(m) * self.Q_poly(m, j - m)
                memo[j] = out
            return memo[j]

        return rec(self.index(letter))

    def antipode(self, p: NCPoly) -> NCPoly:
        """S extended as an algebra anti-morphism."""
        self.check(p)
        out: dict = {}
        for (w, e), c in p.terms.items():
            prod = self.one()
            for n in reversed(w):
                prod = prod * self.antipode_gen(n)
            for k, v in prod.terms.items():
                key = (k[0], k[1] + e)
                out[key] = out.get(key, 0) + c * v
        return NCPoly({k: v for k, v in out.items() if v}, self.amb)

    # tensor helpers
    def coproduct_at(self, t: TensorElt, pos: int) -> TensorElt:
        """Apply Δ to factor ``pos`` of a tensor, raising its rank by one."""
        out: dict = {}
        cache: dict[Word, TensorElt] = {}
        for (ws, e), c in t.terms.items():
            w = ws[pos]
            if w not in cache:
                cache[w] = self.coproduct(NCPoly({(w, 0): Fraction(1)}, self.amb, clean=True))
            for (pair, e2), c2 in cache[w].terms.items():
                key = (ws[:pos] + pair + ws[pos + 1 :], e + e2)
                out[key] = out.get(key, 0) + c * c2
        return TensorElt(t.rank + 1, {k: v for k, v in out.items() if v}, self.amb)

    def counit_at(self, t: TensorElt, pos: int) -> TensorElt | NCPoly:
        """Apply ε to factor ``pos``; a rank-1 result is returned as NCPoly."""
        out: dict = {}
        for (ws, e), c in t.terms.items():
            if ws[pos]:
                continue
            key = (ws[:pos] + ws[pos + 1 :], e)
            out[key] = out.get(key, 0) + c
        out = {k: v for k, v in out.items() if v}
        if t.rank == 2:
            return NCPoly({(ws[0], e): v for (ws, e), v in out.items()}, self.amb)
        return TensorElt(t.rank - 1, out, self.amb)

    def multiply(self, t: TensorElt, left_map=None, right_map=None) -> NCPoly:
        """``m ∘ (f ⊗ g)`` on a rank-2 tensor; maps act on single words."""
        out = NCPoly.zero(self.amb)
        for (ws, e), c in t.terms.items():
            u, v = ws
            pu = NCPoly({(u, 0): Fraction(1)}, self.amb, clean=True)
            pv = NCPoly({(v, 0): Fraction(1)}, self.amb, clean=True)
            if left_map is not None:
                pu = left_map(pu)
            if right_map is not None:
                pv = right_map(pv)
            out = out + (pu * pv).scale(c, e)
        return out

    # change of generators
    def alpha_coefficient(self, i: int) -> Fraction:
        """``c_i`` in ``α_{g_i} = g_i - c_i g_1^i``.

        ``c_i = 1`` for family H. For K it is ``(2i-1)!!/i!``, the ratio of
        ``δ_i(g_i)`` to ``δ_i(g_1^i)``, so that ``α`` lands in ``Ker δ_i``
        exactly as ``a_n - a_1^n`` does in H.
        """
        if self.family == "H":
            return Fraction(1)
        return Fraction(prod(range(1, 2 * i, 2)), factorial(i))

    def alpha_convert(self, p: NCPoly, direction: str = "a->alpha") -> NCPoly:
        """Rewrite between ``g_n`` and ``α_n = g_n - c_n g_1^n`` (``α_1 = g_1``).

        Elements in the α-system use the same letters, read as α's.
        """
        g1 = self.step
        one_letter = self.gen(g1)
        if direction in ("a->alpha", "to_alpha"):
            sign = 1
        elif direction in ("alpha->a", "from_alpha"):
            sign = -1
        else:
            raise ValueError(f"unknown direction {direction!r}")

        def image(n: int) -> NCPoly:
            if n == g1:
                return one_letter
            i = self.index(n)
            return self.gen(n) + (one_letter**i).scale(sign * self.alpha_coefficient(i))

        return p.substitute(image)

    def alpha(self, letter: int) -> NCPoly:
        """``α_n`` written in the ``g``-generators."""
        return self.alpha_convert(self.gen(letter), "alpha->a")

    # abelianization and the odd projection
    def abelianize(self, p: NCPoly | TensorElt) -> CommElt:
        return abelianize(p)

    def odd_projection(self, p: NCPoly, target: HopfPresentation | None = None) -> NCPoly:
        """The quotient map onto family K: odd letters go to zero."""
        if self.family != "H":
            raise ValueError("odd projection starts from family H")
        target = target or HopfPresentation("K", self.nu, self.trunc)
        terms = {k: v for k, v in p.terms.items() if all(n % 2 == 0 for n in k[0])}
        return NCPoly(terms, target.amb)

    def odd_projection_tensor(self, t: TensorElt, target: HopfPresentation | None = None) -> TensorElt:
        target = target or HopfPresentation("K", self.nu, self.trunc)
        terms = {
            k: v for k, v in t.terms.items() if all(n % 2 == 0 for w in k[0] for n in w)
        }
        return TensorElt(t.rank, terms, target.amb)

    def basis(self, w: int) -> list[Word]:
        """Words in the generators of weight exactly ``w``."""
        if w > self.trunc:
            return []
        return sorted(compositions(w, letters=self.generator_letters()), key=word_key)

    def evaluate_at_ones(self, p: NCPoly) -> LaurentCoeff:
        """Image under the character sending every generator to 1."""
        out: dict[int, Fraction] = {}
        for (_, e), c in p.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentCoeff(out)


def _apply_morphism(p: NCPoly, gen_image, rank: int, amb: Ambient) -> TensorElt:
    """Extend ``gen_image`` (letter → rank-r tensor) multiplicatively over ``p``."""
    unit = TensorElt.unit(rank, amb)
    prefix: dict[Word, TensorElt] = {(): unit}
    out: dict = {}
    for (w, e), c in p.terms.items():
        prod = prefix.get(w)
        if prod is None:
            prod = unit
            for i, n in enumerate(w):
                key = w[: i + 1]
                nxt = prefix.get(key)
                if nxt is None:
                    nxt = prod * gen_image(n)
                    prefix[key] = nxt
                prod = nxt
        for (ws, e2), v in prod.terms.items():
            k = (ws, e + e2)
            out[k] = out.get(k, 0) + c * v
    return TensorElt(rank, {k: v for k, v in out.items() if v}, amb)


# --------------------------------------------------------------------------
# Commutative images


def _mono(vars_: Iterable) -> tuple:
    counts: dict = {}
    for v in vars_:
        counts[v] = counts.get(v, 0) + 1
    return tuple(sorted(counts.items()))


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    counts = dict(m1)
    for v, k in m2:
        counts[v] = counts.get(v, 0) + k
    return tuple(sorted(counts.items()))


class CommElt:
    """Element of a tensor power of a commutative polynomial algebra.

    A monomial is an exponent vector stored as a sorted tuple of
    ``(variable, exponent)`` pairs. ``rank == 1`` is an ordinary polynomial.
    """

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: Mapping | None = None):
        self.rank = rank
        self.terms = {k: v for k, v in dict(terms or {}).items() if v}

    @classmethod
    def var(cls, v, coeff: Scalar = 1) -> CommElt:
        return cls(1, {(((( v, 1),),), 0): Fraction(coeff)})

    @classmethod
    def one(cls, rank: int = 1) -> CommElt:
        return cls(rank, {(((),) * rank, 0): Fraction(1)})

    @classmethod
    def from_monomials(cls, monos: Sequence[Iterable], coeff: Scalar = 1, hpow: int = 0) -> CommElt:
        """Pure tensor of monomials, each given as an iterable of variables."""
        return cls(len(monos), {(tuple(_mono(m) for m in monos), hpow): Fraction(coeff)})

    def __add__(self, other: CommElt) -> CommElt:
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return CommElt(self.rank, out)

    def __neg__(self) -> CommElt:
        return CommElt(self.rank, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: CommElt) -> CommElt:
        return self + (-other)

    def scale(self, c: Scalar) -> CommElt:
        return CommElt(self.rank, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other) -> CommElt:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if other.rank != self.rank:
            raise ValueError("rank mismatch")
        out: dict = {}
        for (ma, ea), ca in self.terms.items():
            for (mb, eb), cb in other.terms.items():
                key = (tuple(_mono_mul(x, y) for x, y in zip(ma, mb)), ea + eb)
                out[key] = out.get(key, 0) + ca * cb
        return CommElt(self.rank, out)

    def __eq__(self, other) -> bool:
        return isinstance(other, CommElt) and self.rank == other.rank and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.rank, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def flip(self) -> CommElt:
        if self.rank != 2:
            raise ValueError("flip needs rank 2")
        return CommElt(2, {((m[1], m[0]), e): v for (m, e), v in self.terms.items()})

    def map_vars(self, fn) -> CommElt:
        """Rename variables by ``fn``; a ``None`` image sends the monomial to 0."""
        out: dict = {}
        for (ms, e), c in self.terms.items():
            new = []
            dead = False
            for m in ms:
                vs = []
                for v, k in m:
                    img = fn(v)
                    if img is None:
                        dead = True
                        break
                    vs.extend([img] * k)
                if dead:
                    break
                new.append(_mono(vs))
            if dead:
                continue
            key = (tuple(new), e)
            out[key] = out.get(key, 0) + c
        return CommElt(self.rank, out)

    def evaluate(self, values: Sequence[Mapping]) -> Fraction:
        """Evaluate factor ``i`` at ``values[i]`` (variable → rational); ħ must be absent."""
        total = Fraction(0)
        for (ms, e), c in self.terms.items():
            if e:
                raise ValueError("cannot evaluate an element with ħ-content")
            term = Fraction(c)
            for m, vals in zip(ms, values):
                for v, k in m:
                    term *= Fraction(vals.get(v, 0)) ** k
                if not term:
                    break
            total += term
        return total

    def specialize(self, h: Scalar) -> CommElt:
        h = Fraction(h)
        out: dict = {}
        for (ms, e), c in self.terms.items():
            if h == 0:
                if e < 0:
                    raise ZeroDivisionError("negative power of ħ evaluated at 0")
                if e:
                    continue
                f = c
            else:
                f = c * h**e
            out[(ms, 0)] = out.get((ms, 0), 0) + f
        return CommElt(self.rank, out)

    def format(self, name=lambda v: f"a{v}") -> str:
        if not self.terms:
            return "0"

        def mono_str(m) -> str:
            if not m:
                return "1"
            return "*".join(name(v) if k == 1 else f"{name(v)}^{k}" for v, k in m)

        def key(item):
            (ms, e), _ = item
            return (tuple((sum(k for _, k in m), m) for m in ms), e)

        parts = []
        for (ms, e), c in sorted(self.terms.items(), key=lambda kv: repr(key(kv))):
            body = " ⊗ ".join(mono_str(m) for m in ms)
            if self.rank > 1:
                body = f"({body})"
            hs = "" if e == 0 else ("h " if e == 1 else f"h^{e} ")
            coeff = "" if abs(c) == 1 and (hs or body != "1") else fmt_rational(abs(c)) + " "
            parts.append(("-" if c < 0 else "+", f"{coeff}{hs}{body}".strip()))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"CommElt({self})"


def abelianize(p: NCPoly | TensorElt) -> CommElt:
    """Image in the commutative quotient, factor by factor."""
    out: dict = {}
    if isinstance(p, NCPoly):
        for (w, e), c in p.terms.items():
            key = ((_mono(w),), e)
            out[key] = out.get(key, 0) + c
        return CommElt(1, out)
    for (ws, e), c in p.terms.items():
        key = (tuple(_mono(w) for w in ws), e)
        out[key] = out.get(key, 0) + c
    return CommElt(p.rank, out)


def commutative_coproduct(n: int, trunc: int | None = None) -> CommElt:
    """Coproduct of the commutative coordinate ``a_n`` built from commutative
    compositions, without going through the non-commutative algebra."""
    out = CommElt.from_monomials([[n], []]) + CommElt.from_monomials([[], [n]])
    for m in range(1, n):
        t = n - m
        for k in range(1, t + 1):
            c = comb(m + 1, k)
            for comp in compositions(t, k):
                out = out + CommElt.from_monomials([[m], list(comp)], c)
    return out
