"""Exact coefficients, the free associative algebra on weighted letters, its
tensor powers, and exact linear algebra over the rationals.

Elements store their terms in a dict keyed by ``(word, hpow)`` where ``word``
is a tuple of positive letter indices and ``hpow`` the exponent of the central
parameter ħ. A letter ``n`` has weight ``n``; every element carries an
:class:`Ambient` fixing the largest letter ``nu`` and a weight bound ``trunc``.
Terms of weight above ``trunc`` are discarded by every operation.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from ._kernels import mul_terms, rref_int, tensor_mul_terms

Rational = Fraction
Word = tuple
Scalar = Union[int, Fraction]

DEFAULT_TRUNC = 8


def default_trunc() -> int:
    """Weight bound used when none is given; ``HOPFDIFF_DEFAULT_TRUNC`` overrides it."""
    raw = os.environ.get("HOPFDIFF_DEFAULT_TRUNC")
    if raw:
        value = int(raw)
        if value < 0:
            raise ValueError("HOPFDIFF_DEFAULT_TRUNC must be non-negative")
        return value
    return DEFAULT_TRUNC


def fmt_rational(q: Scalar) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def word_weight(word: Word) -> int:
    return sum(word)


def word_key(word: Word) -> tuple:
    """Canonical monomial order: weight, then length, then lexicographic."""
    return (sum(word), len(word), word)


def tensor_key(words: tuple) -> tuple:
    return (sum(map(sum, words)), tuple(word_key(w) for w in words))


# --------------------------------------------------------------------------
# Laurent coefficients in ħ


class LaurentCoeff:
    """An exact Laurent polynomial in ħ with rational coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, Scalar] | None = None):
        self._terms = {int(e): Fraction(c) for e, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c: Scalar) -> LaurentCoeff:
        return cls({0: c})

    @classmethod
    def monomial(cls, e: int, c: Scalar = 1) -> LaurentCoeff:
        return cls({e: c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentCoeff.const(other)
        if not isinstance(other, LaurentCoeff):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other) -> LaurentCoeff:
        other = _as_laurent(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentCoeff(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentCoeff:
        return LaurentCoeff({e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> LaurentCoeff:
        return self + (-_as_laurent(other))

    def __rsub__(self, other) -> LaurentCoeff:
        return _as_laurent(other) - self

    def __mul__(self, other) -> LaurentCoeff:
        other = _as_laurent(other)
        out: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentCoeff(out)

    __rmul__ = __mul__

    def valuation(self) -> int | None:
        return min(self._terms) if self._terms else None

    def degree(self) -> int | None:
        return max(self._terms) if self._terms else None

    def evaluate(self, h: Scalar) -> Fraction:
        h = Fraction(h)
        if h == 0:
            if self._terms and min(self._terms) < 0:
                raise ZeroDivisionError("negative power of ħ evaluated at 0")
            return self._terms.get(0, Fraction(0))
        return sum((c * h**e for e, c in self._terms.items()), Fraction(0))

    def __repr__(self) -> str:
        return f"LaurentCoeff({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms):
            c = self._terms[e]
            body = _hfactor(e)
            if body is None:
                s = fmt_rational(abs(c))
            elif abs(c) == 1:
                s = body
            else:
                s = f"{fmt_rational(abs(c))} {body}"
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out


def _as_laurent(x) -> LaurentCoeff:
    if isinstance(x, LaurentCoeff):
        return x
    if isinstance(x, (int, Fraction)):
        return LaurentCoeff.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a coefficient")


def _hfactor(e: int) -> str | None:
    if e == 0:
        return None
    if e == 1:
        return "h"
    return f"h^{e}"


# --------------------------------------------------------------------------
# Ambient data


@dataclass(frozen=True)
class Ambient:
    """Largest admissible letter (``None`` for no bound) and weight truncation."""

    nu: int | None = None
    trunc: int = DEFAULT_TRUNC

    def __post_init__(self):
        if self.trunc < 0:
            raise ValueError("truncation weight must be non-negative")
        if self.nu is not None and self.nu < 1:
            raise ValueError("nu must be positive")

    @property
    def max_letter(self) -> int:
        return self.trunc if self.nu is None else min(self.nu, self.trunc)

    def letters(self) -> range:
        return range(1, self.max_letter + 1)

    def check_letter(self, n: int) -> None:
        if n < 1 or (self.nu is not None and n > self.nu):
            raise ValueError(f"letter {n} outside 1..{self.nu}")

    def with_trunc(self, trunc: int) -> Ambient:
        return Ambient(self.nu, trunc)


def _check_same(a: Ambient, b: Ambient) -> None:
    if a != b:
        raise ValueError(f"ambient mismatch: {a} vs {b}")


def compositions(w: int, parts: int | None = None, letters: Iterable[int] | None = None) -> Iterator[Word]:
    """Words of weight ``w`` over ``letters`` (all positive integers by default),
    optionally of a fixed length, in lexicographic order."""
    allowed = sorted(set(letters)) if letters is not None else None

    def rec(rest: int, k: int | None) -> Iterator[Word]:
        if rest == 0:
            if k in (None, 0):
                yield ()
            return
        if k == 0:
            return
        cands = allowed if allowed is not None else range(1, rest + 1)
        for j in cands:
            if j > rest:
                break
            for tail in rec(rest - j, None if k is None else k - 1):
                yield (j,) + tail

    yield from rec(w, parts)


def words_of_weight(w: int, amb: Ambient) -> list[Word]:
    """All words of weight ``w`` in canonical order."""
    ws = list(compositions(w, letters=amb.letters())) if w <= amb.trunc else []
    return sorted(ws, key=word_key)


# --------------------------------------------------------------------------
# Free associative algebra


def _clean(terms: dict, trunc: int) -> dict:
    return {k: v for k, v in terms.items() if v and sum(k[0]) <= trunc}


class NCPoly:
    """Element of the free algebra over ℚ[ħ, ħ⁻¹], truncated at a weight bound."""

    __slots__ = ("terms", "amb")

    def __init__(self, terms: Mapping | None, amb: Ambient, *, clean: bool = False):
        self.amb = amb
        if terms is None:
            self.terms = {}
        elif clean:
            self.terms = dict(terms)
        else:
            self.terms = _clean(dict(terms), amb.trunc)

    # constructors
    @classmethod
    def zero(cls, amb: Ambient) -> NCPoly:
        return cls({}, amb, clean=True)

    @classmethod
    def one(cls, amb: Ambient) -> NCPoly:
        return cls({((), 0): Fraction(1)}, amb)

    @classmethod
    def scalar(cls, c: Scalar | LaurentCoeff, amb: Ambient) -> NCPoly:
        if isinstance(c, LaurentCoeff):
            return cls({((), e): v for e, v in c.terms.items()}, amb)
        return cls({((), 0): Fraction(c)}, amb)

    @classmethod
    def hbar(cls, amb: Ambient, e: int = 1) -> NCPoly:
        return cls({((), e): Fraction(1)}, amb)

    @classmethod
    def gen(cls, n: int, amb: Ambient) -> NCPoly:
        amb.check_letter(n)
        return cls({((n,), 0): Fraction(1)}, amb)

    @classmethod
    def word(cls, word: Iterable[int], amb: Ambient, coeff: Scalar = 1, hpow: int = 0) -> NCPoly:
        w = tuple(word)
        for n in w:
            amb.check_letter(n)
        return cls({(w, hpow): Fraction(coeff)}, amb)

    # arithmetic
    def _coerce(self, other) -> NCPoly:
        if isinstance(other, NCPoly):
            _check_same(self.amb, other.amb)
            return other
        if isinstance(other, (int, Fraction, LaurentCoeff)):
            return NCPoly.scalar(other, self.amb)
        return NotImplemented

    def __add__(self, other) -> NCPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return NCPoly({k: v for k, v in out.items() if v}, self.amb, clean=True)

    __radd__ = __add__

    def __neg__(self) -> NCPoly:
        return NCPoly({k: -v for k, v in self.terms.items()}, self.amb, clean=True)

    def __sub__(self, other) -> NCPoly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> NCPoly:
        return (-self) + other

    def scale(self, c: Scalar, hpow: int = 0) -> NCPoly:
        if not c:
            return NCPoly.zero(self.amb)
        return NCPoly({(w, e + hpow): v * c for (w, e), v in self.terms.items()}, self.amb, clean=True)

    def shift_h(self, k: int) -> NCPoly:
        return self.scale(1, k)

    def __mul__(self, other) -> NCPoly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, LaurentCoeff):
            return self * NCPoly.scalar(other, self.amb)
        if not isinstance(other, NCPoly):
            return NotImplemented
        _check_same(self.amb, other.amb)
        return NCPoly(mul_terms(self.terms, other.terms, self.amb.trunc), self.amb, clean=True)

    def __rmul__(self, other) -> NCPoly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, LaurentCoeff):
            return NCPoly.scalar(other, self.amb) * self
        return NotImplemented

    def __pow__(self, k: int) -> NCPoly:
        if k < 0:
            raise ValueError("negative power")
        out = NCPoly.one(self.amb)
        for _ in range(k):
            out = out * self
        return out

    def commutator(self, other: NCPoly) -> NCPoly:
        return self * other - other * self

    # inspection
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = NCPoly.scalar(other, self.amb)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.amb == other.amb and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.amb, frozenset(self.terms.items())))

    def words(self) -> list[Word]:
        return sorted({w for w, _ in self.terms}, key=word_key)

    def coefficient(self, word: Iterable[int]) -> LaurentCoeff:
        w = tuple(word)
        return LaurentCoeff({e: v for (u, e), v in self.terms.items() if u == w})

    def constant_term(self) -> LaurentCoeff:
        return self.coefficient(())

    def weights(self) -> set[int]:
        return {sum(w) for w, _ in self.terms}

    def max_weight(self) -> int:
        return max((sum(w) for w, _ in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def h_valuation(self) -> int | None:
        return min((e for _, e in self.terms), default=None)

    def is_h_free(self) -> bool:
        return all(e == 0 for _, e in self.terms)

    def graded_component(self, w: int) -> NCPoly:
        return NCPoly({k: v for k, v in self.terms.items() if sum(k[0]) == w}, self.amb, clean=True)

    def truncate(self, trunc: int) -> NCPoly:
        return NCPoly(self.terms, self.amb.with_trunc(trunc))

    def with_ambient(self, amb: Ambient) -> NCPoly:
        for (w, _) in self.terms:
            for n in w:
                amb.check_letter(n)
        return NCPoly(self.terms, amb)

    def specialize(self, h: Scalar) -> NCPoly:
        """Set ħ to a rational value."""
        h = Fraction(h)
        out: dict = {}
        for (w, e), v in self.terms.items():
            if h == 0:
                if e < 0:
                    raise ZeroDivisionError("negative power of ħ evaluated at 0")
                if e > 0:
                    continue
                f = v
            else:
                f = v * h**e
            out[(w, 0)] = out.get((w, 0), 0) + f
        return NCPoly({k: v for k, v in out.items() if v}, self.amb, clean=True)

    def h_slices(self) -> dict[int, dict[Word, Fraction]]:
        """Split into ħ-free parts: ``{hpow: {word: coeff}}``."""
        out: dict[int, dict] = {}
        for (w, e), v in self.terms.items():
            out.setdefault(e, {})[w] = v
        return out

    def substitute(self, image: Callable[[int], NCPoly], amb: Ambient | None = None) -> NCPoly:
        """Apply the algebra morphism sending letter ``n`` to ``image(n)``."""
        amb = amb or self.amb
        cache: dict[int, NCPoly] = {}
        prefix: dict[Word, NCPoly] = {(): NCPoly.one(amb)}
        out: dict = {}
        for (w, e), v in self.terms.items():
            prod = prefix.get(w)
            if prod is None:
                prod = prefix[()]
                for i, n in enumerate(w):
                    if n not in cache:
                        cache[n] = image(n)
                    key = w[: i + 1]
                    nxt = prefix.get(key)
                    if nxt is None:
                        nxt = prod * cache[n]
                        prefix[key] = nxt
                    prod = nxt
            for (u, e2), c in prod.terms.items():
                k = (u, e + e2)
                out[k] = out.get(k, 0) + v * c
        return NCPoly({k: c for k, c in out.items() if c}, amb)

    def reversed_words(self) -> NCPoly:
        return NCPoly({(w[::-1], e): v for (w, e), v in self.terms.items()}, self.amb, clean=True)

    def sorted_items(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: (word_key(kv[0][0]), kv[0][1]))

    # output
    def format(self, letter: str = "a") -> str:
        grouped: dict[Word, dict[int, Fraction]] = {}
        for (w, e), v in self.terms.items():
            grouped.setdefault(w, {})[e] = v
        items = [(w, LaurentCoeff(grouped[w])) for w in sorted(grouped, key=word_key)]
        return _format_sum(items, lambda w: _word_str(w, letter))

    def __str__(self) -> str:
        return self.format("a")

    def __repr__(self) -> str:
        return f"NCPoly({self})"

    def to_json(self) -> dict:
        grouped: dict[Word, list] = {}
        for (w, e), v in sorted(self.terms.items(), key=lambda kv: (word_key(kv[0][0]), kv[0][1])):
            v = Fraction(v)
            grouped.setdefault(w, []).append(
                {"hpow": e, "num": str(v.numerator), "den": str(v.denominator)}
            )
        return {
            "nu": self.amb.nu,
            "trunc": self.amb.trunc,
            "terms": [{"coef": grouped[w], "word": list(w)} for w in sorted(grouped, key=word_key)],
        }

    @classmethod
    def from_json(cls, data: Mapping | str) -> NCPoly:
        if isinstance(data, str):
            data = json.loads(data)
        amb = Ambient(data.get("nu"), int(data["trunc"]))
        terms: dict = {}
        for t in data["terms"]:
            w = tuple(int(n) for n in t["word"])
            for n in w:
                amb.check_letter(n)
            for c in t["coef"]:
                key = (w, int(c["hpow"]))
                terms[key] = terms.get(key, 0) + Fraction(int(c["num"]), int(c["den"]))
        return cls(terms, amb)


def _word_str(w: Word, letter: str) -> str:
    if not w:
        return "1"
    return "*".join(f"{letter}{n}" for n in w)


def _format_sum(items: Sequence[tuple[object, LaurentCoeff]], show: Callable[[object], str]) -> str:
    """Render ``Σ coeff·basis`` with signs pulled out of monomial coefficients."""
    if not items:
        return "0"
    pieces = []
    for basis, coeff in items:
        label = show(basis)
        ts = coeff.terms
        if len(ts) == 1:
            (e, c), = ts.items()
            sign = "-" if c < 0 else "+"
            c = abs(c)
            hs = _hfactor(e)
            factors = []
            if c != 1 or (hs is None and label == "1"):
                factors.append(fmt_rational(c))
            if hs is not None:
                factors.append(hs)
            if label != "1" or not factors:
                factors.append(label)
            pieces.append((sign, " ".join(factors)))
        else:
            body = f"({coeff})"
            pieces.append(("+", body if label == "1" else f"{body} {label}"))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, s in pieces[1:]:
        out += f" {sign} {s}"
    return out


# --------------------------------------------------------------------------
# Tensor powers


class TensorElt:
    """Element of the ``rank``-fold tensor power of the free algebra."""

    __slots__ = ("rank", "terms", "amb")

    def __init__(self, rank: int, terms: Mapping | None, amb: Ambient, *, clean: bool = False):
        self.rank = rank
        self.amb = amb
        if terms is None:
            self.terms = {}
        elif clean:
            self.terms = dict(terms)
        else:
            self.terms = {
                k: v for k, v in dict(terms).items() if v and sum(map(sum, k[0])) <= amb.trunc
            }
        for ws, _ in self.terms:
            if len(ws) != rank:
                raise ValueError(f"term {ws} does not have rank {rank}")

    @classmethod
    def zero(cls, rank: int, amb: Ambient) -> TensorElt:
        return cls(rank, {}, amb, clean=True)

    @classmethod
    def unit(cls, rank: int, amb: Ambient) -> TensorElt:
        return cls(rank, {(((),) * rank, 0): Fraction(1)}, amb)

    @classmethod
    def pure(cls, *factors: NCPoly) -> TensorElt:
        """Tensor product of ``factors``."""
        if not factors:
            raise ValueError("need at least one factor")
        amb = factors[0].amb
        out = {((), 0): Fraction(1)}
        for f in factors:
            _check_same(amb, f.amb)
            nxt: dict = {}
            for (ws, e), c in out.items():
                for (w, e2), c2 in f.terms.items():
                    key = (ws + (w,), e + e2)
                    nxt[key] = nxt.get(key, 0) + c * c2
            out = nxt
        return cls(len(factors), out, amb)

    def _same(self, other: TensorElt) -> None:
        if not isinstance(other, TensorElt):
            raise TypeError("expected a TensorElt")
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        _check_same(self.amb, other.amb)

    def __add__(self, other: TensorElt) -> TensorElt:
        self._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TensorElt(self.rank, {k: v for k, v in out.items() if v}, self.amb, clean=True)

    def __neg__(self) -> TensorElt:
        return TensorElt(self.rank, {k: -v for k, v in self.terms.items()}, self.amb, clean=True)

    def __sub__(self, other: TensorElt) -> TensorElt:
        return self + (-other)

    def scale(self, c: Scalar, hpow: int = 0) -> TensorElt:
        if not c:
            return TensorElt.zero(self.rank, self.amb)
        return TensorElt(
            self.rank, {(ws, e + hpow): v * c for (ws, e), v in self.terms.items()}, self.amb, clean=True
        )

    def __mul__(self, other) -> TensorElt:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._same(other)
        return TensorElt(
            self.rank, tensor_mul_terms(self.terms, other.terms, self.amb.trunc), self.amb, clean=True
        )

    def __rmul__(self, other) -> TensorElt:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def commutator(self, other: TensorElt) -> TensorElt:
        return self * other - other * self

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElt):
            return NotImplemented
        return self.rank == other.rank and self.amb == other.amb and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.rank, self.amb, frozenset(self.terms.items())))

    def flip(self, i: int = 0, j: int = 1) -> TensorElt:
        """Swap tensor factors ``i`` and ``j`` (0-based)."""
        if not (0 <= i < self.rank and 0 <= j < self.rank):
            raise ValueError("flip positions out of range")
        out = {}
        for (ws, e), v in self.terms.items():
            lst = list(ws)
            lst[i], lst[j] = lst[j], lst[i]
            out[(tuple(lst), e)] = v
        return TensorElt(self.rank, out, self.amb, clean=True)

    def graded_component(self, w: int) -> TensorElt:
        return TensorElt(
            self.rank,
            {k: v for k, v in self.terms.items() if sum(map(sum, k[0])) == w},
            self.amb,
            clean=True,
        )

    def h_valuation(self) -> int | None:
        return min((e for _, e in self.terms), default=None)

    def is_h_free(self) -> bool:
        return all(e == 0 for _, e in self.terms)

    def specialize(self, h: Scalar) -> TensorElt:
        h = Fraction(h)
        out: dict = {}
        for (ws, e), v in self.terms.items():
            if h == 0:
                if e < 0:
                    raise ZeroDivisionError("negative power of ħ evaluated at 0")
                if e > 0:
                    continue
                f = v
            else:
                f = v * h**e
            out[(ws, 0)] = out.get((ws, 0), 0) + f
        return TensorElt(self.rank, {k: v for k, v in out.items() if v}, self.amb, clean=True)

    def coefficient(self, words: Sequence[Iterable[int]]) -> LaurentCoeff:
        key = tuple(tuple(w) for w in words)
        return LaurentCoeff({e: v for (ws, e), v in self.terms.items() if ws == key})

    def map_factors(self, fns: Sequence[Callable[[Word], Mapping[Word, Scalar]] | None]) -> TensorElt:
        """Apply a linear map to each factor; ``None`` keeps a factor unchanged.

        Each map sends a word to a ``{word: coeff}`` dict.
        """
        out: dict = {}
        for (ws, e), v in self.terms.items():
            partial = [((), v)]
            for w, fn in zip(ws, fns):
                img = {w: 1} if fn is None else fn(w)
                partial = [(acc + (u,), c * d) for acc, c in partial for u, d in img.items() if d]
            for acc, c in partial:
                key = (acc, e)
                out[key] = out.get(key, 0) + c
        return TensorElt(self.rank, {k: v for k, v in out.items() if v}, self.amb)

    def sorted_items(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: (tensor_key(kv[0][0]), kv[0][1]))

    def format(self, letter: str = "a", sep: str = "⊗") -> str:
        grouped: dict[tuple, dict[int, Fraction]] = {}
        for (ws, e), v in self.terms.items():
            grouped.setdefault(ws, {})[e] = v
        items = [(ws, LaurentCoeff(grouped[ws])) for ws in sorted(grouped, key=tensor_key)]
        show = lambda ws: "(" + f" {sep} ".join(_word_str(w, letter) for w in ws) + ")"
        return _format_sum(items, show)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"TensorElt({self})"


def graded_component(p: NCPoly | TensorElt, w: int) -> NCPoly | TensorElt:
    """Sum of the terms of total weight exactly ``w``."""
    return p.graded_component(w)


def nc_add(p: NCPoly, q: NCPoly) -> NCPoly:
    return p + q


def nc_mul(p: NCPoly, q: NCPoly) -> NCPoly:
    return p * q


def tensor_mul(t: TensorElt, u: TensorElt) -> TensorElt:
    return t * u


def tensor_flip(t: TensorElt, i: int = 0, j: int = 1) -> TensorElt:
    return t.flip(i, j)


# --------------------------------------------------------------------------
# Text syntax

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<gen>[ax]\d+)|(?P<h>h)|(?P<op>[-+*^()]))"
)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class _Parser:
    def __init__(self, text: str, amb: Ambient, letters: str):
        self.text = text
        self.amb = amb
        self.letters = letters
        self.toks = self._lex()
        self.i = 0

    def _lex(self) -> list[tuple[str, str, int]]:
        toks = []
        pos = 0
        text = self.text
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            start = m.start(kind)
            toks.append((kind, m.group(kind), start))
            pos = m.end()
        toks.append(("end", "", len(text)))
        return toks

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def parse(self) -> NCPoly:
        p = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", pos)
        return p

    def expr(self) -> NCPoly:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        out = self.term().scale(sign)
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                out = out + t if val == "+" else out - t
            else:
                return out

    def term(self) -> NCPoly:
        out = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                out = out * self.factor()
            elif kind in ("num", "gen", "h") or (kind == "op" and val == "("):
                out = out * self.factor()
            else:
                return out

    def factor(self) -> NCPoly:
        kind, val, pos = self.take()
        if kind == "num":
            return NCPoly.scalar(Fraction(val), self.amb)
        if kind == "gen":
            if val[0] not in self.letters:
                raise ParseError(f"generator {val!r} not allowed here", pos)
            n = int(val[1:])
            try:
                return NCPoly.gen(n, self.amb)
            except ValueError as exc:
                raise ParseError(str(exc), pos) from None
        if kind == "h":
            e = 1
            k2, v2, _ = self.peek()
            if k2 == "op" and v2 == "^":
                self.take()
                sign = 1
                k3, v3, p3 = self.peek()
                if k3 == "op" and v3 in "+-":
                    self.take()
                    sign = -1 if v3 == "-" else 1
                    k3, v3, p3 = self.peek()
                if k3 == "op" and v3 == "(":
                    self.take()
                    k4, v4, p4 = self.take()
                    neg = 1
                    if k4 == "op" and v4 == "-":
                        neg = -1
                        k4, v4, p4 = self.take()
                    if k4 != "num" or "/" in v4:
                        raise ParseError("expected integer exponent", p4)
                    e = sign * neg * int(v4)
                    k5, v5, p5 = self.take()
                    if (k5, v5) != ("op", ")"):
                        raise ParseError("expected ')'", p5)
                else:
                    self.take()
                    if k3 != "num" or "/" in v3:
                        raise ParseError("expected integer exponent", p3)
                    e = sign * int(v3)
            return NCPoly.hbar(self.amb, e)
        if kind == "op" and val == "(":
            inner = self.expr()
            k2, v2, p2 = self.take()
            if (k2, v2) != ("op", ")"):
                raise ParseError("expected ')'", p2)
            return inner
        if kind == "op" and val == "-":
            return -self.factor()
        if kind == "op" and val == "^":
            raise ParseError("'^' is only allowed after h", pos)
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {val!r}", pos)


def parse_poly(text: str, amb: Ambient | None = None, letters: str = "ax") -> NCPoly:
    """Parse the text syntax, e.g. ``"-a2 + 2 a1*a1"`` or ``"h^-1*a2"``."""
    amb = amb or Ambient(None, default_trunc())
    return _Parser(text, amb, letters).parse()


# --------------------------------------------------------------------------
# Exact linear algebra over ℚ


def _to_int_row(row: Sequence[Scalar]) -> list[int]:
    den = 1
    for x in row:
        if isinstance(x, Fraction) and x.denominator != 1:
            den = lcm(den, x.denominator)
    return [int(Fraction(x) * den) for x in row]


def rref(rows: Sequence[Sequence[Scalar]], ncols: int) -> tuple[list[int], list[list[Fraction]]]:
    """Reduced row echelon form via fraction-free elimination.

    Returns the pivot columns and the nonzero reduced rows (pivot entries 1).
    """
    work = [_to_int_row(r) for r in rows if any(r)]
    if not work:
        return [], []
    pivots, red, _ = rref_int(work, ncols)
    out = []
    for r, c in zip(red, pivots):
        p = r[c]
        out.append([Fraction(x, p) for x in r])
    return pivots, out


def rank(rows: Sequence[Sequence[Scalar]], ncols: int) -> int:
    return len(rref(rows, ncols)[0])


def nullspace(columns: Sequence[Mapping], nrows_keys: Sequence | None = None) -> list[list[Fraction]]:
    """Basis of ``{c : Σ c_j columns[j] = 0}`` for sparse column vectors."""
    keys = list(nrows_keys) if nrows_keys is not None else sorted({k for col in columns for k in col}, key=repr)
    index = {k: i for i, k in enumerate(keys)}
    n = len(columns)
    rows = [[0] * n for _ in keys]
    for j, col in enumerate(columns):
        for k, v in col.items():
            rows[index[k]][j] = v
    pivots, red = rref(rows, n)
    basis = []
    pivset = set(pivots)
    for f in range(n):
        if f in pivset:
            continue
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for r, c in zip(red, pivots):
            vec[c] = -r[f]
        basis.append(vec)
    return basis


def echelon_polys(polys: Sequence[NCPoly]) -> list[NCPoly]:
    """Reduced echelon basis of the span of ħ-free polynomials.

    Columns follow the canonical monomial order, so each returned element
    has a distinct smallest word with coefficient 1.
    """
    if not polys:
        return []
    amb = polys[0].amb
    for p in polys:
        if not p.is_h_free():
            raise ValueError("echelon form requested for an element with ħ-content")
    cols = sorted({w for p in polys for w, _ in p.terms}, key=word_key)
    index = {w: i for i, w in enumerate(cols)}
    rows = []
    for p in polys:
        row = [0] * len(cols)
        for (w, _), v in p.terms.items():
            row[index[w]] = v
        rows.append(row)
    pivots, red = rref(rows, len(cols))
    return [
        NCPoly({(cols[i], 0): x for i, x in enumerate(r) if x}, amb, clean=True) for r in red
    ]


def same_span(a: Sequence[NCPoly], b: Sequence[NCPoly]) -> bool:
    ea = echelon_polys(list(a))
    eb = echelon_polys(list(b))
    return [p.terms for p in ea] == [q.terms for q in eb]


def kernel_basis(domain: Sequence[NCPoly], images: Sequence[NCPoly | TensorElt]) -> list[NCPoly]:
    """Exact basis of the kernel of a linear map given on a spanning set.

    ``images[i]`` is the image of ``domain[i]``. The result spans
    ``{Σ c_i domain[i] : Σ c_i images[i] = 0}`` and is returned in reduced
    echelon form with respect to the canonical monomial order.
    """
    if len(domain) != len(images):
        raise ValueError("domain and images differ in length")
    if not domain:
        return []
    amb = domain[0].amb
    for x in list(domain) + list(images):
        if any(e != 0 for _, e in x.terms):
            raise ValueError("kernel over ℚ requested for an element with ħ-content")
    columns = [{k[0]: v for k, v in img.terms.items()} for img in images]
    keys = sorted({k for col in columns for k in col}, key=repr)
    vecs = nullspace(columns, keys)
    combos = []
    for vec in vecs:
        acc = NCPoly.zero(amb)
        for c, p in zip(vec, domain):
            if c:
                acc = acc + p.scale(c)
        if acc:
            combos.append(acc)
    return echelon_polys(combos)
