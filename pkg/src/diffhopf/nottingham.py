"""Formal diffeomorphisms ``x + Σ c_n x^{n+1}`` truncated at a fixed order.

Composition, inversion and the pairing with the coordinate functions
``a_n(f) = c_n``. Composition is done both by direct substitution and by the
closed form ``c_k(f∘g) = Q^0_k(b) + Σ_r a_r Q^r_{k-r}(b)`` in the
coefficients ``a`` of ``f`` and ``b`` of ``g``.
"""

from __future__ import annotations

import json
import random
import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .hopfdiff import CommElt, HopfPresentation, abelianize
from .ncpoly import Scalar, fmt_rational


class DiffSeries:
    """``x + Σ_{n=1}^{M} c_n x^{n+1}`` modulo ``x^{M+2}``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar]):
        self.coeffs = tuple(Fraction(c) for c in coeffs)
        self._validate()

    def _validate(self) -> None:
        pass

    @classmethod
    def identity(cls, bound: int) -> DiffSeries:
        return cls([0] * bound)

    @classmethod
    def from_dict(cls, bound: int, coeffs: Mapping[int, Scalar]) -> DiffSeries:
        c = [Fraction(0)] * bound
        for n, v in coeffs.items():
            if not 1 <= n <= bound:
                raise ValueError(f"index {n} outside 1..{bound}")
            c[n - 1] = Fraction(v)
        return cls(c)

    @classmethod
    def random(cls, bound: int, rng: random.Random, size: int = 5) -> DiffSeries:
        return cls(Fraction(rng.randint(-size, size), rng.randint(1, size)) for _ in range(bound))

    @property
    def bound(self) -> int:
        return len(self.coeffs)

    def coeff(self, n: int) -> Fraction:
        """``a_n(f)``; ``a_0`` is not a coordinate."""
        if not 1 <= n <= self.bound:
            raise ValueError(f"coefficient index {n} outside 1..{self.bound}")
        return self.coeffs[n - 1]

    def values(self) -> dict[int, Fraction]:
        return {n + 1: c for n, c in enumerate(self.coeffs)}

    def poly(self) -> list[Fraction]:
        """Power series coefficients ``p[k]`` of ``x^k`` for ``k ≤ M+1``."""
        return [Fraction(0), Fraction(1)] + list(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, DiffSeries) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.format()})"

    def __str__(self) -> str:
        return self.format()

    def format(self) -> str:
        out = "x"
        for n, c in enumerate(self.coeffs, start=1):
            if not c:
                continue
            a = abs(c)
            body = f"x^{n + 1}" if a == 1 else f"{fmt_rational(a)} x^{n + 1}"
            out += (" - " if c < 0 else " + ") + body
        return out

    def to_json(self) -> dict:
        return {"bound": self.bound, "coeffs": [[str(c.numerator), str(c.denominator)] for c in self.coeffs]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: Mapping | str) -> DiffSeries:
        if isinstance(data, str):
            data = json.loads(data)
        coeffs = [Fraction(int(n), int(d)) for n, d in data["coeffs"]]
        if len(coeffs) != data["bound"]:
            raise ValueError("coefficient count disagrees with bound")
        return cls(coeffs)

    # group operations
    def __matmul__(self, other: DiffSeries) -> DiffSeries:
        return compose(self, other)


class OddDiffSeries(DiffSeries):
    """Odd diffeomorphisms: ``c_n = 0`` for odd ``n``."""

    __slots__ = ()

    def _validate(self) -> None:
        for n, c in enumerate(self.coeffs, start=1):
            if n % 2 and c:
                raise ValueError(f"odd series has c_{n} = {c} ≠ 0")

    @classmethod
    def random(cls, bound: int, rng: random.Random, size: int = 5) -> OddDiffSeries:
        return cls(
            Fraction(rng.randint(-size, size), rng.randint(1, size)) if n % 2 == 0 else 0
            for n in range(1, bound + 1)
        )


def _same_type(f: DiffSeries, g: DiffSeries):
    return OddDiffSeries if isinstance(f, OddDiffSeries) and isinstance(g, OddDiffSeries) else DiffSeries


def _check_bounds(f: DiffSeries, g: DiffSeries) -> None:
    if f.bound != g.bound:
        raise ValueError(f"order bounds differ: {f.bound} vs {g.bound}")


def _mul(p: Sequence[Fraction], q: Sequence[Fraction], top: int) -> list[Fraction]:
    out = [Fraction(0)] * (top + 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j in range(min(len(q), top + 1 - i)):
            if q[j]:
                out[i + j] += a * q[j]
    return out


def compose(f: DiffSeries, g: DiffSeries) -> DiffSeries:
    """``f∘g`` by substituting ``g`` into ``f``."""
    _check_bounds(f, g)
    top = f.bound + 1
    gp = g.poly()
    acc = list(gp) + [Fraction(0)] * (top + 1 - len(gp))
    power = gp
    for n, c in enumerate(f.coeffs, start=1):
        power = _mul(power, gp, top)
        if c:
            for k in range(top + 1):
                acc[k] += c * power[k]
    return _same_type(f, g)(acc[2 : top + 1])


_Q_CACHE: dict[int, dict[tuple[int, int], CommElt]] = {}


def _abelian_q(bound: int) -> dict[tuple[int, int], CommElt]:
    if bound not in _Q_CACHE:
        H = HopfPresentation("H", None, bound)
        _Q_CACHE[bound] = {
            (r, t): abelianize(H.Q_poly(r, t)) for r in range(bound + 1) for t in range(bound + 1 - r)
        }
    return _Q_CACHE[bound]


def compose_closed_form(f: DiffSeries, g: DiffSeries) -> DiffSeries:
    """``f∘g`` from ``c_k = Q^0_k(b) + Σ_{r=1}^{k} a_r Q^r_{k-r}(b)``."""
    _check_bounds(f, g)
    Q = _abelian_q(f.bound)
    bv = [g.values()]
    out = []
    for k in range(1, f.bound + 1):
        c = Q[(0, k)].evaluate(bv)
        for r in range(1, k + 1):
            a = f.coeff(r)
            if a:
                c += a * Q[(r, k - r)].evaluate(bv)
        out.append(c)
    return _same_type(f, g)(out)


def invert(f: DiffSeries) -> DiffSeries:
    """The compositional inverse, one coefficient at a time.

    With ``b_1..b_{k-1}`` known and ``b_k = 0``, the coefficient of
    ``x^{k+1}`` in ``f∘g`` equals ``-b_k`` of the answer.
    """
    b = [Fraction(0)] * f.bound
    for k in range(1, f.bound + 1):
        trial = compose(f, DiffSeries(b))
        b[k - 1] = -trial.coeff(k)
    return type(f)(b)


def pair(p: CommElt, *series: DiffSeries) -> Fraction:
    """Evaluate a commutative polynomial (or tensor) in the ``a_n`` at series."""
    if p.rank != len(series):
        raise ValueError(f"rank {p.rank} needs {p.rank} series, got {len(series)}")
    for (ms, _), _ in p.terms.items():
        for m, f in zip(ms, series):
            for v, _ in m:
                if v > f.bound:
                    raise ValueError(f"a{v} exceeds the order bound {f.bound}")
    return p.evaluate([f.values() for f in series])


def quotient_project(f: DiffSeries, nu: int) -> DiffSeries:
    """The class of ``f`` in ``G_ν``: keep ``c_1..c_ν``."""
    if not 0 <= nu <= f.bound:
        raise ValueError(f"ν = {nu} outside 0..{f.bound}")
    return type(f)(f.coeffs[:nu])


def shift_sum_series(ell: int, bound: int) -> tuple[DiffSeries, DiffSeries]:
    """``x + x^{ℓ+1}`` and ``x/(1-x) = x + x^2 + x^3 + …``."""
    f = DiffSeries.from_dict(bound, {ell: 1})
    g = DiffSeries([1] * bound)
    return f, g


_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*(x)(?:\^(\d+))?\s*")


def parse_series(text: str, bound: int | None = None, odd: bool = False) -> DiffSeries:
    """Parse ``x + 1/2 x^2 - 3 x^4``. The linear term must be exactly ``x``."""
    pos = 0
    coeffs: dict[int, Fraction] = {}
    linear = Fraction(0)
    text = text.strip()
    if not text:
        raise ValueError("empty series")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse series at position {pos}: {text[pos:pos + 10]!r}")
        if pos and not m.group(1):
            raise ValueError(f"missing sign at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        k = int(m.group(4)) if m.group(4) else 1
        if k == 1:
            linear += sign * c
        elif k >= 2:
            coeffs[k - 1] = coeffs.get(k - 1, 0) + sign * c
        else:
            raise ValueError("constant terms are not allowed")
        pos = m.end()
    if linear != 1:
        raise ValueError("series must be tangent to the identity (linear term x)")
    M = bound if bound is not None else max(coeffs, default=1)
    cls = OddDiffSeries if odd else DiffSeries
    return cls.from_dict(M, {n: v for n, v in coeffs.items() if n <= M})
