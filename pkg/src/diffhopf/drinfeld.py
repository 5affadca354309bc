"""Drinfeld's maps δ_Φ and δ_n, the filtration ``D_k = Ker δ_{k+1}`` and the
invariant κ.

``δ_n = (id - u∘ε)^{⊗n} ∘ Δ^n``: of the n-fold coproduct keep only terms
with no empty tensor factor. That is how δ_n is computed here; the
inclusion-exclusion form is kept as a cross-check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from ._kernels import tensor_mul_terms
from .freelie import FreeLie
from .hopfdiff import HopfPresentation
from .ncpoly import LaurentCoeff, NCPoly, TensorElt, Word, echelon_polys, kernel_basis, same_span


def iterated_coproduct(H: HopfPresentation, n: int, p: NCPoly) -> TensorElt | NCPoly | LaurentCoeff:
    """``Δ^n``, with ``Δ^0 = ε``, ``Δ^1 = id`` and ``Δ^n = (Δ ⊗ id^{n-2}) Δ^{n-1}``."""
    if n < 0:
        raise ValueError("order must be non-negative")
    if n == 0:
        return H.counit(p)
    if n == 1:
        return p
    t = H.coproduct(p)
    for _ in range(n - 2):
        t = H.coproduct_at(t, 0)
    return t


class DeltaMap:
    """δ_n on a fixed presentation, with per-letter caches of ``Δ^n``."""

    def __init__(self, H: HopfPresentation):
        self.H = H
        self._letter: dict[tuple[int, int], dict] = {}

    def _letter_power(self, n: int, letter: int) -> dict:
        key = (n, letter)
        if key not in self._letter:
            t = iterated_coproduct(self.H, n, self.H.gen(letter))
            self._letter[key] = dict(t.terms)
        return self._letter[key]

    def delta_word(self, n: int, w: Word) -> dict:
        """Raw terms of ``δ_n`` on one word.

        Partial products are pruned once the count of still-empty factors
        exceeds the weight of the letters not yet multiplied in, since those
        letters can fill at most that many factors.
        """
        weight = sum(w)
        if n > weight:
            return {}
        unit = ((((),) * n, 0),)
        cur = {unit[0]: Fraction(1)}
        remaining = weight
        trunc = self.H.trunc
        for letter in w:
            cur = tensor_mul_terms(cur, self._letter_power(n, letter), trunc)
            remaining -= letter
            cur = {k: v for k, v in cur.items() if sum(1 for x in k[0] if not x) <= remaining}
        return cur

    def __call__(self, n: int, p: NCPoly) -> TensorElt | NCPoly | LaurentCoeff:
        return self.delta_n(n, p)

    def delta_n(self, n: int, p: NCPoly) -> TensorElt | NCPoly | LaurentCoeff:
        H = self.H
        H.check(p)
        if n == 0:
            return H.counit(p)
        if n == 1:
            return p - NCPoly.scalar(p.constant_term(), p.amb)
        out: dict = {}
        for (w, e), c in p.terms.items():
            for (ws, e2), v in self.delta_word(n, w).items():
                key = (ws, e + e2)
                out[key] = out.get(key, 0) + c * v
        return TensorElt(n, {k: v for k, v in out.items() if v}, p.amb)

    def kappa(self, p: NCPoly) -> int:
        """Least ``k`` with ``δ_{k+1}(p) = 0``."""
        if not p:
            raise ValueError("κ is undefined on 0")
        bound = max(p.weights())
        for k in range(bound + 1):
            if not self.delta_n(k + 1, p):
                return k
        raise AssertionError(f"δ_{bound + 1} should vanish in weight ≤ {bound}")


_DELTAS: dict[HopfPresentation, DeltaMap] = {}


def delta_map(H: HopfPresentation) -> DeltaMap:
    if H not in _DELTAS:
        _DELTAS[H] = DeltaMap(H)
    return _DELTAS[H]


def delta_n(H: HopfPresentation, n: int, p: NCPoly):
    return delta_map(H).delta_n(n, p)


def kappa(H: HopfPresentation, p: NCPoly) -> int:
    return delta_map(H).kappa(p)


def _embed(t, positions: Sequence[int], n: int, amb) -> TensorElt:
    """``j_Φ``: put the factors of ``t`` at ``positions`` and 1 elsewhere."""
    if len(positions) == 0:
        c = t if isinstance(t, LaurentCoeff) else LaurentCoeff(t)
        return TensorElt(n, {(((),) * n, e): v for e, v in c.terms.items()}, amb)
    if isinstance(t, NCPoly):
        items = [((w,), e, c) for (w, e), c in t.terms.items()]
    else:
        items = [(ws, e, c) for (ws, e), c in t.terms.items()]
    out: dict = {}
    for ws, e, c in items:
        slots = [()] * n
        for pos, w in zip(positions, ws):
            slots[pos - 1] = w
        key = (tuple(slots), e)
        out[key] = out.get(key, 0) + c
    return TensorElt(n, {k: v for k, v in out.items() if v}, amb)


def _check_phi(phi: Iterable[int], n: int) -> tuple[int, ...]:
    phi = tuple(sorted(set(phi)))
    if any(i < 1 or i > n for i in phi):
        raise ValueError(f"Φ must be a subset of 1..{n}")
    return phi


def delta_phi(H: HopfPresentation, phi: Iterable[int], n: int, p: NCPoly) -> TensorElt:
    """``δ_Φ = j_Φ ∘ δ_{|Φ|}`` as a rank-``n`` tensor."""
    phi = _check_phi(phi, n)
    return _embed(delta_n(H, len(phi), p), phi, n, p.amb)


def coproduct_phi(H: HopfPresentation, phi: Iterable[int], n: int, p: NCPoly) -> TensorElt:
    """``Δ_Φ = j_Φ ∘ Δ^{|Φ|}``."""
    phi = _check_phi(phi, n)
    return _embed(iterated_coproduct(H, len(phi), p), phi, n, p.amb)


def delta_phi_inclusion_exclusion(H: HopfPresentation, phi: Iterable[int], n: int, p: NCPoly) -> TensorElt:
    """``δ_Φ = Σ_{Ψ ⊆ Φ} (-1)^{|Φ|-|Ψ|} Δ_Ψ``."""
    phi = _check_phi(phi, n)
    out = TensorElt.zero(n, p.amb)
    for k in range(len(phi) + 1):
        for psi in combinations(phi, k):
            term = coproduct_phi(H, psi, n, p)
            out = out + (term if (len(phi) - k) % 2 == 0 else -term)
    return out


# --------------------------------------------------------------------------
# Filtration reports


@dataclass
class FiltrationLevel:
    k: int
    dim_d: int
    dim_theta: int
    equal: bool
    basis_d: list[NCPoly] = field(default_factory=list, repr=False)
    basis_theta: list[NCPoly] = field(default_factory=list, repr=False)


@dataclass
class FiltrationReport:
    weight: int
    dim: int
    levels: list[FiltrationLevel]

    @property
    def all_equal(self) -> bool:
        return all(lv.equal for lv in self.levels)

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "levels": [
                {"k": lv.k, "dimD": lv.dim_d, "dimTheta": lv.dim_theta, "equal": lv.equal} for lv in self.levels
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def d_component(H: HopfPresentation, w: int, k: int) -> list[NCPoly]:
    """Echelon basis of ``D_k ∩ H_(w)``."""
    words = H.basis(w)
    if not words:
        return []
    dom = [NCPoly.word(u, H.amb) for u in words]
    dm = delta_map(H)
    images = [dm.delta_n(k + 1, x) for x in dom]
    return kernel_basis(dom, images)


def filtration_component(H: HopfPresentation, w: int, lie: FreeLie | None = None) -> FiltrationReport:
    """Compare ``D_k`` with ``Θ_k`` inside ``H_(w)`` for every level ``k ≤ w``."""
    if H.family != "H":
        raise ValueError("the τ-filtration is defined for family H")
    if w > H.trunc:
        raise ValueError(f"weight {w} exceeds truncation {H.trunc}")
    lie = lie or FreeLie(H.nu, H.trunc)
    levels = []
    for k in range(w + 1):
        bd = d_component(H, w, k)
        bt = echelon_polys(lie.theta_basis(w, k)) if w else [NCPoly.one(H.amb)]
        if w == 0:
            bd = [NCPoly.one(H.amb)]
        levels.append(FiltrationLevel(k, len(bd), len(bt), same_span(bd, bt), bd, bt))
    return FiltrationReport(w, len(H.basis(w)) if w else 1, levels)


# --------------------------------------------------------------------------
# Membership in the ħ-adic Drinfeld algebra


@dataclass
class MembershipCertificate:
    member: bool
    valuations: dict[int, int | None]
    checked_up_to: int
    note: str = ""

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "valuations": {str(k): v for k, v in self.valuations.items()},
            "checked_up_to": self.checked_up_to,
            "note": self.note,
        }


def x_to_a(p: NCPoly) -> NCPoly:
    """``x_n = ħ^{-1} a_n``: an x-word of length ℓ becomes ``ħ^{-ℓ}`` times the a-word."""
    return NCPoly({(w, e - len(w)): c for (w, e), c in p.terms.items()}, p.amb)


def a_to_x(p: NCPoly) -> NCPoly:
    return NCPoly({(w, e + len(w)): c for (w, e), c in p.terms.items()}, p.amb)


def tensor_a_to_x(t: TensorElt) -> TensorElt:
    return TensorElt(t.rank, {(ws, e + sum(map(len, ws))): c for (ws, e), c in t.terms.items()}, t.amb)


def vee_membership(H: HopfPresentation, eta_x: NCPoly) -> MembershipCertificate:
    """Whether ``δ_n(η) ∈ ħ^n (H_ħ^∨)^{⊗n}`` for all ``n``.

    ``eta_x`` is written in the generators ``x_n = ħ^{-1} a_n`` of ``H_ħ^∨``.
    Only ``n`` up to the weight of η needs checking since δ_n vanishes on
    weights below ``n``.
    """
    if any(e < 0 for _, e in eta_x.terms):
        raise ValueError("η has negative ħ-powers in the x-generators: not in H_ħ^∨")
    eta = x_to_a(eta_x)
    top = max(eta.weights(), default=0)
    vals: dict[int, int | None] = {}
    ok = True
    dm = delta_map(H)
    for n in range(1, top + 1):
        d = dm.delta_n(n, eta)
        v = tensor_a_to_x(d).h_valuation() if n > 1 else a_to_x(d).h_valuation()
        vals[n] = v
        if v is not None and v < n:
            ok = False
    return MembershipCertificate(ok, vals, top, "δ_n vanishes for n above the weight")
