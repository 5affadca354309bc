"""The four ħ-deformations of H, realised inside H(ħ) by rescaling generators.

Every element is stored in the ``a``-generators with Laurent coefficients in
ħ. Each kind fixes a basis over k[ħ] and a rule turning ``a``-coordinates
into coordinates in that basis:

=============  ==========================================  ===================
kind           basis                                        rescaling
=============  ==========================================  ===================
rees-vee       words in ``x_n = ħ^{-1} a_n``                free algebra
vee-prime      ordered products of ``ħ·b`` (b Hall in x)    ``ħ^{1-k} P_b(a)``
rees-prime     ordered products of ``ħ^{τ(b)} α_b``         α-PBW, scale by τ
prime-vee      ordered products of ``ħ^{τ(b)-1} α_b``       α-PBW, scale by τ-1
=============  ==========================================  ===================

An element is integral when all its coordinates have non-negative ħ-powers;
only then can it be specialised at ħ = 0.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Mapping

from .drinfeld import MembershipCertificate, vee_membership
from .freelie import FreeLie, HallElement, LieTensor, PBWMonomial
from .hopfdiff import CommElt, HopfPresentation, abelianize
from .ncpoly import NCPoly, TensorElt, Word, default_trunc, fmt_rational

KINDS = ("rees-vee", "vee-prime", "rees-prime", "prime-vee")
_ALIASES = {
    "ReesVee": "rees-vee",
    "VeePrime": "vee-prime",
    "ReesPrime": "rees-prime",
    "PrimeVee": "prime-vee",
}
COMMUTATIVE_KINDS = ("vee-prime", "rees-prime")


class IntegralityError(ValueError):
    """An element has a negative ħ-power in the kind's basis."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def _shift(d: Mapping, e: int, c) -> dict:
    return {(k, e0 + e): v * c for (k, e0), v in d.items()}


class DeformedAlgebra:
    """One of the four deformations of ``H_ν`` (family H)."""

    def __init__(self, kind: str, nu: int | None = None, trunc: int | None = None):
        kind = _ALIASES.get(kind, kind)
        if kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
        self.kind = kind
        self.trunc = default_trunc() if trunc is None else trunc
        self.nu = nu
        self.H = HopfPresentation("H", nu, self.trunc)
        self.lie = FreeLie(nu, self.trunc)
        self.amb = self.H.amb
        self._word_coords: dict[Word, dict] = {}
        self._basis: dict = {}

    def __repr__(self) -> str:
        return f"DeformedAlgebra({self.kind!r}, nu={self.nu}, trunc={self.trunc})"

    @property
    def commutative_limit(self) -> bool:
        return self.kind in COMMUTATIVE_KINDS

    @property
    def letter(self) -> str:
        return {"rees-vee": "x", "vee-prime": "β", "rees-prime": "η", "prime-vee": "x"}[self.kind]

    # generators and basis elements inside H(ħ)
    def generator(self, b: HallElement | int) -> NCPoly:
        """The kind's generator attached to a Hall element (or to ``x_n``)."""
        if isinstance(b, int):
            b = self.lie.x(b)
        if self.kind == "rees-vee":
            if not b.is_generator():
                raise ValueError("rees-vee is generated by the x_n alone")
            return NCPoly.gen(b.word[0], self.amb).shift_h(-1)
        return self.basis_poly(PBWMonomial((b,)))

    def basis_poly(self, label) -> NCPoly:
        """Basis element with the given label, written in the ``a``-generators."""
        if label in self._basis:
            return self._basis[label]
        lie = self.lie
        if self.kind == "rees-vee":
            out = NCPoly.word(label, self.amb).shift_h(-len(label))
        elif self.kind == "vee-prime":
            xs = lie.pbw_expand(label)
            out = NCPoly({(w, len(label) - len(w)): c for w, c in xs.items()}, self.amb)
        else:
            shift = label.tau - (len(label) if self.kind == "prime-vee" else 0)
            out = lie.alpha_b(label).shift_h(shift)
        self._basis[label] = out
        return out

    # coordinates
    def word_coords(self, w: Word) -> dict:
        """Coordinates of the a-word ``w`` (coefficient 1, no ħ)."""
        if w not in self._word_coords:
            lie = self.lie
            if self.kind == "rees-vee":
                out = {(w, len(w)): Fraction(1)}
            elif self.kind == "vee-prime":
                raw = lie.pbw_decompose(NCPoly.word(w, self.amb))
                out = {(m, len(w) - len(m)): c for (m, _), c in raw.items()}
            else:
                alpha = lie.a_to_alpha(NCPoly.word(w, self.amb))
                raw = lie.pbw_decompose(alpha)
                extra = 1 if self.kind == "prime-vee" else 0
                out = {(m, e - m.tau + extra * len(m)): c for (m, e), c in raw.items()}
            self._word_coords[w] = out
        return self._word_coords[w]

    def coords(self, p: NCPoly) -> dict:
        """``{(label, ħ-power): coefficient}`` of ``p`` in the kind's basis."""
        out: dict = {}
        for (w, e), c in p.terms.items():
            for k, v in _shift(self.word_coords(w), e, c).items():
                out[k] = out.get(k, 0) + v
        return {k: v for k, v in out.items() if v}

    def tensor_coords(self, t: TensorElt) -> dict:
        """Factorwise coordinates of a tensor: ``{(labels, ħ-power): coefficient}``."""
        out: dict = {}
        for (ws, e), c in t.terms.items():
            partial = {((), e): c}
            for w in ws:
                nxt: dict = {}
                for (labels, e1), c1 in partial.items():
                    for (lab, e2), c2 in self.word_coords(w).items():
                        key = (labels + (lab,), e1 + e2)
                        nxt[key] = nxt.get(key, 0) + c1 * c2
                partial = nxt
            for k, v in partial.items():
                out[k] = out.get(k, 0) + v
        return {k: v for k, v in out.items() if v}

    def from_coords(self, coords: Mapping) -> NCPoly:
        out = NCPoly.zero(self.amb)
        for (lab, e), c in coords.items():
            out = out + self.basis_poly(lab).scale(c, e)
        return out

    def tensor_from_coords(self, coords: Mapping, rank: int = 2) -> TensorElt:
        out = TensorElt.zero(rank, self.amb)
        for (labs, e), c in coords.items():
            out = out + TensorElt.pure(*(self.basis_poly(l) for l in labs)).scale(c, e)
        return out

    @staticmethod
    def valuation(coords: Mapping) -> int | None:
        return min((e for _, e in coords), default=None)

    def is_integral(self, p: NCPoly | TensorElt) -> bool:
        c = self.coords(p) if isinstance(p, NCPoly) else self.tensor_coords(p)
        v = self.valuation(c)
        return v is None or v >= 0

    def require_integral(self, coords: Mapping, what: str = "element") -> None:
        bad = {k: v for k, v in coords.items() if k[1] < 0}
        if bad:
            (lab, e), c = min(bad.items(), key=lambda kv: kv[0][1])
            raise IntegralityError(f"{what} has ħ^{e} on basis element {self.label_str(lab)}", (lab, e, c))

    # structure maps
    def coproduct(self, p: NCPoly) -> dict:
        return self.tensor_coords(self.H.coproduct(p))

    def antipode(self, p: NCPoly) -> dict:
        return self.coords(self.H.antipode(p))

    # printing
    def label_str(self, lab) -> str:
        if self.kind == "rees-vee":
            return "*".join(f"x{n}" for n in lab) if lab else "1"
        return lab.format(self.letter)

    def format_coords(self, coords: Mapping, tensor: bool = False) -> str:
        items = []
        for (lab, e), c in coords.items():
            if tensor:
                body = "(" + " ⊗ ".join(self.label_str(l) for l in lab) + ")"
                order = tuple(_label_order(l) for l in lab)
            else:
                body = self.label_str(lab)
                order = _label_order(lab)
            items.append(((order, e), body, e, c))
        items.sort(key=lambda t: t[0])
        if not items:
            return "0"
        out = ""
        for i, (_, body, e, c) in enumerate(items):
            hs = "" if e == 0 else ("h " if e == 1 else f"h^{e} ")
            a = abs(c)
            coeff = "" if a == 1 else f"{fmt_rational(a)} "
            s = f"{coeff}{hs}{body}"
            if i == 0:
                out = ("-" if c < 0 else "") + s
            else:
                out += (" - " if c < 0 else " + ") + s
        return out

    # ħ = 0
    def specialize_zero(self, p: NCPoly) -> CommElt | NCPoly:
        """Image of an integral element in the ħ = 0 fibre."""
        c = self.coords(p)
        self.require_integral(c)
        flat = {lab: v for (lab, e), v in c.items() if e == 0}
        if self.commutative_limit:
            return CommElt(1, {((_comm_mono(lab),), 0): v for lab, v in flat.items()})
        return self._u_poly(flat)

    def specialize_zero_tensor(self, t: TensorElt) -> CommElt | TensorElt:
        c = self.tensor_coords(t)
        self.require_integral(c)
        flat = {labs: v for (labs, e), v in c.items() if e == 0}
        if self.commutative_limit:
            out: dict = {}
            for labs, v in flat.items():
                key = (tuple(_comm_mono(l) for l in labs), 0)
                out[key] = out.get(key, 0) + v
            return CommElt(t.rank, out)
        return self._u_tensor(flat, t.rank)

    def _u_label_poly(self, lab) -> NCPoly:
        if self.kind == "rees-vee":
            return NCPoly.word(lab, self.amb)
        return self.lie.pbw_poly(lab)

    def _u_poly(self, flat: Mapping) -> NCPoly:
        out = NCPoly.zero(self.amb)
        for lab, v in flat.items():
            out = out + self._u_label_poly(lab).scale(v)
        return out

    def _u_tensor(self, flat: Mapping, rank: int) -> TensorElt:
        out = TensorElt.zero(rank, self.amb)
        for labs, v in flat.items():
            out = out + TensorElt.pure(*(self._u_label_poly(l) for l in labs)).scale(v)
        return out

    def specialize_one(self, p: NCPoly) -> NCPoly:
        """ħ = 1: the element of H itself."""
        return p.specialize(1)

    def structure_at(self, n: int, h: int) -> CommElt | TensorElt:
        """Coproduct of the generator attached to ``x_n`` in the fibre at ``h``."""
        g = self.generator(n)
        if h == 0:
            return self.specialize_zero_tensor(self.H.coproduct(g))
        if h == 1:
            return self.tensor_from_coords(self.coproduct(g)).specialize(1)
        raise ValueError("only the fibres at 0 and 1 are modelled")

    # co-Poisson limit (cocommutative kinds)
    def induced_cobracket(self, n: int) -> LieTensor:
        """``ħ^{-1}(Δ - Δ^op)`` mod ħ on ``x_n``, in Hall coordinates."""
        if self.commutative_limit:
            raise ValueError(f"{self.kind} has a commutative limit; use cotangent_cobracket")
        g = self.generator(n)
        d = self.H.coproduct(g)
        c = self.tensor_coords(d - d.flip())
        self.require_integral(c, "Δ - Δ^op")
        if any(e == 0 for _, e in c):
            raise AssertionError("the ħ = 0 fibre is not cocommutative")
        flat = {labs: v for (labs, e), v in c.items() if e == 1}
        return LieTensor(self.lie, self.lie.tensor_coordinates(self._u_tensor(flat, 2)))

    # Poisson limit (commutative kinds)
    def poisson_bracket(self, b1: HallElement, b2: HallElement) -> CommElt:
        """``{g_{b1}, g_{b2}} = ħ^{-1}[g_{b1}, g_{b2}]`` at ħ = 0."""
        if not self.commutative_limit:
            raise ValueError(f"{self.kind} has a cocommutative limit")
        g1, g2 = self.generator(b1), self.generator(b2)
        return self.specialize_zero(g1.commutator(g2).shift_h(-1))

    def expected_poisson(self, b1: HallElement, b2: HallElement) -> CommElt:
        """``g_{[b1,b2]}`` expanded in the Hall basis."""
        br = self.lie.bracket(self.lie.element(b1), self.lie.element(b2))
        out = CommElt(1)
        for h, c in br.terms.items():
            out = out + CommElt.var(h, c)
        return out

    def poisson_table(self, weight: int) -> dict[tuple[HallElement, HallElement], CommElt]:
        basis = self.lie.hall_basis(weight)
        return {
            (u, v): self.poisson_bracket(u, v)
            for i, u in enumerate(basis)
            for v in basis[i + 1 :]
            if u.weight + v.weight <= weight
        }

    def is_commutative_at_zero(self, b1: HallElement, b2: HallElement) -> bool:
        g1, g2 = self.generator(b1), self.generator(b2)
        v = self.valuation(self.coords(g1.commutator(g2)))
        return v is None or v >= 1

    def cotangent_cobracket(self, n: int) -> LieTensor:
        """Linear ⊗ linear part of ``Δ - Δ^op`` on the generator of ``x_n`` at ħ = 0.

        Cotangent vectors are labelled by Hall elements, so the result is an
        element of ``L ∧ L``.
        """
        if not self.commutative_limit:
            raise ValueError(f"{self.kind} has a cocommutative limit")
        g = self.generator(n)
        d = self.H.coproduct(g)
        c = self.tensor_coords(d - d.flip())
        self.require_integral(c, "Δ - Δ^op")
        out: dict = {}
        for (labs, e), v in c.items():
            if e == 0 and all(len(l) == 1 for l in labs):
                key = tuple(l[0] for l in labs)
                out[key] = out.get(key, 0) + v
        return LieTensor(self.lie, out)

    def relation_residual(self, b1: HallElement, b2: HallElement) -> NCPoly:
        """Left minus right side of the kind's commutation relation, in H(ħ)."""
        lie = self.lie
        g1, g2 = self.generator(b1), self.generator(b2)
        lhs = g1.commutator(g2)
        if self.kind == "rees-vee":
            raise ValueError("rees-vee is free: there is no relation to check")
        br = lie.bracket(lie.element(b1), lie.element(b2))
        rhs = NCPoly.zero(self.amb)
        for h, c in br.terms.items():
            rhs = rhs + self.generator(h).scale(c)
        if self.kind in ("vee-prime", "rees-prime"):
            rhs = rhs.shift_h(1)
        return lhs - rhs

    def presentation_check(self, b1: HallElement, b2: HallElement) -> bool:
        return not self.relation_residual(b1, b2)


def _label_order(lab):
    if isinstance(lab, PBWMonomial):
        return (lab.weight, len(lab), tuple(h._key for h in lab))
    return (sum(lab), len(lab), lab)


def _comm_mono(lab: PBWMonomial) -> tuple:
    counts: dict = {}
    for h in lab:
        counts[h] = counts.get(h, 0) + 1
    return tuple(sorted(counts.items()))


# --------------------------------------------------------------------------
# Closed forms and named checks


def rees_vee_coproduct(n: int, nu: int | None = None, trunc: int | None = None) -> TensorElt:
    """``Δ(x_n)`` from the closed form

    ``x_n⊗1 + 1⊗x_n + Σ_{m=1}^{n-1} Σ_{k=1}^{m} ħ^k C(n-m+1, k) x_{n-m} ⊗ P^{(k)}_m(x)``

    written in the x-letters (not rescaled back to a)."""
    H = HopfPresentation("H", nu, trunc)
    amb = H.amb
    one = NCPoly.one(amb)
    xn = NCPoly.gen(n, amb)
    out = TensorElt.pure(xn, one) + TensorElt.pure(one, xn)
    for m in range(1, n):
        left = NCPoly.gen(n - m, amb)
        for k in range(1, m + 1):
            c = comb(n - m + 1, k)
            if c:
                out = out + TensorElt.pure(left, H.P_poly(m, k)).scale(c, k)
    return out


def rees_vee_coproduct_computed(alg: DeformedAlgebra, n: int) -> TensorElt:
    """``Δ(x_n)`` obtained by rescaling ``ħ^{-1} Δ(a_n)``, in the x-letters."""
    if alg.kind != "rees-vee":
        raise ValueError("needs the rees-vee kind")
    c = alg.coproduct(alg.generator(n))
    return TensorElt(2, {(labs, e): v for (labs, e), v in c.items()}, alg.amb)


def vee_prime_membership(alg: DeformedAlgebra, b: HallElement) -> MembershipCertificate:
    """The δ-divisibility test applied to ``ħ·b`` written in the x-letters."""
    px = alg.lie.to_poly(b).shift_h(1)
    return vee_membership(alg.H, px)


def rees_prime_zero_coproduct_literal(n: int) -> CommElt:
    """The displayed ħ = 0 coproduct of ``ᾱ_n`` taken verbatim.

    ``ᾱ_n⊗1 + 1⊗ᾱ_n + Σ_{k=2}^{n-1} C(n,k) ᾱ_k⊗ᾱ_1^{n-k}
    + Σ_{k=1}^{n-1} (k+1) ᾱ_1^k⊗ᾱ_{n-k}``, variables named by the index.
    """
    out = CommElt.from_monomials([[n], []]) + CommElt.from_monomials([[], [n]])
    for k in range(2, n):
        out = out + CommElt.from_monomials([[k], [1] * (n - k)], comb(n, k))
    for k in range(1, n):
        out = out + CommElt.from_monomials([[1] * k, [n - k]], k + 1)
    return out


def rees_prime_zero_coproduct_corrected(n: int) -> CommElt:
    """Closed form matching the computed ħ = 0 coproduct of ``ᾱ_n``.

    ``ᾱ_n⊗1 + 1⊗ᾱ_n + Σ_{k=2}^{n-1} C(n,k) ᾱ_k⊗ᾱ_1^{n-k}
    + Σ (k+1) C(k+r-1, r) ᾱ_1^k⊗ᾱ_1^r ᾱ_s`` over ``k ≥ 1, r ≥ 0, s ≥ 2``
    with ``k + r + s = n``. The ``r = 0`` terms are those of the verbatim
    formula; its ``s = 1`` term does not occur.
    """
    out = CommElt.from_monomials([[n], []]) + CommElt.from_monomials([[], [n]])
    for k in range(2, n):
        out = out + CommElt.from_monomials([[k], [1] * (n - k)], comb(n, k))
    for k in range(1, n):
        for s in range(2, n - k + 1):
            r = n - k - s
            out = out + CommElt.from_monomials([[1] * k, [1] * r + [s]], (k + 1) * comb(k + r - 1, r))
    return out


def index_names(c: CommElt) -> CommElt:
    """Rename generator Hall elements ``x_n`` to their index ``n``."""
    return c.map_vars(lambda h: h.word[0] if h.is_generator() else h)


def rees_prime_zero_coproduct(alg: DeformedAlgebra, n: int) -> CommElt:
    """Computed ħ = 0 coproduct of ``η_{x_n}``, variables named by index."""
    if alg.kind != "rees-prime":
        raise ValueError("needs the rees-prime kind")
    return index_names(alg.structure_at(n, 0))


# section / retraction between F[G_ν] and the vee-prime limit


def mu_map(alg: DeformedAlgebra, p: CommElt) -> CommElt:
    """``μ``: ``a_n ↦ β_{x_n}``."""
    return p.map_vars(lambda n: alg.lie.x(n))


def pi_map(p: CommElt) -> CommElt:
    """``π``: ``β_{x_n} ↦ a_n``, and ``β_b ↦ 0`` for brackets ``b``."""
    return p.map_vars(lambda h: h.word[0] if h.is_generator() else None)


def section_retraction_check(alg: DeformedAlgebra, weight: int | None = None) -> dict[str, bool]:
    """Checks that ``μ`` and ``π`` are Hopf maps with ``π∘μ = id``, through ``weight``."""
    if alg.kind != "vee-prime":
        raise ValueError("needs the vee-prime kind")
    W = alg.trunc if weight is None else weight
    H = alg.H
    report: dict[str, bool] = {}
    for n in range(1, W + 1):
        a_n = CommElt.var(n)
        report[f"pi_mu_a{n}"] = pi_map(mu_map(alg, a_n)) == a_n
        ab = abelianize(H.coproduct(H.gen(n)))
        lim = alg.structure_at(n, 0)
        report[f"pi_hopf_a{n}"] = pi_map(lim) == ab
        report[f"mu_hopf_a{n}"] = mu_map(alg, ab) == lim
    for b in alg.lie.hall_basis(W):
        if not b.is_generator():
            report[f"pi_kills_{b}"] = not pi_map(CommElt.var(b))
    return report
