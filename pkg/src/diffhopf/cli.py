"""``hopfdiff``: compute structure maps and run the verification suites.

    hopfdiff compute antipode a2
    hopfdiff compute delta --n 2 a2
    hopfdiff compute cobracket --which star x5
    hopfdiff verify prop42 --wmax 6

Exit status is 0 on success, 1 when a suite has a failing check and 2 for
usage, parse or domain errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Sequence

from .deform import DeformedAlgebra, IntegralityError
from .drinfeld import delta_map, filtration_component
from .freelie import FreeLie, HallElement, LieElement, NotLieError
from .hopfdiff import CommElt, HopfPresentation, abelianize
from .ncpoly import Ambient, LaurentCoeff, NCPoly, ParseError, TensorElt, default_trunc, parse_poly
from .nottingham import compose, invert, pair, parse_series
from .suites import SUITES, SuiteParams, run_suite


class UsageError(Exception):
    """Bad input; reported on stderr with exit status 2."""


_PARSE_TRUNC = 64
_INNER_BRACKET = re.compile(r"\[([^\[\]]*)\]")


def expand_brackets(text: str) -> str:
    """Rewrite ``[u,v]`` as ``((u)*(v)-(v)*(u))``, innermost brackets first."""
    while "[" in text:
        m = _INNER_BRACKET.search(text)
        if not m:
            raise UsageError(f"unbalanced brackets in {text!r}")
        parts = m.group(1).split(",")
        if len(parts) != 2:
            raise UsageError(f"a bracket needs exactly two entries: [{m.group(1)}]")
        u, v = parts
        text = text[: m.start()] + f"(({u})*({v})-({v})*({u}))" + text[m.end() :]
    if "]" in text:
        raise UsageError(f"unbalanced brackets in {text!r}")
    return text


def parse_lie(text: str, lie: FreeLie) -> LieElement:
    p = parse_poly(expand_brackets(text), lie.amb, letters="x")
    return lie.from_poly(p)


def parse_hall(text: str, lie: FreeLie) -> HallElement:
    x = parse_lie(text, lie)
    if len(x.terms) != 1 or next(iter(x.terms.values())) != 1:
        raise UsageError(f"{text!r} is not a single Hall basis element")
    return next(iter(x.terms))


def _fmt(value) -> str:
    if isinstance(value, (NCPoly, TensorElt)):
        return value.format()
    return str(value)


# --------------------------------------------------------------------------
# compute subcommands


def _presentation(args) -> HopfPresentation:
    return HopfPresentation(args.family, args.nu, args.trunc)


def parse_input(text: str, H: HopfPresentation) -> NCPoly:
    """Parse in H's generators, refusing input that the truncation would cut."""
    wide = parse_poly(text, Ambient(H.nu, _PARSE_TRUNC), letters="a")
    top = max(wide.weights(), default=0)
    if top > H.trunc:
        raise UsageError(f"input has weight {top} above the truncation N = {H.trunc}")
    p = parse_poly(text, H.amb, letters="a")
    H.check(p)
    return p


def _poly(args, H: HopfPresentation) -> NCPoly:
    return parse_input(args.poly, H)


def c_coproduct(args):
    H = _presentation(args)
    return H.coproduct(_poly(args, H))


def c_antipode(args):
    H = _presentation(args)
    return H.antipode(_poly(args, H))


def c_qpoly(args):
    return _presentation(args).Q_poly(args.l, args.t)


def c_zpoly(args):
    return _presentation(args).Z_poly(args.l, args.t)


def c_delta(args):
    H = _presentation(args)
    return delta_map(H).delta_n(args.n, _poly(args, H))


def c_kappa(args):
    H = _presentation(args)
    return delta_map(H).kappa(_poly(args, H))


def c_tau(args):
    H = _presentation(args)
    if H.family != "H":
        raise UsageError("τ is defined for family H")
    return FreeLie(args.nu, H.trunc).tau_degree(_poly(args, H))


def c_filtration(args):
    H = _presentation(args)
    return filtration_component(H, args.w)


def c_cobracket(args):
    lie = FreeLie(args.nu, args.trunc)
    return lie.cobracket(parse_lie(args.element, lie), args.which)


def c_specialize(args):
    alg = DeformedAlgebra(args.kind or "rees-vee", args.nu, args.trunc)
    value = alg.structure_at(args.n, args.at)
    if isinstance(value, CommElt):
        return value.format(lambda h: f"{alg.letter}{h}")
    if args.at == 0:
        return value.format("x")
    return value


def c_poisson(args):
    alg = DeformedAlgebra(args.kind or "vee-prime", args.nu, args.trunc)
    b1, b2 = parse_hall(args.b1, alg.lie), parse_hall(args.b2, alg.lie)
    return alg.poisson_bracket(b1, b2).format(lambda h: f"{alg.letter}{h}")


def _series_bound(args, texts: Sequence[str]) -> int:
    if args.bound is not None:
        return args.bound
    return max(parse_series(t).bound for t in texts)


def c_compose(args):
    M = _series_bound(args, [args.f, args.g])
    return compose(parse_series(args.f, M, args.odd), parse_series(args.g, M, args.odd))


def c_invert(args):
    M = _series_bound(args, [args.f])
    return invert(parse_series(args.f, M, args.odd))


def c_pair(args):
    wide = parse_poly(args.poly, Ambient(None, _PARSE_TRUNC), letters="a")
    M = max(_series_bound(args, args.series), max(wide.weights(), default=1)) if args.bound is None else args.bound
    fs = [parse_series(s, M) for s in args.series]
    H = HopfPresentation("H", None, max(M, 1))
    p = parse_input(args.poly, H)
    q = abelianize(H.coproduct(p)) if args.coproduct else abelianize(p)
    return pair(q, *fs)


COMPUTE = {
    "coproduct": c_coproduct,
    "antipode": c_antipode,
    "qpoly": c_qpoly,
    "zpoly": c_zpoly,
    "delta": c_delta,
    "kappa": c_kappa,
    "tau": c_tau,
    "filtration": c_filtration,
    "cobracket": c_cobracket,
    "specialize": c_specialize,
    "poisson": c_poisson,
    "compose": c_compose,
    "invert": c_invert,
    "pair": c_pair,
}


def _to_json(value):
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, LaurentCoeff):
        return str(value)
    if isinstance(value, int):
        return value
    return str(value)


def _print_filtration(rep) -> str:
    lines = [f"weight {rep.weight}, dim {rep.dim}"]
    for lv in rep.levels:
        lines.append(f"k={lv.k} dimD={lv.dim_d} dimTheta={lv.dim_theta} {'equal' if lv.equal else 'DIFFERENT'}")
    return "\n".join(lines)


def run_compute(args) -> int:
    value = COMPUTE[args.sub](args)
    text = _print_filtration(value) if hasattr(value, "levels") else _fmt(value)
    if args.json:
        print(json.dumps({"command": args.sub, "result": text, "data": _to_json(value)}, ensure_ascii=False, sort_keys=True))
    else:
        print(text)
    return 0


def run_verify(args) -> int:
    params = SuiteParams(
        seed=args.seed,
        wmax=args.wmax,
        nmax=args.nmax,
        lmax=args.lmax,
        tmax=args.tmax,
        nu=args.nu,
        family=args.family,
        trunc=args.trunc,
    )
    report = run_suite(args.suite, params)
    print(report.dumps(not args.no_timing) if args.json else report.format())
    return 0 if report.ok else 1


# --------------------------------------------------------------------------
# argument parsing


_DEFAULTS = {"trunc": None, "nu": None, "family": "H", "kind": None, "json": False}


def _common(suppress: bool) -> argparse.ArgumentParser:
    """Shared flags. Below the top level their defaults are suppressed, so a
    flag given before the subcommand is not reset by the subparser."""
    p = argparse.ArgumentParser(add_help=False)
    d = (lambda k: argparse.SUPPRESS) if suppress else _DEFAULTS.get
    p.add_argument("--trunc", type=int, default=d("trunc"), help=f"weight truncation N (default {default_trunc()})")
    p.add_argument("--nu", type=int, default=d("nu"), help="keep generators of weight ≤ ν only")
    p.add_argument("--family", choices=("H", "K"), default=d("family"))
    p.add_argument("--kind", choices=("rees-vee", "vee-prime", "rees-prime", "prime-vee"), default=d("kind"))
    p.add_argument("--json", action="store_true", default=d("json"), help="machine-readable output")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common(True)
    parser = argparse.ArgumentParser(prog="hopfdiff", description=__doc__.splitlines()[0], parents=[_common(False)])
    top = parser.add_subparsers(dest="cmd", required=True)

    comp = top.add_parser("compute", help="compute one value", parents=[common])
    subs = comp.add_subparsers(dest="sub", required=True)
    for name in ("coproduct", "antipode", "kappa", "tau"):
        s = subs.add_parser(name, parents=[common])
        s.add_argument("poly", help="polynomial in a1, a2, ... e.g. 'a1*a2 - 2 a3'")
    s = subs.add_parser("delta", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("poly")
    for name in ("qpoly", "zpoly"):
        s = subs.add_parser(name, parents=[common])
        s.add_argument("--l", type=int, required=True)
        s.add_argument("--t", type=int, required=True)
    s = subs.add_parser("filtration", parents=[common])
    s.add_argument("--w", type=int, required=True, help="weight")
    s = subs.add_parser("cobracket", parents=[common])
    s.add_argument("--which", choices=("bullet", "star"), default="bullet")
    s.add_argument("element", help="Lie element, e.g. 'x5' or '[x1,x3] - 2 x4'")
    s = subs.add_parser("specialize", parents=[common])
    s.add_argument("--at", type=int, choices=(0, 1), required=True)
    s.add_argument("--n", type=int, required=True, help="index of the generator x_n")
    s = subs.add_parser("poisson", parents=[common])
    s.add_argument("b1")
    s.add_argument("b2")
    for name, nargs in (("compose", 2), ("invert", 1)):
        s = subs.add_parser(name, parents=[common])
        s.add_argument("--bound", type=int, default=None, help="order bound M")
        s.add_argument("--odd", action="store_true", help="treat inputs as odd series")
        for arg in ("f", "g")[:nargs]:
            s.add_argument(arg, help="series such as 'x + 1/2 x^2 - 3 x^4'")
    s = subs.add_parser("pair", parents=[common])
    s.add_argument("--bound", type=int, default=None)
    s.add_argument("--coproduct", action="store_true", help="pair Δ(poly) with f ⊗ g")
    s.add_argument("poly")
    s.add_argument("series", nargs="+")

    ver = top.add_parser("verify", help="run a verification suite", parents=[common])
    ver.add_argument("suite", choices=sorted(SUITES))
    ver.add_argument("--seed", type=int, default=0)
    for b in ("wmax", "nmax", "lmax", "tmax"):
        ver.add_argument(f"--{b}", type=int, default=None)
    ver.add_argument("--no-timing", action="store_true", help="report ms as 0 so JSON output is reproducible")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.cmd == "compute":
            if args.sub == "pair" and args.coproduct and len(args.series) != 2:
                raise UsageError("--coproduct needs two series")
            if args.sub == "pair" and not args.coproduct and len(args.series) != 1:
                raise UsageError("pairing a polynomial needs one series")
            return run_compute(args)
        return run_verify(args)
    except (UsageError, ParseError, NotLieError, IntegralityError, ValueError, KeyError) as exc:
        print(f"hopfdiff: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
