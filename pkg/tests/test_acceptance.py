"""Acceptance criteria 1 to 15, one PASS/FAIL line each.

Three criteria contain a sub-claim that is false as literally stated (5, 9
and 13). Each is evaluated verbatim and reported FAIL, and the verbatim
test is a strict xfail holding the counterexample. The remaining parts of the
same criterion, plus the corrected statement, are ordinary tests.

Run ``python3 tests/test_acceptance.py`` to print the lines without pytest.
"""

import time
from functools import lru_cache

import pytest

from diffhopf.freelie import FreeLie
from diffhopf.hopfdiff import HopfPresentation
from diffhopf import suites as S

PARAMS = S.SuiteParams(seed=0)


def _failing(checks):
    return [c for c in checks if not c.passed]


@lru_cache(maxsize=None)
def criterion(n: int):
    """``(checks, seconds)`` for criterion ``n``."""
    t0 = time.perf_counter()
    if n == 1:
        checks = S.suite_hopf_axioms(S.SuiteParams(seed=0, nu=8, wmax=8))
    elif n == 2:
        checks = S.suite_q_identities(S.SuiteParams(lmax=10, tmax=10))
    elif n == 3:
        checks = S.delta_value_checks(HopfPresentation("H", None, 6), 6)
    elif n == 4:
        checks = S.suite_lemma41(S.SuiteParams(wmax=8))
    elif n == 5:
        checks = S.kappa_checks(HopfPresentation("H", None, 8), FreeLie(None, 8), 7, 8, 6)
    elif n == 6:
        checks = S.suite_prop42(S.SuiteParams(wmax=6))
    elif n == 7:
        checks = S.suite_thm21(S.SuiteParams(nmax=8))
    elif n == 8:
        checks = S.suite_thm31(S.SuiteParams(wmax=6, nmax=8))
    elif n == 9:
        checks = S.suite_thm41(S.SuiteParams(nmax=8, wmax=6))
    elif n == 10:
        checks = S.suite_thm51(S.SuiteParams(nmax=8, wmax=6))
    elif n == 11:
        checks = [c for c in S.suite_cobracket_laws(PARAMS) if not c.id.startswith("kernel/")]
    elif n == 12:
        checks = [c for c in S.suite_cobracket_laws(PARAMS) if c.id.startswith("kernel/")]
    elif n == 13:
        checks = S.suite_thm61(S.SuiteParams(wmax=6, nmax=8))
    elif n == 14:
        checks = S.suite_nottingham(S.SuiteParams(seed=0, nmax=8))
    elif n == 15:
        checks = S.suite_odd_morphism(S.SuiteParams(seed=0, wmax=8))
    else:
        raise ValueError(n)
    return checks, time.perf_counter() - t0


# ids of the checks that test a statement verbatim and are known to be false
LITERAL = {
    5: "kappa_bracket_literal/",
    9: "zero_coproduct_literal/",
    13: "kernel_dims_differ",
}


def status_line(n: int) -> tuple[str, str]:
    checks, secs = criterion(n)
    bad = _failing(checks)
    note = f"{len(checks) - len(bad)}/{len(checks)} checks, {secs:.1f}s"
    if bad:
        note += "; failing: " + ", ".join(c.id for c in bad[:4]) + (" ..." if len(bad) > 4 else "")
    if n in LITERAL and bad and all(c.id.startswith(LITERAL[n]) for c in bad):
        note += " (verbatim statement false; every other check passes)"
    return ("PASS" if not bad else "FAIL"), note


def _record(log, n):
    log[n] = status_line(n)
    return criterion(n)[0]


def _rest(n):
    return [c for c in criterion(n)[0] if not c.id.startswith(LITERAL[n])]


def _literal(n):
    return [c for c in criterion(n)[0] if c.id.startswith(LITERAL[n])]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 7, 8, 10, 11, 12, 14, 15])
def test_criterion(n, acceptance_log):
    checks = _record(acceptance_log, n)
    assert checks, "criterion produced no checks"
    assert not _failing(checks), [c.to_json() for c in _failing(checks)]


def test_criterion_1_runtime():
    # [TRIVIAL] runtime target of under 60 s
    assert criterion(1)[1] < 60


def test_criterion_6_runtime():
    assert criterion(6)[1] < 300


@pytest.mark.parametrize("n", sorted(LITERAL))
def test_criterion_remaining_parts(n, acceptance_log):
    _record(acceptance_log, n)
    rest = _rest(n)
    assert rest
    assert not _failing(rest), [c.to_json() for c in _failing(rest)]


@pytest.mark.xfail(strict=True, reason="κ([α_1, α_s]) = s-1, one more than r+s-3; τ([x_1,x_s]) = s-1 agrees")
def test_criterion_5_verbatim():
    lit = _literal(5)
    assert not _failing(lit), [c.witness for c in _failing(lit)]


def test_criterion_5_literal_fails_only_at_r1():
    # the verbatim formula holds for every r ≥ 2
    bad = _failing(_literal(5))
    assert bad and all("/r=1," in c.id for c in bad)
    for c in _literal(5):
        if "/r=1," not in c.id:
            assert c.passed


@pytest.mark.xfail(strict=True, reason="displayed ħ = 0 coproduct misses mixed terms ᾱ_1^k ⊗ ᾱ_1^r ᾱ_s and has a spurious s = 1 term")
def test_criterion_9_verbatim():
    lit = _literal(9)
    assert not _failing(lit), [c.witness for c in _failing(lit)]


@pytest.mark.xfail(strict=True, reason="both kernels have dimensions 1,1,1,1,2,2 in weights 1..6")
def test_criterion_13_verbatim():
    lit = _literal(13)
    assert not _failing(lit), [c.witness for c in _failing(lit)]


def test_criterion_13_recorded_dimensions():
    # [DERIVED] both kernels equal the slice of the free Lie algebra on x1, x2,
    # whose dimensions are the Lyndon counts for weights (1, 2)
    lie = FreeLie(None, 6)
    assert S.kernel_dimensions(lie, 6, "bullet") == [1, 1, 1, 1, 2, 2]
    assert S.kernel_dimensions(lie, 6, "star") == [1, 1, 1, 1, 2, 2]


if __name__ == "__main__":
    for n in range(1, 16):
        status, note = status_line(n)
        print(f"criterion {n:2d}: {status}  {note}", flush=True)
