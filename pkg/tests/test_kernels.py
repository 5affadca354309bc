"""The compiled and pure-Python kernels must agree exactly."""

import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from diffhopf import _kernels, _pykernels

try:
    from diffhopf import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")

coeff = st.one_of(st.integers(-5, 5), st.fractions(max_denominator=3, min_value=-3, max_value=3))
word = st.lists(st.integers(1, 4), max_size=3).map(tuple)
terms = st.dictionaries(st.tuples(word, st.integers(-1, 1)), coeff, max_size=6)
tterms = st.dictionaries(st.tuples(st.tuples(word, word), st.integers(0, 1)), coeff, max_size=5)


def mul_oracle(a, b, trunc):
    out = {}
    for (wa, ea), ca in a.items():
        for (wb, eb), cb in b.items():
            if sum(wa) + sum(wb) <= trunc:
                k = (wa + wb, ea + eb)
                out[k] = out.get(k, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


@given(terms, terms, st.integers(0, 8))
def test_python_mul_matches_oracle(a, b, trunc):
    assert _pykernels.mul_terms(a, b, trunc) == mul_oracle(a, b, trunc)


@needs_c
@given(terms, terms, st.integers(0, 8))
def test_backends_agree_on_products(a, b, trunc):
    assert _ckernels.mul_terms(a, b, trunc) == _pykernels.mul_terms(a, b, trunc)


@needs_c
@given(tterms, tterms, st.integers(0, 8))
def test_backends_agree_on_tensor_products(a, b, trunc):
    assert _ckernels.tensor_mul_terms(a, b, trunc) == _pykernels.tensor_mul_terms(a, b, trunc)


@needs_c
@given(st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=1, max_size=5))
def test_backends_agree_on_elimination(rows):
    a = _ckernels.rref_int([list(r) for r in rows], 4)
    b = _pykernels.rref_int([list(r) for r in rows], 4)
    assert a == b


def test_env_var_selects_pure_python():
    code = "from diffhopf import _kernels; print(_kernels.BACKEND)"
    env = dict(os.environ, DIFFHOPF_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@needs_c
def test_compiled_backend_is_default():
    if os.environ.get("DIFFHOPF_PURE_PYTHON"):
        pytest.skip("pure Python forced by the environment")
    assert _kernels.BACKEND == "cython"


def test_fraction_coefficients_survive():
    a = {((1,), 0): Fraction(1, 2)}
    assert _kernels.mul_terms(a, a, 4) == {((1, 1), 0): Fraction(1, 4)}


def test_benchmark_script_runs():
    script = os.path.join(os.path.dirname(__file__), "..", "benchmarks", "bench_kernels.py")
    r = subprocess.run(
        [sys.executable, script, "--trunc", "5", "--repeat", "1", "--number", "1"], capture_output=True, text=True
    )
    assert r.returncode == 0, r.stderr
    assert "rref_int" in r.stdout
