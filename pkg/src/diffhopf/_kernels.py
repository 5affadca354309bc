"""Backend selection for the hot loops.

The compiled extension is used when it was built and importable, unless the
environment variable ``DIFFHOPF_PURE_PYTHON`` is set to a non-empty value.
Both backends return identical results.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
mul_terms = _pykernels.mul_terms
tensor_mul_terms = _pykernels.tensor_mul_terms
rref_int = _pykernels.rref_int

if not os.environ.get("DIFFHOPF_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        BACKEND = "cython"
        mul_terms = _ckernels.mul_terms
        tensor_mul_terms = _ckernels.tensor_mul_terms
        rref_int = _ckernels.rref_int

__all__ = ["BACKEND", "mul_terms", "tensor_mul_terms", "rref_int"]
