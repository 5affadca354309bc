"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py --trunc 8 --repeat 5
"""

from __future__ import annotations

import argparse
import random
import timeit
from fractions import Fraction

from diffhopf import _pykernels
from diffhopf.hopfdiff import HopfPresentation
from diffhopf.ncpoly import words_of_weight

try:
    from diffhopf import _ckernels
except ImportError:
    _ckernels = None


def workloads(trunc: int, seed: int):
    rng = random.Random(seed)
    H = HopfPresentation("H", None, trunc)
    # every word up to half the bound, with small rational coefficients
    half = {(w, 0): Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for k in range(trunc // 2 + 1) for w in words_of_weight(k, H.amb)}
    half = {k: v for k, v in half.items() if v}
    t = H.coproduct(H.gen(trunc // 2)).terms
    n = 2 ** (trunc - 3)
    rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
    return {
        "mul_terms": lambda k: k.mul_terms(half, half, trunc),
        "tensor_mul_terms": lambda k: k.tensor_mul_terms(t, t, trunc),
        "rref_int": lambda k: k.rref_int([list(r) for r in rows], n),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--trunc", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = {"python": _pykernels}
    if _ckernels is not None:
        backends["cython"] = _ckernels
    else:
        print("compiled extension not built; timing the fallback only")

    print(f"{'kernel':<18}" + "".join(f"{b:>12}" for b in backends) + ("    speedup" if len(backends) == 2 else ""))
    for name, job in workloads(args.trunc, args.seed).items():
        results = {b: job(k) for b, k in backends.items()}
        if len(set(map(repr, results.values()))) != 1:
            raise SystemExit(f"{name}: backends disagree")
        best = {
            b: min(timeit.repeat(lambda k=k: job(k), number=args.number, repeat=args.repeat)) / args.number
            for b, k in backends.items()
        }
        line = f"{name:<18}" + "".join(f"{best[b] * 1e3:>10.2f}ms" for b in backends)
        if len(backends) == 2:
            line += f"{best['python'] / best['cython']:>10.2f}x"
        print(line)


if __name__ == "__main__":
    main()
