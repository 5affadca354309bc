"""Pure-Python hot loops. The compiled module ``_ckernels`` mirrors these exactly."""

from __future__ import annotations


def mul_terms(a: dict, b: dict, trunc: int) -> dict:
    """Product of two sparse term maps keyed by ``(word, hpow)``.

    Words are concatenated, ħ-exponents added, and products of weight
    above ``trunc`` are dropped. Zero coefficients are removed.
    """
    if not a or not b:
        return {}
    right = sorted(((sum(w), w, e, c) for (w, e), c in b.items()), key=lambda t: t[0])
    out: dict = {}
    get = out.get
    for (wa, ea), ca in a.items():
        budget = trunc - sum(wa)
        if budget < 0:
            continue
        for wt, wb, eb, cb in right:
            if wt > budget:
                break
            key = (wa + wb, ea + eb)
            out[key] = get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def tensor_mul_terms(a: dict, b: dict, trunc: int) -> dict:
    """Componentwise product of tensor term maps keyed by ``(words, hpow)``."""
    if not a or not b:
        return {}
    right = sorted(
        ((sum(map(sum, ws)), ws, e, c) for (ws, e), c in b.items()), key=lambda t: t[0]
    )
    out: dict = {}
    get = out.get
    for (wsa, ea), ca in a.items():
        budget = trunc - sum(map(sum, wsa))
        if budget < 0:
            continue
        for wt, wsb, eb, cb in right:
            if wt > budget:
                break
            key = (tuple(u + v for u, v in zip(wsa, wsb)), ea + eb)
            out[key] = get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def rref_int(rows: list, ncols: int):
    """Fraction-free Gauss-Jordan elimination on an integer matrix.

    Returns ``(pivots, rows, det)``: the pivot column of each nonzero row,
    the reduced integer rows, and the common pivot value. Dividing the
    returned rows by ``det`` gives the reduced row echelon form.
    Rows are modified in place.
    """
    nrows = len(rows)
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and rows[p][c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
        prow = rows[r]
        piv = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f == 0:
                if piv != prev:
                    for j in range(ncols):
                        if row[j]:
                            row[j] = (piv * row[j]) // prev
                continue
            for j in range(ncols):
                row[j] = (piv * row[j] - f * prow[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return pivots, rows[:r], prev
