# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the loops in ``_pykernels``; same contracts."""


cdef Py_ssize_t _wsum(tuple w):
    cdef Py_ssize_t s = 0
    cdef object x
    for x in w:
        s += <Py_ssize_t>x
    return s


def mul_terms(dict a, dict b, Py_ssize_t trunc):
    if not a or not b:
        return {}
    cdef list right = []
    cdef object key, c, ca, cb, old
    cdef tuple wa, wb, item
    cdef Py_ssize_t ea, eb, wt, budget, i, n
    for key, c in b.items():
        right.append((_wsum(<tuple>key[0]), key[0], key[1], c))
    right.sort(key=_first)
    n = len(right)
    cdef dict out = {}
    for key, ca in a.items():
        wa = <tuple>key[0]
        ea = key[1]
        budget = trunc - _wsum(wa)
        if budget < 0:
            continue
        for i in range(n):
            item = <tuple>right[i]
            wt = item[0]
            if wt > budget:
                break
            wb = <tuple>item[1]
            eb = item[2]
            cb = item[3]
            k2 = (wa + wb, ea + eb)
            old = out.get(k2)
            if old is None:
                out[k2] = ca * cb
            else:
                out[k2] = old + ca * cb
    return {k: v for k, v in out.items() if v}


def _first(t):
    return t[0]


cdef Py_ssize_t _tsum(tuple ws):
    cdef Py_ssize_t s = 0
    cdef object w
    for w in ws:
        s += _wsum(<tuple>w)
    return s


def tensor_mul_terms(dict a, dict b, Py_ssize_t trunc):
    if not a or not b:
        return {}
    cdef list right = []
    cdef object key, c, ca, cb, old
    cdef tuple wsa, wsb, item, merged
    cdef Py_ssize_t ea, eb, wt, budget, i, j, n, r
    for key, c in b.items():
        right.append((_tsum(<tuple>key[0]), key[0], key[1], c))
    right.sort(key=_first)
    n = len(right)
    cdef dict out = {}
    for key, ca in a.items():
        wsa = <tuple>key[0]
        ea = key[1]
        budget = trunc - _tsum(wsa)
        if budget < 0:
            continue
        r = len(wsa)
        for i in range(n):
            item = <tuple>right[i]
            wt = item[0]
            if wt > budget:
                break
            wsb = <tuple>item[1]
            eb = item[2]
            cb = item[3]
            merged = tuple([(<tuple>wsa[j]) + (<tuple>wsb[j]) for j in range(r)])
            k2 = (merged, ea + eb)
            old = out.get(k2)
            if old is None:
                out[k2] = ca * cb
            else:
                out[k2] = old + ca * cb
    return {k: v for k, v in out.items() if v}


def rref_int(list rows, Py_ssize_t ncols):
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t r = 0, c, p, i, j
    cdef object prev = 1, piv, f, x
    cdef list prow, row
    cdef list pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        p = r
        while p < nrows and (<list>rows[p])[c] == 0:
            p += 1
        if p == nrows:
            continue
        if p != r:
            rows[p], rows[r] = rows[r], rows[p]
        prow = <list>rows[r]
        piv = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = <list>rows[i]
            f = row[c]
            if f == 0:
                if piv != prev:
                    for j in range(ncols):
                        x = row[j]
                        if x:
                            row[j] = (piv * x) // prev
                continue
            for j in range(ncols):
                row[j] = (piv * row[j] - f * prow[j]) // prev
        prev = piv
        pivots.append(c)
        r += 1
    return pivots, rows[:r], prev
