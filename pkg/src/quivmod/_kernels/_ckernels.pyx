# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled modular elimination kernels (same contract as _pykernels).

Entries must lie in range(p) and p must be below 2**31 so that products
of two residues fit in a signed 64-bit integer.
"""

from libc.stdlib cimport malloc, free

ctypedef long long i64


cdef inline i64 _inv(i64 a, i64 p) nogil:
    cdef i64 t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef i64* _load(list rows, Py_ssize_t nrows, Py_ssize_t ncols) except NULL:
    cdef i64* buf = <i64*> malloc(max(nrows * ncols, 1) * sizeof(i64))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j
    cdef list row
    for i in range(nrows):
        row = <list> rows[i]
        if len(row) != ncols:
            free(buf)
            raise ValueError("ragged matrix")
        for j in range(ncols):
            buf[i * ncols + j] = row[j]
    return buf


cdef Py_ssize_t _eliminate(i64* a, Py_ssize_t nrows, Py_ssize_t ncols, i64 p,
                           bint full, Py_ssize_t* pivots) nogil:
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef i64 inv, f, tmp
    cdef i64* row
    cdef i64* other
    for c in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if a[i * ncols + c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(ncols):
                tmp = a[r * ncols + j]
                a[r * ncols + j] = a[piv * ncols + j]
                a[piv * ncols + j] = tmp
        row = a + r * ncols
        inv = _inv(row[c], p)
        if full:
            for j in range(c, ncols):
                row[j] = row[j] * inv % p
            inv = 1
        for i in range(0 if full else r + 1, nrows):
            if i == r:
                continue
            other = a + i * ncols
            f = other[c]
            if f != 0:
                f = f * inv % p
                for j in range(c, ncols):
                    if row[j] != 0:
                        other[j] = (other[j] - f * row[j]) % p
                        if other[j] < 0:
                            other[j] += p
        pivots[r] = c
        r += 1
    return r


def rref_mod_p(list rows, Py_ssize_t ncols, i64 p):
    cdef Py_ssize_t nrows = len(rows), r, i, j
    cdef i64* a = _load(rows, nrows, ncols)
    cdef Py_ssize_t* piv = <Py_ssize_t*> malloc(max(min(nrows, ncols), 1) * sizeof(Py_ssize_t))
    try:
        with nogil:
            r = _eliminate(a, nrows, ncols, p, True, piv)
        out = [[a[i * ncols + j] for j in range(ncols)] for i in range(r)]
        return out, [piv[i] for i in range(r)]
    finally:
        free(a)
        free(piv)


def rank_mod_p(list rows, Py_ssize_t ncols, i64 p):
    cdef Py_ssize_t nrows = len(rows), r
    cdef i64* a = _load(rows, nrows, ncols)
    cdef Py_ssize_t* piv = <Py_ssize_t*> malloc(max(min(nrows, ncols), 1) * sizeof(Py_ssize_t))
    try:
        with nogil:
            r = _eliminate(a, nrows, ncols, p, False, piv)
        return r
    finally:
        free(a)
        free(piv)


def det_mod_p(list rows, i64 p):
    cdef Py_ssize_t n = len(rows), c, i, j, pv
    cdef i64* a = _load(rows, n, n)
    cdef i64 det = 1, inv, f, tmp
    cdef i64* row
    cdef i64* other
    try:
        with nogil:
            for c in range(n):
                pv = -1
                for i in range(c, n):
                    if a[i * n + c] != 0:
                        pv = i
                        break
                if pv < 0:
                    det = 0
                    break
                if pv != c:
                    for j in range(n):
                        tmp = a[c * n + j]
                        a[c * n + j] = a[pv * n + j]
                        a[pv * n + j] = tmp
                    det = p - det
                row = a + c * n
                det = det * row[c] % p
                inv = _inv(row[c], p)
                for i in range(c + 1, n):
                    other = a + i * n
                    f = other[c]
                    if f != 0:
                        f = f * inv % p
                        for j in range(c, n):
                            if row[j] != 0:
                                other[j] = (other[j] - f * row[j]) % p
                                if other[j] < 0:
                                    other[j] += p
        return det % p
    finally:
        free(a)


def reduce_by_rref(vec, list rref_rows, pivots, i64 p):
    cdef Py_ssize_t n = len(vec), j, k
    cdef i64* v = <i64*> malloc(max(n, 1) * sizeof(i64))
    cdef i64 f
    cdef list row
    try:
        for j in range(n):
            v[j] = vec[j]
        for k in range(len(rref_rows)):
            f = v[<Py_ssize_t> pivots[k]]
            if f != 0:
                row = <list> rref_rows[k]
                for j in range(n):
                    if row[j]:
                        v[j] = (v[j] - f * <i64> row[j]) % p
                        if v[j] < 0:
                            v[j] += p
        return [v[j] for j in range(n)]
    finally:
        free(v)
