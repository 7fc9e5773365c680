"""Pure-Python modular elimination kernels.

Every function takes matrices as lists of row lists whose entries are
already reduced into ``range(p)`` and never mutates its arguments.
"""


def rref_mod_p(rows, ncols, p):
    """Reduced row echelon form over GF(p).

    Returns ``(nonzero_rows, pivot_columns)``.
    """
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(a)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        row = a[r]
        inv = pow(row[c], p - 2, p)
        if inv != 1:
            for j in range(c, ncols):
                row[j] = row[j] * inv % p
        for i in range(nrows):
            if i != r:
                f = a[i][c]
                if f:
                    other = a[i]
                    for j in range(c, ncols):
                        if row[j]:
                            other[j] = (other[j] - f * row[j]) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank_mod_p(rows, ncols, p):
    a = [list(r) for r in rows]
    rank = 0
    nrows = len(a)
    for c in range(ncols):
        if rank == nrows:
            break
        piv = None
        for i in range(rank, nrows):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        row = a[rank]
        inv = pow(row[c], p - 2, p)
        for i in range(rank + 1, nrows):
            f = a[i][c]
            if f:
                f = f * inv % p
                other = a[i]
                for j in range(c, ncols):
                    if row[j]:
                        other[j] = (other[j] - f * row[j]) % p
        rank += 1
    return rank


def det_mod_p(rows, p):
    n = len(rows)
    a = [list(r) for r in rows]
    det = 1
    for c in range(n):
        piv = None
        for i in range(c, n):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        row = a[c]
        det = det * row[c] % p
        inv = pow(row[c], p - 2, p)
        for i in range(c + 1, n):
            f = a[i][c]
            if f:
                f = f * inv % p
                other = a[i]
                for j in range(c, n):
                    if row[j]:
                        other[j] = (other[j] - f * row[j]) % p
    return det % p


def reduce_by_rref(vec, rref_rows, pivots, p):
    """Reduce ``vec`` modulo the row space of an RREF basis."""
    v = list(vec)
    for row, c in zip(rref_rows, pivots):
        f = v[c]
        if f:
            for j in range(len(v)):
                if row[j]:
                    v[j] = (v[j] - f * row[j]) % p
    return v
