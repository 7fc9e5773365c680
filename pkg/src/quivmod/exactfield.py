"""Exact scalars and dense matrices over the rationals and prime fields.

Rational entries are stored as :class:`fractions.Fraction`; prime-field
entries are stored as plain ints in ``range(p)`` and surfaced as
:class:`Fp` scalars.  Elimination over GF(p) runs through the modular
kernels in :mod:`quivmod._kernels`; over QQ determinants and ranks use
fraction-free (Bareiss) elimination on row-scaled integer copies.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from functools import reduce
from math import gcd, lcm

from . import _kernels
from .errors import FieldMismatchError, ShapeError

__all__ = [
    "QQ",
    "GF",
    "Fp",
    "Field",
    "Matrix",
    "parse_rational",
    "reduce_mod_p",
    "is_prime",
    "scalar_to_json",
    "scalar_from_json",
    "matrix_to_json",
    "matrix_from_json",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        return Fraction(text.strip())
    raise TypeError(f"cannot read a rational from {text!r}")


def reduce_mod_p(x, p: int) -> int:
    """Residue of a rational modulo ``p``; the denominator must be prime to p."""
    x = parse_rational(x)
    den = x.denominator % p
    if den == 0:
        raise ZeroDivisionError(f"denominator {x.denominator} is divisible by {p}")
    return x.numerator * pow(den, p - 2, p) % p


class Fp:
    """An element of the prime field GF(p)."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _other(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise FieldMismatchError(f"GF({self.p}) vs GF({other.p})")
            return other.value
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            raise FieldMismatchError(f"cannot mix GF({self.p}) with a rational")
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Fp(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Fp(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Fp(o - self.value, self.p)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Fp(self.value * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return Fp(self.value * pow(o, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Fp(o, self.p) / self

    def __neg__(self):
        return Fp(-self.value, self.p)

    def __pow__(self, k: int):
        if k < 0:
            if self.value == 0:
                raise ZeroDivisionError("zero to a negative power")
            return Fp(pow(self.value, self.p - 2, self.p), self.p) ** (-k)
        return Fp(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Fp({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class Field:
    """Field descriptor; use the module constants :data:`QQ` and :func:`GF`."""

    p: int | None = None

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None


class _Rationals(Field):
    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, _Rationals)

    def __hash__(self):
        return hash("QQ")

    def raw(self, x):
        if isinstance(x, Fp):
            raise FieldMismatchError("cannot coerce a GF(p) element into QQ")
        return parse_rational(x)

    def wrap(self, raw):
        return raw

    def __call__(self, x):
        return self.raw(x)

    zero_raw = Fraction(0)
    one_raw = Fraction(1)


class _PrimeField(Field):
    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, _PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def raw(self, x):
        if isinstance(x, Fp):
            if x.p != self.p:
                raise FieldMismatchError(f"GF({x.p}) element in GF({self.p})")
            return x.value
        if isinstance(x, bool):
            raise TypeError("booleans are not scalars")
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, str):
            f = Fraction(x)
            if f.denominator == 1:
                return f.numerator % self.p
        raise FieldMismatchError(f"{x!r} is not an element of GF({self.p}); use reduce_mod_p")

    def wrap(self, raw):
        return Fp(raw, self.p)

    def __call__(self, x):
        return Fp(self.raw(x), self.p)

    zero_raw = 0
    one_raw = 1


QQ = _Rationals()
_GF_CACHE: dict[int, _PrimeField] = {}


def GF(p: int) -> _PrimeField:
    if p not in _GF_CACHE:
        _GF_CACHE[p] = _PrimeField(p)
    return _GF_CACHE[p]


def field_of(x) -> Field:
    if isinstance(x, Fp):
        return GF(x.p)
    return QQ


def _bareiss(a: list[list[int]], ncols: int, want_det: bool):
    """In-place fraction-free elimination of an integer matrix.

    Returns ``(rank, det)``; ``det`` is only meaningful for square input
    when ``want_det`` is set.
    """
    nrows = len(a)
    prev = 1
    sign = 1
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            if want_det:
                return r, 0
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
            sign = -sign
        pr = a[r]
        pv = pr[c]
        for i in range(r + 1, nrows):
            row = a[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (pv * row[j] - f * pr[j]) // prev
            row[c] = 0
        prev = pv
        r += 1
    if want_det:
        return r, sign * a[nrows - 1][ncols - 1] if nrows else 1
    return r, None


def _integer_rows(rows):
    """Scale each rational row to integers; returns (int rows, row scales)."""
    out, scales = [], []
    for row in rows:
        L = reduce(lcm, (x.denominator for x in row), 1)
        out.append([x.numerator * (L // x.denominator) for x in row])
        scales.append(L)
    return out, scales


class Matrix:
    """Immutable dense matrix over :data:`QQ` or ``GF(p)``.

    Entries are read with ``m[i, j]``; ``m.data`` exposes the raw storage
    (Fractions, or ints mod p).
    """

    __slots__ = ("field", "nrows", "ncols", "data", "_hash")

    def __init__(self, field: Field, rows, ncols: int | None = None):
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ShapeError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ShapeError("ragged matrix rows")
        self.field = field
        self.nrows = len(rows)
        self.ncols = ncols
        self.data = tuple(tuple(field.raw(x) for x in r) for r in rows)
        self._hash = None

    @classmethod
    def _from_raw(cls, field, data, nrows, ncols):
        m = object.__new__(cls)
        m.field = field
        m.nrows = nrows
        m.ncols = ncols
        m.data = tuple(tuple(r) for r in data)
        m._hash = None
        return m

    # construction helpers

    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field.zero_raw
        return cls._from_raw(field, [[z] * ncols for _ in range(nrows)], nrows, ncols)

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero_raw, field.one_raw
        return cls._from_raw(field, [[o if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diagonal(cls, field, entries):
        entries = [field.raw(x) for x in entries]
        n = len(entries)
        z = field.zero_raw
        return cls._from_raw(field, [[entries[i] if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def block_diagonal(cls, field, blocks):
        n = sum(b.nrows for b in blocks)
        k = sum(b.ncols for b in blocks)
        rows = [[field.zero_raw] * k for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            _check_field(field, b.field)
            for i, row in enumerate(b.data):
                rows[r0 + i][c0:c0 + b.ncols] = row
            r0 += b.nrows
            c0 += b.ncols
        return cls._from_raw(field, rows, n, k)

    @classmethod
    def from_blocks(cls, field, grid):
        """Assemble a block matrix from a 2D list of matrices."""
        heights = [row[0].nrows for row in grid]
        widths = [b.ncols for b in grid[0]]
        rows = []
        for bi, brow in enumerate(grid):
            for b, w in zip(brow, widths):
                _check_field(field, b.field)
                if b.nrows != heights[bi] or b.ncols != w:
                    raise ShapeError("incompatible block shapes")
            for i in range(heights[bi]):
                r = []
                for b in brow:
                    r.extend(b.data[i])
                rows.append(r)
        return cls._from_raw(field, rows, sum(heights), sum(widths))

    # basic protocol

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.field.wrap(self.data[i][j])

    def rows(self):
        """Entries as a list of row lists of scalars."""
        w = self.field.wrap
        return [[w(x) for x in r] for r in self.data]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and self.data == other.data)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.shape, self.data))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols}, [{body}])"

    def is_zero(self) -> bool:
        return all(not x for r in self.data for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    @property
    def T(self):
        if not self.nrows:
            return Matrix.zeros(self.field, self.ncols, 0)
        return Matrix._from_raw(self.field, list(zip(*self.data)), self.ncols, self.nrows)

    # arithmetic

    def _binary(self, other, op):
        if not isinstance(other, Matrix):
            return NotImplemented
        _check_field(self.field, other.field)
        if self.shape != other.shape:
            raise ShapeError(f"shape {self.shape} vs {other.shape}")
        p = self.field.p
        if p is None:
            data = [[op(x, y) for x, y in zip(r, s)] for r, s in zip(self.data, other.data)]
        else:
            data = [[op(x, y) % p for x, y in zip(r, s)] for r, s in zip(self.data, other.data)]
        return Matrix._from_raw(self.field, data, self.nrows, self.ncols)

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = self.field.raw(c)
        p = self.field.p
        if p is None:
            data = [[c * x for x in r] for r in self.data]
        else:
            data = [[c * x % p for x in r] for r in self.data]
        return Matrix._from_raw(self.field, data, self.nrows, self.ncols)

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        _check_field(self.field, other.field)
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.data)) if other.nrows else [()] * other.ncols
        p = self.field.p
        z = self.field.zero_raw
        data = []
        for r in self.data:
            row = []
            for c in cols:
                s = z
                for x, y in zip(r, c):
                    if x and y:
                        s += x * y
                row.append(s if p is None else s % p)
            data.append(row)
        return Matrix._from_raw(self.field, data, self.nrows, other.ncols)

    def apply(self, vec):
        """Matrix times a column vector given as a list of raw entries."""
        p = self.field.p
        out = []
        for r in self.data:
            s = self.field.zero_raw
            for x, y in zip(r, vec):
                if x and y:
                    s += x * y
            out.append(s if p is None else s % p)
        return out

    # elimination

    def det(self):
        if not self.is_square():
            raise ShapeError(f"determinant of a non-square {self.shape} matrix")
        n = self.nrows
        if n == 0:
            return self.field.wrap(self.field.one_raw)
        p = self.field.p
        if p is not None:
            return Fp(_kernels.det_mod_p([list(r) for r in self.data], p), p)
        ints, scales = _integer_rows(self.data)
        _, d = _bareiss(ints, n, True)
        return Fraction(d, reduce(lambda a, b: a * b, scales, 1))

    def rank(self) -> int:
        if self.nrows == 0 or self.ncols == 0:
            return 0
        p = self.field.p
        if p is not None:
            return _kernels.rank_mod_p([list(r) for r in self.data], self.ncols, p)
        ints, _ = _integer_rows(self.data)
        r, _ = _bareiss(ints, self.ncols, False)
        return r

    def rref(self):
        """Reduced row echelon form: ``(Matrix of nonzero rows, pivot columns)``."""
        p = self.field.p
        if p is not None:
            rows, piv = _kernels.rref_mod_p([list(r) for r in self.data], self.ncols, p)
            return Matrix._from_raw(self.field, rows, len(rows), self.ncols), piv
        rows, piv = _rref_rational(self.data, self.ncols)
        return Matrix._from_raw(self.field, rows, len(rows), self.ncols), piv

    def nullspace(self):
        """Basis of the right kernel as lists of scalars.

        One vector per free column, with a 1 in that column and the negated
        RREF entries in the pivot columns.
        """
        red, piv = self.rref()
        return [[self.field.wrap(x) for x in v] for v in _kernel_from_rref(red.data, piv, self.ncols, self.field)]

    def nullspace_raw(self):
        red, piv = self.rref()
        return _kernel_from_rref(red.data, piv, self.ncols, self.field)

    def solve(self, rhs):
        """A solution x of ``self @ x = rhs`` or ``None`` if inconsistent."""
        rhs = [self.field.raw(x) for x in rhs]
        if len(rhs) != self.nrows:
            raise ShapeError(f"right-hand side of length {len(rhs)} for {self.nrows} rows")
        aug = Matrix._from_raw(self.field, [list(r) + [b] for r, b in zip(self.data, rhs)],
                               self.nrows, self.ncols + 1)
        red, piv = aug.rref()
        if piv and piv[-1] == self.ncols:
            return None
        x = [self.field.zero_raw] * self.ncols
        for row, c in zip(red.data, piv):
            x[c] = row[self.ncols]
        return [self.field.wrap(v) for v in x]

    def inverse(self):
        """The inverse matrix, or ``None`` when singular."""
        if not self.is_square():
            raise ShapeError(f"inverse of a non-square {self.shape} matrix")
        n = self.nrows
        if n == 0:
            return self
        z, o = self.field.zero_raw, self.field.one_raw
        aug = Matrix._from_raw(
            self.field,
            [list(r) + [o if i == j else z for j in range(n)] for i, r in enumerate(self.data)],
            n, 2 * n)
        red, piv = aug.rref()
        if len(piv) < n or piv[n - 1] != n - 1:
            return None
        return Matrix._from_raw(self.field, [r[n:] for r in red.data], n, n)

    def reduce_mod(self, p: int) -> "Matrix":
        """Reduce a rational matrix modulo ``p`` (denominators prime to p)."""
        if self.field.p is not None:
            raise FieldMismatchError("reduce_mod applies to QQ matrices only")
        F = GF(p)
        return Matrix._from_raw(F, [[reduce_mod_p(x, p) for x in r] for r in self.data],
                                self.nrows, self.ncols)

    def column(self, j):
        return [r[j] for r in self.data]


def _check_field(a, b):
    if a != b:
        raise FieldMismatchError(f"{a!r} vs {b!r}")


def _rref_rational(data, ncols):
    a = [list(r) for r in data]
    nrows = len(a)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        inv = 1 / pr[c]
        for j in range(c, ncols):
            if pr[j]:
                pr[j] *= inv
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                row = a[i]
                for j in range(c, ncols):
                    if pr[j]:
                        row[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def _kernel_from_rref(rows, pivots, ncols, field):
    pivset = set(pivots)
    p = field.p
    out = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [field.zero_raw] * ncols
        v[f] = field.one_raw
        for row, c in zip(rows, pivots):
            if row[f]:
                v[c] = (-row[f]) % p if p is not None else -row[f]
        out.append(v)
    return out


def content_gcd(values) -> int:
    """gcd of a collection of integers (0 for an empty or all-zero input)."""
    return reduce(gcd, values, 0)


def scalar_to_json(x):
    """``"p/q"`` (or ``"p"``) for rationals, ``{"mod p": v}`` for GF(p)."""
    if isinstance(x, Fp):
        return {f"mod {x.p}": x.value}
    x = parse_rational(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def scalar_from_json(obj):
    if isinstance(obj, dict):
        if len(obj) != 1:
            raise ValueError(f"bad prime-field scalar {obj!r}")
        (key, val), = obj.items()
        parts = key.split()
        if len(parts) != 2 or parts[0] != "mod":
            raise ValueError(f"bad prime-field scalar {obj!r}")
        p = int(parts[1])
        return GF(p)(int(val))
    return parse_rational(obj)


def matrix_to_json(m: Matrix):
    return [[scalar_to_json(x) for x in r] for r in m.rows()]


def matrix_from_json(field: Field, rows, nrows: int, ncols: int) -> Matrix:
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise ShapeError(f"expected a {nrows}x{ncols} matrix")
    if field.p is None:
        return Matrix(field, [[scalar_from_json(x) for x in r] for r in rows], ncols)
    out = []
    for r in rows:
        row = []
        for x in r:
            if isinstance(x, dict):
                row.append(scalar_from_json(x))
            else:
                row.append(int(x) if isinstance(x, int) else x)
        out.append(row)
    return Matrix(field, out, ncols)


class SparseEchelon:
    """Incremental row echelon form of sparse rows ``{column: raw value}``.

    Each stored row is monic at its largest column (its pivot), and no
    stored row contains another row's pivot above its own.  Reduction
    clears pivot columns from the top down, so normal forms are supported
    on non-pivot columns only and are unique.
    """

    def __init__(self, field: Field):
        self.field = field
        self.rows: dict[int, dict] = {}

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self):
        return set(self.rows)

    def reduce(self, vec: dict) -> dict:
        """Normal form of ``vec``; entries may be raw values or anything the field accepts."""
        p = self.field.p
        raw = self.field.raw
        vec = {c: raw(v) for c, v in vec.items() if v}
        vec = {c: v for c, v in vec.items() if v}
        heap = [-c for c in vec if c in self.rows]
        heapq.heapify(heap)
        seen = {-c for c in heap}
        while heap:
            c = -heapq.heappop(heap)
            seen.discard(c)
            f = vec.get(c)
            if not f:
                continue
            for cc, v in self.rows[c].items():
                nv = vec.get(cc, 0) - f * v
                if p is not None:
                    nv %= p
                if nv:
                    vec[cc] = nv
                    if cc in self.rows and cc not in seen and cc != c:
                        seen.add(cc)
                        heapq.heappush(heap, -cc)
                else:
                    vec.pop(cc, None)
        return vec

    def add(self, vec: dict) -> bool:
        """Insert a row; returns whether it was independent."""
        vec = self.reduce(vec)
        if not vec:
            return False
        piv = max(vec)
        lead = vec[piv]
        p = self.field.p
        if p is None:
            row = {c: v / lead for c, v in vec.items()}
        else:
            inv = pow(lead, p - 2, p)
            row = {c: v * inv % p for c, v in vec.items()}
        self.rows[piv] = row
        return True
