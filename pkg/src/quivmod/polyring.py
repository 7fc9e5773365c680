"""Sparse multivariate polynomials in arrow-entry variables and parameters.

A monomial is a tuple of ``(Var, exponent)`` pairs sorted by variable; a
:class:`Poly` maps monomials to nonzero raw coefficients of its field.
Variables order lexicographically on (kind, arrow, row, col), so arrow
entries come before parameters.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import FieldMismatchError, MixedDenominatorError
from .exactfield import QQ, Field, Fp, GF, scalar_from_json, scalar_to_json

__all__ = [
    "Var",
    "Poly",
    "RationalExpr",
    "arrow_var",
    "param",
    "poly_eval",
    "substitute",
    "coeff_in_parameter",
    "graded_piece",
    "monomials_of_multidegree",
    "det_poly",
    "adjugate_poly",
    "poly_to_json",
    "poly_from_json",
]

ARROW = 0
PARAM = 1


@dataclass(frozen=True, order=True)
class Var:
    kind: int
    name: str
    row: int = 0
    col: int = 0

    def __str__(self):
        if self.kind == PARAM:
            return "$" + self.name
        return f"{self.name}[{self.row},{self.col}]"

    def __repr__(self):
        return f"Var({self})"

    @classmethod
    def parse(cls, text: str) -> "Var":
        if text.startswith("$"):
            return cls(PARAM, text[1:])
        m = re.fullmatch(r"(.+)\[(\d+),(\d+)\]", text)
        if not m:
            raise ValueError(f"bad variable {text!r}")
        return cls(ARROW, m.group(1), int(m.group(2)), int(m.group(3)))


def arrow_var(arrow: str, row: int, col: int) -> Var:
    return Var(ARROW, arrow, row, col)


def param(name: str) -> Var:
    return Var(PARAM, name)


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    while i < len(m1) and j < len(m2):
        v1, e1 = m1[i]
        v2, e2 = m2[j]
        if v1 == v2:
            out.append((v1, e1 + e2))
            i += 1
            j += 1
        elif v1 < v2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


class Poly:
    """Immutable polynomial over :data:`QQ` or ``GF(p)``."""

    __slots__ = ("field", "terms", "_hash")

    def __init__(self, field: Field, terms=None):
        self.field = field
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = field.raw(c)
                if c:
                    clean[mono] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _make(cls, field, terms):
        obj = object.__new__(cls)
        obj.field = field
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, field, c):
        c = field.raw(c)
        return cls._make(field, {(): c} if c else {})

    @classmethod
    def var(cls, field, v: Var, power: int = 1):
        return cls._make(field, {((v, power),) if power else (): field.one_raw})

    @classmethod
    def zero(cls, field):
        return cls._make(field, {})

    @classmethod
    def one(cls, field):
        return cls._make(field, {(): field.one_raw})

    # protocol

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.terms == other.terms
        if isinstance(other, (int, Fp)) or hasattr(other, "denominator"):
            try:
                return self == Poly.const(self.field, other)
            except FieldMismatchError:
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            m = "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in mono)
            parts.append(f"{c}*{m}" if m else str(c))
        return " + ".join(parts)

    def variables(self):
        return sorted({v for mono in self.terms for v, _ in mono})

    def total_degree(self):
        return max((sum(e for _, e in mono) for mono in self.terms), default=-1)

    def degree_in(self, vars_) -> int:
        vs = set(vars_)
        return max((sum(e for v, e in mono if v in vs) for mono in self.terms), default=-1)

    def monomials(self):
        return sorted(self.terms)

    def coeff(self, mono):
        return self.field.wrap(self.terms.get(mono, self.field.zero_raw))

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")
            return other
        if isinstance(other, RationalExpr):
            return NotImplemented
        try:
            return Poly.const(self.field, other)
        except TypeError:
            return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, 0) + c
            if p is not None:
                s %= p
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Poly._make(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        if p is None:
            return Poly._make(self.field, {m: -c for m, c in self.terms.items()})
        return Poly._make(self.field, {m: (-c) % p for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if p is not None:
                    s %= p
                out[m] = s
        return Poly._make(self.field, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.one(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c):
        return self * Poly.const(self.field, c)

    # evaluation and substitution

    def eval(self, point):
        return poly_eval(self, point)

    def substitute(self, mapping):
        return substitute(self, mapping)

    def homogeneous_part(self, groups, profile):
        """Terms whose degree in each variable group matches ``profile``."""
        groups = [set(g) for g in groups]
        out = {}
        for mono, c in self.terms.items():
            degs = [0] * len(groups)
            for v, e in mono:
                for k, g in enumerate(groups):
                    if v in g:
                        degs[k] += e
            if tuple(degs) == tuple(profile):
                out[mono] = c
        return Poly._make(self.field, out)

    def reduce_mod(self, p: int) -> "Poly":
        from .exactfield import reduce_mod_p
        if self.field.p is not None:
            raise FieldMismatchError("reduce_mod applies to QQ polynomials only")
        F = GF(p)
        out = {}
        for m, c in self.terms.items():
            r = reduce_mod_p(c, p)
            if r:
                out[m] = r
        return Poly._make(F, out)


class RationalExpr:
    """``numerator / den**power`` with a single tracked denominator ``den``."""

    __slots__ = ("numerator", "den", "power")

    def __init__(self, numerator: Poly, den: Poly, power: int):
        if power < 0:
            raise ValueError("negative denominator power")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.numerator = numerator
        self.den = den
        self.power = power

    @property
    def field(self):
        return self.numerator.field

    def _unify(self, other):
        if isinstance(other, RationalExpr):
            if other.den != self.den:
                raise MixedDenominatorError("two distinct tracked denominators")
            return other
        if isinstance(other, Poly):
            return RationalExpr(other, self.den, 0)
        return RationalExpr(Poly.const(self.field, other), self.den, 0)

    def _lift(self, power):
        return self.numerator * self.den ** (power - self.power)

    def __add__(self, other):
        other = self._unify(other)
        n = max(self.power, other.power)
        return RationalExpr(self._lift(n) + other._lift(n), self.den, n)

    __radd__ = __add__

    def __neg__(self):
        return RationalExpr(-self.numerator, self.den, self.power)

    def __sub__(self, other):
        return self + (-self._unify(other))

    def __rsub__(self, other):
        return self._unify(other) + (-self)

    def __mul__(self, other):
        other = self._unify(other)
        return RationalExpr(self.numerator * other.numerator, self.den, self.power + other.power)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return RationalExpr(self.numerator ** k, self.den, self.power * k)

    def clear(self, n: int) -> Poly:
        """Multiply by ``den**n``; requires ``n >= power``."""
        if n < self.power:
            raise ValueError(f"clearing exponent {n} below denominator power {self.power}")
        return self._lift(n)

    def eval(self, point):
        d = poly_eval(self.den, point)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the point")
        return poly_eval(self.numerator, point) / d ** self.power

    def __repr__(self):
        return f"({self.numerator}) / ({self.den})^{self.power}"


def poly_eval(f: Poly, point):
    """Evaluate at ``point`` (a mapping Var -> scalar); all variables must be assigned."""
    field = f.field
    p = field.p
    vals = {}
    for mono in f.terms:
        for v, _ in mono:
            if v not in vals:
                if v not in point:
                    raise KeyError(f"no value assigned to {v}")
                vals[v] = field.raw(point[v])
    total = field.zero_raw
    for mono, c in f.terms.items():
        t = c
        for v, e in mono:
            t = t * (pow(vals[v], e, p) if p is not None else vals[v] ** e)
            if p is not None:
                t %= p
        total += t
    if p is not None:
        total %= p
    return field.wrap(total)


def substitute(f: Poly, mapping):
    """Formal substitution; unmapped variables are kept.

    Images may be Polys, scalars or RationalExprs; a RationalExpr result is
    returned whenever any image used is one.
    """
    field = f.field
    images = {}
    rational = None
    for v, img in mapping.items():
        if isinstance(img, RationalExpr):
            if rational is not None and img.den != rational:
                raise MixedDenominatorError("two distinct tracked denominators")
            rational = img.den
            if img.field != field:
                raise FieldMismatchError("substitution image over another field")
        elif isinstance(img, Poly):
            if img.field != field:
                raise FieldMismatchError("substitution image over another field")
        else:
            img = Poly.const(field, img)
        images[v] = img

    power_cache = {}

    def image_power(v, e):
        key = (v, e)
        if key not in power_cache:
            power_cache[key] = images[v] ** e
        return power_cache[key]

    if rational is None:
        total = Poly.zero(field)
        for mono, c in f.terms.items():
            keep = []
            term = Poly.const(field, field.wrap(c))
            for v, e in mono:
                if v in images:
                    term = term * image_power(v, e)
                else:
                    keep.append((v, e))
            if keep:
                term = term * Poly._make(field, {tuple(keep): field.one_raw})
            total = total + term
        return total

    # Collect terms at a common denominator power at the end.
    pieces = []
    for mono, c in f.terms.items():
        keep = []
        term = RationalExpr(Poly.const(field, field.wrap(c)), rational, 0)
        for v, e in mono:
            if v in images:
                term = term * image_power(v, e)
            else:
                keep.append((v, e))
        if keep:
            term = term * Poly._make(field, {tuple(keep): field.one_raw})
        pieces.append(term)
    n = max((t.power for t in pieces), default=0)
    num = Poly.zero(field)
    for t in pieces:
        num = num + t.clear(n)
    return RationalExpr(num, rational, n)


def coeff_in_parameter(f: Poly, t: Var, k: int) -> Poly:
    """The coefficient of ``t**k`` as a polynomial in the other variables."""
    out = {}
    for mono, c in f.terms.items():
        e = 0
        rest = []
        for v, ev in mono:
            if v == t:
                e = ev
            else:
                rest.append((v, ev))
        if e == k:
            out[tuple(rest)] = c
    return Poly._make(f.field, out)


def parameter_expansion(f: Poly, t: Var) -> dict[int, Poly]:
    """All nonzero coefficients of powers of ``t`` at once."""
    buckets: dict[int, dict] = {}
    for mono, c in f.terms.items():
        e = 0
        rest = []
        for v, ev in mono:
            if v == t:
                e = ev
            else:
                rest.append((v, ev))
        buckets.setdefault(e, {})[tuple(rest)] = c
    return {e: Poly._make(f.field, terms) for e, terms in buckets.items()}


def _compositions(total, groups):
    """Monomials of exact degree ``total`` in the variables of ``groups``."""
    out = []
    for combo in itertools.combinations_with_replacement(groups, total):
        counts = {}
        for v in combo:
            counts[v] = counts.get(v, 0) + 1
        out.append(tuple(sorted(counts.items())))
    return out


def monomials_of_multidegree(groups, profile):
    """All monomials with degree ``profile[k]`` in the variables ``groups[k]``."""
    if len(groups) != len(profile):
        raise ValueError("one degree per variable group is required")
    per_group = [_compositions(deg, sorted(g)) for g, deg in zip(groups, profile)]
    out = []
    for parts in itertools.product(*per_group):
        mono = ()
        for part in parts:
            mono = _mono_mul(mono, part)
        out.append(mono)
    return sorted(out)


def graded_piece(space, groups, profile):
    """A basis of the span of the multidegree-``profile`` parts of ``space``.

    With ``space=None`` returns every monomial of that multidegree (over QQ).
    """
    if space is None:
        return [Poly._make(QQ, {m: QQ.one_raw}) for m in monomials_of_multidegree(groups, profile)]
    parts = [f.homogeneous_part(groups, profile) for f in space]
    parts = [f for f in parts if f]
    return independent_subset(parts)


def independent_subset(polys):
    """A maximal linearly independent sublist, in input order."""
    if not polys:
        return []
    from .exactfield import Matrix
    field = polys[0].field
    monos = sorted({m for f in polys for m in f.terms})
    idx = {m: i for i, m in enumerate(monos)}
    keep = []
    rank = 0
    rows = []
    for f in polys:
        row = [field.zero_raw] * len(monos)
        for m, c in f.terms.items():
            row[idx[m]] = c
        trial = rows + [row]
        r = Matrix._from_raw(field, trial, len(trial), len(monos)).rank()
        if r > rank:
            rows = trial
            rank = r
            keep.append(f)
    return keep


def det_poly(entries, field: Field | None = None) -> Poly:
    """Determinant of a square matrix of Polys by memoized Laplace expansion.

    The empty matrix has determinant one over ``field`` (default QQ).
    """
    n = len(entries)
    if n == 0:
        return Poly.one(field or QQ)
    field = entries[0][0].field

    @lru_cache(maxsize=None)
    def minor(row, cols):
        if row == n:
            return Poly.one(field)
        total = Poly.zero(field)
        sign = 1
        for k, c in enumerate(cols):
            e = entries[row][c]
            if e:
                sub = minor(row + 1, cols[:k] + cols[k + 1:])
                term = e * sub
                total = total + term if sign > 0 else total - term
            sign = -sign
        return total

    return minor(0, tuple(range(n)))


def adjugate_poly(entries):
    """Adjugate matrix: adj[i][j] = (-1)^(i+j) times the (j, i) minor."""
    n = len(entries)
    field = entries[0][0].field
    if n == 1:
        return [[Poly.one(field)]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [[entries[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            d = det_poly(sub)
            adj[i][j] = d if (i + j) % 2 == 0 else -d
    return adj


def poly_to_json(f: Poly):
    out = []
    for mono, c in f.sorted_terms():
        out.append({
            "coeff": scalar_to_json(f.field.wrap(c)),
            "exponents": [[str(v), e] for v, e in mono],
        })
    return out


def poly_from_json(obj, field: Field = QQ) -> Poly:
    terms = {}
    for t in obj:
        c = scalar_from_json(t["coeff"])
        mono = tuple(sorted((Var.parse(v), int(e)) for v, e in t["exponents"]))
        terms[mono] = field.raw(c)
    return Poly(field, terms)
