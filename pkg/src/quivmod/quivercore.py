"""Quivers with relations and their matrix representations.

Conventions used throughout the package:

* ``M(a)`` has shape ``d(ha) x d(ta)``.
* A path is written in traversal order; ``[x1, x2]`` evaluates to
  ``M(x2) @ M(x1)``.
* The base-change group acts by ``(g.M)(a) = g(ha) M(a) g(ta)^-1``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import CapExceededError, FieldMismatchError, InconclusiveError, ShapeError
from .exactfield import (
    QQ, GF, Field, Matrix, matrix_from_json, matrix_to_json, parse_rational,
    reduce_mod_p, scalar_to_json,
)

__all__ = [
    "Arrow",
    "Quiver",
    "Path",
    "Relation",
    "Representation",
    "GroupElement",
    "euler_form",
    "theta_eval",
    "chi_theta",
    "eval_path",
    "check_relations",
    "act",
    "hom_matrix",
    "hom_space",
    "is_isomorphic",
    "direct_sum",
    "filt_assemble",
    "one_ps_limit",
    "field_to_json",
    "field_from_json",
]


@dataclass(frozen=True)
class Arrow:
    id: str
    tail: str
    head: str


class Quiver:
    """A finite quiver; loops and parallel arrows are allowed."""

    def __init__(self, vertices, arrows):
        self.vertices = tuple(str(v) for v in vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        arrs = []
        for a in arrows:
            if not isinstance(a, Arrow):
                a = Arrow(*a)
            arrs.append(a)
        self.arrows = tuple(arrs)
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.arrow = {}
        for a in self.arrows:
            if a.id in self.arrow:
                raise ValueError(f"duplicate arrow id {a.id!r}")
            if a.tail not in self.vindex or a.head not in self.vindex:
                raise ValueError(f"arrow {a.id!r} uses an undeclared vertex")
            self.arrow[a.id] = a

    def __eq__(self, other):
        return isinstance(other, Quiver) and self.vertices == other.vertices and self.arrows == other.arrows

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({list(self.vertices)}, {[(a.id, a.tail, a.head) for a in self.arrows]})"

    @property
    def n(self) -> int:
        return len(self.vertices)

    def ti(self, a: Arrow) -> int:
        return self.vindex[a.tail]

    def hi(self, a: Arrow) -> int:
        return self.vindex[a.head]

    def vec(self, values) -> tuple:
        """Normalize a per-vertex vector given as a sequence or a dict."""
        if isinstance(values, dict):
            unknown = set(values) - set(self.vertices)
            if unknown:
                raise ShapeError(f"unknown vertices {sorted(unknown)}")
            return tuple(int(values.get(v, 0)) for v in self.vertices)
        values = tuple(int(x) for x in values)
        if len(values) != self.n:
            raise ShapeError(f"expected {self.n} entries, got {len(values)}")
        return values

    def is_acyclic(self) -> bool:
        return self.topological_order() is not None

    def topological_order(self):
        indeg = [0] * self.n
        for a in self.arrows:
            indeg[self.hi(a)] += 1
        order = []
        ready = [i for i in range(self.n) if indeg[i] == 0]
        while ready:
            x = ready.pop(0)
            order.append(x)
            for a in self.arrows:
                if self.ti(a) == x:
                    indeg[self.hi(a)] -= 1
                    if indeg[self.hi(a)] == 0:
                        ready.append(self.hi(a))
        return order if len(order) == self.n else None

    def support_quiver_acyclic(self, d) -> bool:
        """Acyclicity of the full subquiver on the support of ``d``."""
        d = self.vec(d)
        keep = [v for v, x in zip(self.vertices, d) if x]
        sub = Quiver(keep, [a for a in self.arrows if a.tail in keep and a.head in keep])
        return sub.is_acyclic()

    def to_json(self):
        return {"vertices": list(self.vertices),
                "arrows": [{"id": a.id, "tail": a.tail, "head": a.head} for a in self.arrows]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["vertices"], [Arrow(a["id"], a["tail"], a["head"]) for a in obj["arrows"]])


@dataclass(frozen=True)
class Path:
    """Arrows in traversal order, or the lazy path at ``vertex``."""

    arrows: tuple
    vertex: str | None = None

    def tail(self, Q: Quiver) -> str:
        return Q.arrow[self.arrows[0]].tail if self.arrows else self.vertex

    def head(self, Q: Quiver) -> str:
        return Q.arrow[self.arrows[-1]].head if self.arrows else self.vertex

    def check(self, Q: Quiver):
        if not self.arrows:
            if self.vertex not in Q.vindex:
                raise ValueError("lazy path needs a vertex of the quiver")
            return
        for x in self.arrows:
            if x not in Q.arrow:
                raise ValueError(f"unknown arrow {x!r}")
        for x, y in zip(self.arrows, self.arrows[1:]):
            if Q.arrow[x].head != Q.arrow[y].tail:
                raise ValueError(f"path is not composable at {x!r} -> {y!r}")

    def __len__(self):
        return len(self.arrows)


class Relation:
    """A rational linear combination of parallel paths of length >= 2."""

    def __init__(self, terms, quiver: Quiver | None = None):
        self.terms = tuple((parse_rational(c), p if isinstance(p, Path) else Path(tuple(p)))
                           for c, p in terms)
        if not self.terms:
            raise ValueError("a relation needs at least one term")
        for _, p in self.terms:
            if len(p) < 2:
                raise ValueError("relations use paths of length at least 2")
        if quiver is not None:
            self.check(quiver)

    def check(self, Q: Quiver):
        ends = set()
        for _, p in self.terms:
            p.check(Q)
            ends.add((p.tail(Q), p.head(Q)))
        if len(ends) != 1:
            raise ValueError("relation paths are not parallel")

    def tail(self, Q):
        return self.terms[0][1].tail(Q)

    def head(self, Q):
        return self.terms[0][1].head(Q)

    def __repr__(self):
        return "Relation(" + " + ".join(f"{c}*{'.'.join(p.arrows)}" for c, p in self.terms) + ")"

    def to_json(self):
        return [{"coeff": scalar_to_json(c), "path": list(p.arrows)} for c, p in self.terms]

    @classmethod
    def from_json(cls, obj, quiver=None):
        return cls([(t["coeff"], Path(tuple(t["path"]))) for t in obj], quiver)


def field_to_json(F: Field):
    return "Q" if F.p is None else {"prime": F.p}


def field_from_json(obj) -> Field:
    if obj in (None, "Q", "QQ"):
        return QQ
    if isinstance(obj, dict) and "prime" in obj:
        return GF(int(obj["prime"]))
    raise ValueError(f"bad field descriptor {obj!r}")


class Representation:
    """Matrices ``M(a)`` of shape ``d(ha) x d(ta)`` over a single field."""

    def __init__(self, quiver: Quiver, dim, matrices, field: Field = QQ):
        self.quiver = quiver
        self.dim = quiver.vec(dim)
        if any(x < 0 for x in self.dim):
            raise ShapeError("dimension vectors are non-negative")
        self.field = field
        mats = {}
        for a in quiver.arrows:
            shape = (self.dim[quiver.hi(a)], self.dim[quiver.ti(a)])
            m = matrices.get(a.id) if matrices else None
            if m is None:
                m = Matrix.zeros(field, *shape)
            elif not isinstance(m, Matrix):
                m = Matrix(field, m, shape[1])
            if m.field != field:
                raise FieldMismatchError(f"arrow {a.id!r}: {m.field!r} vs {field!r}")
            if m.shape != shape:
                raise ShapeError(f"arrow {a.id!r}: expected {shape}, got {m.shape}")
            mats[a.id] = m
        if matrices:
            extra = set(matrices) - set(mats)
            if extra:
                raise ShapeError(f"unknown arrows {sorted(extra)}")
        self.matrices = mats

    def __getitem__(self, arrow_id) -> Matrix:
        return self.matrices[arrow_id]

    def __eq__(self, other):
        return (isinstance(other, Representation) and self.quiver == other.quiver
                and self.dim == other.dim and self.field == other.field
                and self.matrices == other.matrices)

    def __hash__(self):
        return hash((self.dim, tuple(self.matrices[a.id] for a in self.quiver.arrows)))

    def __repr__(self):
        body = ", ".join(f"{k}={m.rows()}" for k, m in self.matrices.items())
        return f"Representation(dim={self.dim}, {body})"

    @classmethod
    def zero(cls, quiver, dim=None, field=QQ):
        return cls(quiver, dim if dim is not None else [0] * quiver.n, {}, field)

    def reduce_mod(self, p: int) -> "Representation":
        if self.field.p is not None:
            raise FieldMismatchError("reduce_mod applies to QQ representations only")
        return Representation(self.quiver, self.dim,
                              {k: m.reduce_mod(p) for k, m in self.matrices.items()}, GF(p))

    def total_dim(self) -> int:
        return sum(self.dim)

    def to_json(self):
        return {
            "dim": dict(zip(self.quiver.vertices, self.dim)),
            "matrices": {k: matrix_to_json(m) for k, m in self.matrices.items()},
            "field": field_to_json(self.field),
        }

    @classmethod
    def from_json(cls, quiver, obj):
        F = field_from_json(obj.get("field", "Q"))
        dim = quiver.vec(obj["dim"])
        mats = {}
        for a in quiver.arrows:
            if a.id in obj.get("matrices", {}):
                mats[a.id] = matrix_from_json(F, obj["matrices"][a.id],
                                              dim[quiver.hi(a)], dim[quiver.ti(a)])
        return cls(quiver, dim, mats, F)


class GroupElement:
    """An invertible matrix per vertex."""

    def __init__(self, quiver: Quiver, blocks, check: bool = True):
        self.quiver = quiver
        if isinstance(blocks, dict):
            blocks = [blocks[v] for v in quiver.vertices]
        self.blocks = tuple(blocks)
        if len(self.blocks) != quiver.n:
            raise ShapeError("one block per vertex is required")
        for b in self.blocks:
            if not b.is_square():
                raise ShapeError("group blocks must be square")
        if check:
            for b in self.blocks:
                if b.nrows and not b.det():
                    raise ValueError("group element has a singular block")
        self.field = self.blocks[0].field if self.blocks else QQ

    @classmethod
    def identity(cls, quiver, dim, field=QQ):
        return cls(quiver, [Matrix.identity(field, x) for x in quiver.vec(dim)], check=False)

    def __matmul__(self, other):
        return GroupElement(self.quiver, [a @ b for a, b in zip(self.blocks, other.blocks)], check=False)

    def inverse(self):
        return GroupElement(self.quiver, [b.inverse() for b in self.blocks], check=False)

    def dim(self):
        return tuple(b.nrows for b in self.blocks)

    def __repr__(self):
        return f"GroupElement({[b.rows() for b in self.blocks]})"


# numerical invariants

def euler_form(Q: Quiver, d, e) -> int:
    d, e = Q.vec(d), Q.vec(e)
    return sum(x * y for x, y in zip(d, e)) - sum(d[Q.ti(a)] * e[Q.hi(a)] for a in Q.arrows)


def theta_eval(theta, d) -> int:
    theta, d = tuple(theta), tuple(d)
    if len(theta) != len(d):
        raise ShapeError(f"weight of length {len(theta)} against dimension vector of length {len(d)}")
    return sum(t * x for t, x in zip(theta, d))


def chi_theta(theta, g: GroupElement):
    theta = tuple(theta)
    if len(theta) != len(g.blocks):
        raise ShapeError("weight and group element lengths differ")
    F = g.field
    out = F.wrap(F.one_raw)
    for t, b in zip(theta, g.blocks):
        if t == 0:
            continue
        d = b.det()
        if not d:
            if t < 0:
                raise ZeroDivisionError("singular block raised to a negative power")
            return F.wrap(F.zero_raw)
        out = out * d ** t
    return out


# representation operations

def eval_path(M: Representation, path) -> Matrix:
    Q = M.quiver
    if not isinstance(path, Path):
        path = Path(tuple(path))
    path.check(Q)
    if not path.arrows:
        return Matrix.identity(M.field, M.dim[Q.vindex[path.vertex]])
    out = M[path.arrows[0]]
    for x in path.arrows[1:]:
        out = M[x] @ out
    return out


def relation_value(M: Representation, r: Relation) -> Matrix:
    Q = M.quiver
    F = M.field
    total = Matrix.zeros(F, M.dim[Q.vindex[r.head(Q)]], M.dim[Q.vindex[r.tail(Q)]])
    for c, p in r.terms:
        coeff = c if F.p is None else reduce_mod_p(c, F.p)
        total = total + eval_path(M, p).scale(coeff)
    return total


def check_relations(M: Representation, relations) -> list[int]:
    return [i for i, r in enumerate(relations) if not relation_value(M, r).is_zero()]


def act(g: GroupElement, M: Representation) -> Representation:
    Q = M.quiver
    if g.dim() != M.dim:
        raise ShapeError(f"group element of size {g.dim()} on dimension {M.dim}")
    inv = []
    for b in g.blocks:
        i = b.inverse()
        if i is None:
            raise ValueError("group element has a singular block")
        inv.append(i)
    mats = {a.id: g.blocks[Q.hi(a)] @ M[a.id] @ inv[Q.ti(a)] for a in Q.arrows}
    return Representation(Q, M.dim, mats, M.field)


def _hom_offsets(dM, dN):
    offs, total = [], 0
    for x, y in zip(dM, dN):
        offs.append(total)
        total += x * y
    return offs, total


def hom_matrix(M: Representation, N: Representation) -> Matrix:
    """Matrix of ``phi -> (phi(ha) M(a) - N(a) phi(ta))_a``.

    Columns: entries of ``phi(x)`` (shape ``dN(x) x dM(x)``) row-major,
    vertices in order.  Rows: entries of each arrow's target block
    (shape ``dN(ha) x dM(ta)``) row-major, arrows in order.
    """
    Q = M.quiver
    if N.quiver != Q:
        raise ValueError("representations of different quivers")
    if M.field != N.field:
        raise FieldMismatchError(f"{M.field!r} vs {N.field!r}")
    F = M.field
    p = F.p
    dM, dN = M.dim, N.dim
    offs, ncols = _hom_offsets(dM, dN)
    rows = []
    for a in Q.arrows:
        t, h = Q.ti(a), Q.hi(a)
        Ma, Na = M[a.id].data, N[a.id].data
        for i in range(dN[h]):
            for j in range(dM[t]):
                row = [F.zero_raw] * ncols
                # phi(h)[i, k] * M(a)[k, j]
                for k in range(dM[h]):
                    c = Ma[k][j]
                    if c:
                        idx = offs[h] + i * dM[h] + k
                        row[idx] = row[idx] + c
                # - N(a)[i, l] * phi(t)[l, j]
                for l in range(dN[t]):
                    c = Na[i][l]
                    if c:
                        idx = offs[t] + l * dM[t] + j
                        row[idx] = row[idx] - c
                if p is not None:
                    row = [x % p for x in row]
                rows.append(row)
    return Matrix._from_raw(F, rows, len(rows), ncols)


def _unflatten_hom(vec, dM, dN, field):
    blocks = []
    pos = 0
    for x, y in zip(dM, dN):
        rows = [list(vec[pos + i * x: pos + (i + 1) * x]) for i in range(y)]
        blocks.append(Matrix._from_raw(field, rows, y, x))
        pos += x * y
    return blocks


def hom_space(M: Representation, N: Representation):
    """Basis of Hom(M, N) as a list of per-vertex block tuples."""
    A = hom_matrix(M, N)
    return [tuple(_unflatten_hom(v, M.dim, N.dim, M.field)) for v in A.nullspace_raw()]


def hom_dim(M, N) -> int:
    A = hom_matrix(M, N)
    return A.ncols - A.rank()


def _combine(basis, coeffs, field):
    out = []
    for x in range(len(basis[0])):
        acc = None
        for c, b in zip(coeffs, basis):
            if c:
                term = b[x].scale(c)
                acc = term if acc is None else acc + term
        out.append(acc if acc is not None else Matrix.zeros(field, *basis[0][x].shape))
    return out


def _all_invertible(blocks):
    return all(b.nrows == 0 or b.det() for b in blocks)


def _symbolic_vertex_dets(basis, field):
    """det(sum c_i phi_i(x)) as polynomials in the c_i, one per vertex."""
    from .polyring import Poly, det_poly, param
    k = len(basis)
    cs = [Poly.var(field, param(f"c{i}")) for i in range(k)]
    dets = []
    for x in range(len(basis[0])):
        n = basis[0][x].nrows
        if n == 0:
            continue
        entries = []
        for i in range(n):
            row = []
            for j in range(n):
                e = Poly.zero(field)
                for c, b in zip(cs, basis):
                    v = b[x].data[i][j]
                    if v:
                        e = e + c.scale(field.wrap(v))
                row.append(e)
            entries.append(row)
        dets.append(det_poly(entries))
    return dets, [param(f"c{i}") for i in range(k)]


def is_isomorphic(M: Representation, N: Representation, seed: int = 0, trials: int = 20,
                  cap: int = 10 ** 6, symbolic_limit: int = 6):
    """An isomorphism ``M -> N`` as a GroupElement, or ``None`` if none exists.

    Decision procedure: hom-dimension obstructions, then seeded random
    combinations of a Hom basis, then a deterministic search.  The search
    uses that an isomorphism exists iff the product of the vertex
    determinants of a general Hom element is a nonzero polynomial in the
    basis coefficients.  Raises :class:`CapExceededError` if undecided.
    """
    Q = M.quiver
    if N.quiver != Q:
        raise ValueError("representations of different quivers")
    if M.field != N.field:
        raise FieldMismatchError(f"{M.field!r} vs {N.field!r}")
    if M.dim != N.dim:
        return None
    F = M.field
    if sum(M.dim) == 0:
        return GroupElement.identity(Q, M.dim, F)
    hMN, hNM = hom_dim(M, N), hom_dim(N, M)
    eM, eN = hom_dim(M, M), hom_dim(N, N)
    if not (hMN == hNM == eM == eN):
        return None
    basis = hom_space(M, N)
    k = len(basis)
    if k == 0:
        return None
    rng = random.Random(seed)
    bound = max(10, 4 * sum(M.dim))
    for _ in range(trials):
        coeffs = [rng.randint(-bound, bound) for _ in range(k)]
        blocks = _combine(basis, coeffs, F)
        if _all_invertible(blocks):
            return GroupElement(Q, blocks, check=False)

    D = sum(M.dim)
    if max(M.dim) <= symbolic_limit:
        dets, cvars = _symbolic_vertex_dets(basis, F)
        if any(d.is_zero() for d in dets):
            return None
        if F.p is None or F.p > D:
            # fix one coefficient at a time keeping every determinant nonzero
            chosen = {}
            current = dets
            for v in cvars:
                for s in range(D + 1):
                    trial = [d.substitute({v: s}) for d in current]
                    if all(not t.is_zero() for t in trial):
                        chosen[v] = s
                        current = trial
                        break
                else:  # pragma: no cover - excluded by the degree bound
                    raise InconclusiveError("coefficient search failed")
            blocks = _combine(basis, [chosen[v] for v in cvars], F)
            return GroupElement(Q, blocks, check=False)

    values = range(F.p) if F.p is not None and F.p <= D else range(D + 1)
    size = len(values) ** k
    if size > cap:
        raise CapExceededError(f"isomorphism search needs {size} combinations (cap {cap})")
    for coeffs in itertools.product(values, repeat=k):
        blocks = _combine(basis, coeffs, F)
        if _all_invertible(blocks):
            return GroupElement(Q, blocks, check=False)
    return None


def direct_sum(reps, quiver: Quiver | None = None, field: Field | None = None) -> Representation:
    reps = list(reps)
    if not reps:
        if quiver is None:
            raise ValueError("the empty direct sum needs a quiver")
        return Representation.zero(quiver, field=field or QQ)
    Q = reps[0].quiver
    F = reps[0].field
    for r in reps:
        if r.quiver != Q:
            raise ValueError("representations of different quivers")
        if r.field != F:
            raise FieldMismatchError(f"{r.field!r} vs {F!r}")
    dim = [sum(r.dim[i] for r in reps) for i in range(Q.n)]
    mats = {a.id: Matrix.block_diagonal(F, [r[a.id] for r in reps]) for a in Q.arrows}
    return Representation(Q, dim, mats, F)


def filt_assemble(g, Msub: Representation, Mquo: Representation, X) -> Representation:
    """``g`` applied to the block upper-triangular rep ``[[M'(a), X(a)], [0, M''(a)]]``."""
    Q = Msub.quiver
    F = Msub.field
    if Mquo.quiver != Q:
        raise ValueError("representations of different quivers")
    if Mquo.field != F:
        raise FieldMismatchError(f"{Msub.field!r} vs {Mquo.field!r}")
    mats = {}
    for a in Q.arrows:
        t, h = Q.ti(a), Q.hi(a)
        shape = (Msub.dim[h], Mquo.dim[t])
        Xa = X.get(a.id) if X else None
        if Xa is None:
            Xa = Matrix.zeros(F, *shape)
        elif not isinstance(Xa, Matrix):
            Xa = Matrix(F, Xa, shape[1])
        if Xa.shape != shape:
            raise ShapeError(f"arrow {a.id!r}: X block must be {shape}, got {Xa.shape}")
        mats[a.id] = Matrix.from_blocks(F, [
            [Msub[a.id], Xa],
            [Matrix.zeros(F, Mquo.dim[h], Msub.dim[t]), Mquo[a.id]],
        ])
    dim = [x + y for x, y in zip(Msub.dim, Mquo.dim)]
    out = Representation(Q, dim, mats, F)
    if g is not None:
        out = act(g, out)
    return out


def one_ps_limit(M: Representation, lam):
    """Limit at t -> 0 of ``lambda(t).M``, or ``None`` if it does not exist.

    ``lam`` gives an integer per basis vector of each vertex space (a dict
    keyed by vertex or a sequence in vertex order).
    """
    Q = M.quiver
    if isinstance(lam, dict):
        lam = [lam[v] for v in Q.vertices]
    lam = [list(x) for x in lam]
    for x, l in zip(M.dim, lam):
        if len(l) != x:
            raise ShapeError("one weight per basis vector is required")
    F = M.field
    mats = {}
    for a in Q.arrows:
        t, h = Q.ti(a), Q.hi(a)
        rows = []
        for i, r in enumerate(M[a.id].data):
            row = []
            for j, c in enumerate(r):
                e = lam[h][i] - lam[t][j]
                if c and e < 0:
                    return None
                row.append(c if e == 0 else F.zero_raw)
            rows.append(row)
        mats[a.id] = Matrix._from_raw(F, rows, M.dim[h], M.dim[t])
    return Representation(Q, M.dim, mats, F)

