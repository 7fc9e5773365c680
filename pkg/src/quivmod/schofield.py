"""Double quivers, determinantal semi-invariants and lifting along splits.

For a quiver Q the double quiver has vertices ``v_0``, ``v_1`` per vertex
``v``, a connector ``c[v]: v_0 -> v_1`` and an arrow ``a^: (ta)_0 -> (ha)_1``
per arrow ``a``.  Splitting a single vertex ``v`` gives an intermediate
quiver; splitting every vertex in turn reproduces the double quiver with
identical names.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import _kernels
from .errors import LiftError, PreconditionError, ShapeError
from .exactfield import GF, Field, Matrix, reduce_mod_p
from .polyring import (
    Poly, RationalExpr, adjugate_poly, arrow_var, det_poly, substitute,
)
from .quivercore import (
    Arrow, Quiver, Representation, euler_form, hom_matrix, theta_eval,
)

__all__ = [
    "DoubleQuiver",
    "VertexSplit",
    "double_quiver",
    "hat_dim",
    "tau",
    "vertex_split",
    "tau_v",
    "dxy_matrix",
    "schofield_semiinvariant",
    "block_sign",
    "schofield_weight",
    "weight_to_dims",
    "paths_count",
    "domokos_lift",
    "lift_to_double",
    "lift_weight",
    "dims_for_weight",
    "semistable_witness",
    "SchofieldEvaluator",
    "schofield_polynomial",
]

HAT = "^"


def v0(v: str) -> str:
    return f"{v}_0"


def v1(v: str) -> str:
    return f"{v}_1"


def conn(v: str) -> str:
    return f"c[{v}]"


def hat(a: str) -> str:
    return a if a.endswith(HAT) else a + HAT


@dataclass
class DoubleQuiver:
    quiver: Quiver
    base: Quiver

    def v0(self, v):
        return v0(v)

    def v1(self, v):
        return v1(v)

    def hat(self, a):
        return hat(a)

    def conn(self, v):
        return conn(v)


@dataclass
class VertexSplit:
    quiver: Quiver
    base: Quiver
    vertex: str
    renamed: dict  # old arrow id -> new arrow id, for arrows incident to the vertex
    connector: str


def _check_names(Q: Quiver):
    for a in Q.arrows:
        if a.id.startswith("c[") and a.id.endswith("]") and a.id[2:-1] in Q.vindex:
            raise ValueError(f"arrow id {a.id!r} clashes with connector names")


def double_quiver(Q: Quiver) -> DoubleQuiver:
    _check_names(Q)
    verts = [v0(v) for v in Q.vertices] + [v1(v) for v in Q.vertices]
    arrows = [Arrow(conn(v), v0(v), v1(v)) for v in Q.vertices]
    arrows += [Arrow(hat(a.id), v0(a.tail), v1(a.head)) for a in Q.arrows]
    Qh = Quiver(verts, arrows)
    assert Qh.is_acyclic()
    return DoubleQuiver(Qh, Q)


def hat_dim(Q: Quiver, d) -> tuple:
    d = Q.vec(d)
    return d + d


def tau(M: Representation, D: DoubleQuiver | None = None) -> Representation:
    Q = M.quiver
    D = D or double_quiver(Q)
    F = M.field
    mats = {conn(v): Matrix.identity(F, M.dim[i]) for i, v in enumerate(Q.vertices)}
    for a in Q.arrows:
        mats[hat(a.id)] = M[a.id]
    return Representation(D.quiver, hat_dim(Q, M.dim), mats, F)


def vertex_split(Q: Quiver, v: str) -> VertexSplit:
    """Split ``v`` into ``v_0`` (keeping outgoing arrows) and ``v_1`` (incoming)."""
    if v not in Q.vindex:
        raise ValueError(f"unknown vertex {v!r}")
    verts = []
    for x in Q.vertices:
        if x == v:
            verts += [v0(v), v1(v)]
        else:
            verts.append(x)
    arrows, renamed = [], {}
    for a in Q.arrows:
        t, h = a.tail, a.head
        if t != v and h != v:
            arrows.append(a)
            continue
        nt = v0(v) if t == v else t
        nh = v1(v) if h == v else h
        new = Arrow(hat(a.id), nt, nh)
        renamed[a.id] = new.id
        arrows.append(new)
    arrows.append(Arrow(conn(v), v0(v), v1(v)))
    return VertexSplit(Quiver(verts, arrows), Q, v, renamed, conn(v))


def split_dim(Q: Quiver, d, v: str) -> dict:
    d = dict(zip(Q.vertices, Q.vec(d)))
    x = d.pop(v)
    d[v0(v)] = x
    d[v1(v)] = x
    return d


def tau_v(M: Representation, v: str, S: VertexSplit | None = None) -> Representation:
    Q = M.quiver
    S = S or vertex_split(Q, v)
    F = M.field
    mats = {}
    for a in Q.arrows:
        mats[S.renamed.get(a.id, a.id)] = M[a.id]
    mats[S.connector] = Matrix.identity(F, M.dim[Q.vindex[v]])
    return Representation(S.quiver, split_dim(Q, M.dim, v), mats, F)


def dxy_matrix(X: Representation, Y: Representation) -> Matrix:
    """Matrix of ``phi -> phi(hb) X(b) - Y(b) phi(tb)`` in the canonical bases."""
    return hom_matrix(X, Y)


def schofield_semiinvariant(V: Representation, W: Representation):
    """``det`` of :func:`dxy_matrix`; requires the Euler pairing to vanish."""
    if euler_form(V.quiver, V.dim, W.dim) != 0:
        raise ShapeError("the Euler pairing of the dimension vectors is nonzero")
    return dxy_matrix(V, W).det()


def _block_parity(labels) -> int:
    # inversions of the stable sort that groups equal labels together
    inv = 0
    seen: dict = {}
    for lab in labels:
        inv += sum(k for key, k in seen.items() if key > lab)
        seen[lab] = seen.get(lab, 0) + 1
    return inv & 1


def block_sign(Q: Quiver, c_parts, d_parts) -> int:
    """Sign relating ``det hom_matrix(V, W)`` for ``V = (+) V_k``, ``W = (+) W_l`` to the
    product over blocks.

    The canonical bases of :func:`~quivmod.quivercore.hom_matrix` interleave the
    summands vertex by vertex; grouping them into blocks is a permutation of
    rows and of columns whose combined sign depends on the dimension vectors
    only.  With ``V`` split and ``W`` whole (or the reverse), and every block
    square, ``c^V(W) = block_sign * prod c^{V_k}(W_l)``.
    """
    cs = [Q.vec(c) for c in c_parts]
    ds = [Q.vec(d) for d in d_parts]

    def owner(parts, x, idx):
        for k, p in enumerate(parts):
            if idx < p[x]:
                return k
            idx -= p[x]
        raise IndexError(idx)

    def labels(x_w, x_v):
        nw = sum(d[x_w] for d in ds)
        nv = sum(c[x_v] for c in cs)
        return [(owner(cs, x_v, j), owner(ds, x_w, i)) for i in range(nw) for j in range(nv)]

    cols = [lab for x in range(Q.n) for lab in labels(x, x)]
    rows = [lab for a in Q.arrows for lab in labels(Q.hi(a), Q.ti(a))]
    return -1 if _block_parity(cols) ^ _block_parity(rows) else 1


def schofield_weight(Q: Quiver, c) -> tuple:
    """``w(y) = c(y) - sum over arrows b with hb = y of c(tb)``."""
    c = Q.vec(c)
    w = list(c)
    for b in Q.arrows:
        w[Q.hi(b)] -= c[Q.ti(b)]
    return tuple(w)


def paths_count(Q: Quiver, x: int) -> list[int]:
    """Number of paths from vertex index ``x`` to each vertex (acyclic Q)."""
    order = Q.topological_order()
    if order is None:
        raise ValueError("path counts need an acyclic quiver")
    cnt = [0] * Q.n
    cnt[x] = 1
    for y in order:
        if cnt[y]:
            for b in Q.arrows:
                if Q.ti(b) == y:
                    cnt[Q.hi(b)] += cnt[y]
    return cnt


def weight_to_dims(Q: Quiver, theta) -> tuple[tuple, tuple]:
    """Unique ``(c, f)`` with disjoint supports and ``theta = <c - dim P_f, ->``."""
    theta = Q.vec(theta)
    order = Q.topological_order()
    if order is None:
        raise ValueError("weight_to_dims needs an acyclic quiver")
    c = [0] * Q.n
    f = [0] * Q.n
    for y in order:
        s = sum(c[Q.ti(b)] for b in Q.arrows if Q.hi(b) == y)
        val = theta[y] + s
        if val >= 0:
            c[y] = val
        else:
            f[y] = -val
    return tuple(c), tuple(f)


# lifting

def _arrow_vars(aid, rows, cols):
    return [[arrow_var(aid, i, j) for j in range(cols)] for i in range(rows)]


def domokos_lift(f: Poly, Q: Quiver, d, v: str, n: int | None = None):
    """Lift ``f`` on rep(Q, d) to the split at ``v``.

    Entries of arrows with head ``v`` are replaced by those of
    ``X(c_v)^-1 X(a^)`` (via the adjugate), arrows with tail ``v`` are
    renamed, and the result is multiplied by ``det X(c_v)^n``.  Returns
    ``(lifted poly, VertexSplit, required n)``.
    """
    d = Q.vec(d)
    S = vertex_split(Q, v)
    F = f.field
    k = d[Q.vindex[v]]
    head_vars = set()
    mapping = {}
    cvars = _arrow_vars(S.connector, k, k)
    cpolys = [[Poly.var(F, x) for x in row] for row in cvars]
    det_c = det_poly(cpolys) if k else Poly.one(F)
    adj = adjugate_poly(cpolys) if k else []
    for a in Q.arrows:
        rows, cols = d[Q.hi(a)], d[Q.ti(a)]
        if a.id not in S.renamed:
            continue
        new = S.renamed[a.id]
        if a.head == v:
            for i in range(rows):
                for j in range(cols):
                    head_vars.add(arrow_var(a.id, i, j))
                    num = Poly.zero(F)
                    for kk in range(k):
                        num = num + adj[i][kk] * Poly.var(F, arrow_var(new, kk, j))
                    mapping[arrow_var(a.id, i, j)] = RationalExpr(num, det_c, 1)
        else:
            for i in range(rows):
                for j in range(cols):
                    mapping[arrow_var(a.id, i, j)] = Poly.var(F, arrow_var(new, i, j))
    need = max(f.degree_in(head_vars), 0)
    if n is None:
        n = need
    if n < need:
        raise LiftError(f"n={n} is below the clearing bound {need} at vertex {v!r}")
    if not mapping:
        return f * det_c ** n, S, need
    g = substitute(f, mapping)
    if isinstance(g, RationalExpr):
        return g.clear(n), S, need
    return g * det_c ** n, S, need


def lift_to_double(f: Poly, Q: Quiver, d, theta, n=None):
    """Split every vertex in turn; returns ``(lifted poly, weight on the double)``.

    ``n`` is a per-vertex sequence (or dict) of clearing exponents; ``None``
    entries use the smallest admissible value.  The weight is returned in
    the vertex order of :func:`double_quiver`.
    """
    theta = Q.vec(theta)
    if n is None:
        n = [None] * Q.n
    elif isinstance(n, dict):
        n = [n.get(v) for v in Q.vertices]
    cur_q = Q
    cur_d = dict(zip(Q.vertices, Q.vec(d)))
    cur_w = dict(zip(Q.vertices, theta))
    g = f
    used = []
    for i, v in enumerate(Q.vertices):
        g, S, need = domokos_lift(g, cur_q, [cur_d[x] for x in cur_q.vertices], v, n[i])
        nv = need if n[i] is None else n[i]
        used.append(nv)
        cur_d[v0(v)] = cur_d[v1(v)] = cur_d.pop(v)
        w = cur_w.pop(v)
        cur_w[v0(v)] = w + nv
        cur_w[v1(v)] = -nv
        cur_q = S.quiver
    D = double_quiver(Q)
    return g, tuple(cur_w[x] for x in D.quiver.vertices), tuple(used)


def lift_weight(Q: Quiver, theta, n) -> tuple:
    """``theta(v) + n_v`` at ``v_0`` and ``-n_v`` at ``v_1``, double-quiver order."""
    theta = Q.vec(theta)
    n = Q.vec(n)
    return tuple(t + x for t, x in zip(theta, n)) + tuple(-x for x in n)


def dims_for_weight(Q: Quiver, theta, n):
    """Dimension vector ``c`` on the double for the lift weight, or ``None``.

    ``None`` means the projective part is nonzero at some vertex, so no
    determinantal semi-invariant of dimension ``c`` has this weight.
    """
    D = double_quiver(Q)
    w = lift_weight(Q, theta, n)
    c, f = weight_to_dims(D.quiver, w)
    if any(f):
        return None
    return c


def _random_rep(Qh: Quiver, dim, rng, bound, field):
    mats = {}
    for a in Qh.arrows:
        r, c = dim[Qh.hi(a)], dim[Qh.ti(a)]
        if field.p is None:
            mats[a.id] = Matrix(field, [[rng.randint(-bound, bound) for _ in range(c)] for _ in range(r)], c)
        else:
            mats[a.id] = Matrix(field, [[rng.randrange(field.p) for _ in range(c)] for _ in range(r)], c)
    return Representation(Qh, dim, mats, field)


def semistable_witness(M: Representation, theta, trials: int = 20, seed: int = 0,
                       bound: int = 5, m_max: int = 3, n_max: int = 3):
    """A certificate ``(V, m, value)`` with ``c^V(tau(M)) != 0`` of weight ``m*theta``.

    Any returned certificate proves semistability.  ``None`` is inconclusive.
    """
    Q = M.quiver
    theta = Q.vec(theta)
    if theta_eval(theta, M.dim) != 0:
        raise PreconditionError("theta(dim M) must vanish")
    D = double_quiver(Q)
    supp = [i for i, x in enumerate(M.dim) if x]
    if all(theta[i] == 0 for i in supp):
        return (None, 0, M.field.wrap(M.field.one_raw))
    W = tau(M, D)
    rng = random.Random(seed)
    for m in range(1, m_max + 1):
        mtheta = [m * t for t in theta]
        for c in _candidate_dims(Q, mtheta, n_max):
            for _ in range(trials):
                V = _random_rep(D.quiver, c, rng, bound, M.field)
                val = dxy_matrix(V, W).det()
                if val:
                    return (V, m, val)
    return None


def _candidate_dims(Q: Quiver, mtheta, n_max: int):
    """Double-quiver dimension vectors realizing weight ``mtheta`` along tau."""
    seen = set()
    base = [max(0, -t) for t in mtheta]
    for extra in range(n_max + 1):
        for shift in _shifts(Q.n, extra):
            n = [b + s for b, s in zip(base, shift)]
            c = dims_for_weight(Q, mtheta, n)
            if c is not None and c not in seen and any(c):
                seen.add(c)
                yield c


def _shifts(k, total):
    if k == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _shifts(k - 1, total - first):
            yield (first,) + rest


class SchofieldEvaluator:
    """Evaluate ``W -> c^V(tau(W))`` modulo a prime for a fixed ``V``.

    The determinant matrix is affine in the entries of ``W``; the constant
    part and one coefficient matrix per entry are precomputed.
    """

    def __init__(self, V: Representation, base: Quiver, dim, prime: int):
        self._det = _kernels.det_mod_p
        self.p = prime
        self.base = base
        self.dim = base.vec(dim)
        D = double_quiver(base)
        Qh = D.quiver
        F = GF(prime)
        if V.field != F:
            V = Representation(Qh, V.dim, {k: _to_field(m, F) for k, m in V.matrices.items()}, F)
        self.V = V
        A0, parts = _affine_parts(V, base, self.dim, F)
        if A0.nrows != A0.ncols:
            raise ShapeError("the Euler pairing of the dimension vectors is nonzero")
        self.size = A0.nrows
        self.const = [list(r) for r in A0.data]
        self.coeffs = []
        for key, A in parts:
            diff = [(ri, ci, v) for ri, row in enumerate(A.data) for ci, v in enumerate(row) if v]
            self.coeffs.append((key, diff))

    def __call__(self, W: Representation) -> int:
        p = self.p
        rows = [list(r) for r in self.const]
        for (aid, i, j), diff in self.coeffs:
            x = W[aid].data[i][j]
            if W.field.p is None:
                x = reduce_mod_p(x, p)
            if x:
                for ri, ci, v in diff:
                    rows[ri][ci] = (rows[ri][ci] + x * v) % p
        if not rows:
            return 1
        return self._det(rows, p)


def _affine_parts(V: Representation, base: Quiver, dim, F: Field):
    """``hom_matrix(V, tau(W))`` as ``A0 + sum_e W_e A_e`` over the entries ``e`` of ``W``."""
    D = double_quiver(base)
    A0 = hom_matrix(V, tau(Representation.zero(base, dim, F), D))
    parts = []
    for a in base.arrows:
        r, c = dim[base.hi(a)], dim[base.ti(a)]
        for i in range(r):
            for j in range(c):
                unit = Matrix(F, [[int((ii, jj) == (i, j)) for jj in range(c)] for ii in range(r)], c)
                A = hom_matrix(V, tau(Representation(base, dim, {a.id: unit}, F), D))
                parts.append(((a.id, i, j), A - A0))
    return A0, parts


def schofield_polynomial(V: Representation, base: Quiver, dim) -> Poly:
    """``W -> c^V(tau(W))`` as an explicit polynomial in the entries of ``W``.

    Cost grows like the expansion of a symbolic determinant, so this is for
    small dimension vectors only.
    """
    dim = base.vec(dim)
    F = V.field
    A0, parts = _affine_parts(V, base, dim, F)
    if A0.nrows != A0.ncols:
        raise ShapeError("the Euler pairing of the dimension vectors is nonzero")
    n = A0.nrows
    entries = [[Poly.const(F, F.wrap(A0.data[i][j])) for j in range(n)] for i in range(n)]
    for (aid, i, j), A in parts:
        x = Poly.var(F, arrow_var(aid, i, j))
        for r, row in enumerate(A.data):
            for c, v in enumerate(row):
                if v:
                    entries[r][c] = entries[r][c] + x.scale(F.wrap(v))
    return det_poly(entries, F)


def _to_field(m: Matrix, F: Field) -> Matrix:
    if m.field == F:
        return m
    if m.field.p is None:
        return m.reduce_mod(F.p)
    return Matrix(F, [[x % F.p for x in r] for r in m.data], m.ncols)
