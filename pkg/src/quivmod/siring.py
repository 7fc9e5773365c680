"""Weight spaces of semi-invariants, their restrictions and Hilbert functions.

The weight space of weight ``m*theta`` is computed inside the span of
monomials of the right torus weight and bounded total degree, modulo the
degree-truncated span of the relation ideal.  Invariance under every
elementary transvection is imposed as an exact identity in a formal
parameter.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .errors import InconclusiveError, PreconditionError, ShapeError
from .exactfield import QQ, GF, Field, Matrix, SparseEchelon, parse_rational, reduce_mod_p
from .polyring import (
    Poly, arrow_var, monomials_of_multidegree, param, parameter_expansion, poly_eval, poly_from_json,
    poly_to_json, substitute,
)
from .quivercore import (
    Quiver, Representation, check_relations, direct_sum, theta_eval,
)

__all__ = [
    "Parametrization",
    "ComponentSpec",
    "SumSpec",
    "WeightSpaceBasis",
    "symbolic_matrices",
    "relation_polys",
    "si_space",
    "restrict_dim",
    "hilbert_function",
    "schofield_hilbert",
    "pullback_direct_sum",
    "default_degree_bound",
    "evaluate_at",
    "component_to_json",
    "component_from_json",
    "sumspec_from_json",
]

DEFAULT_PRIME = 2 ** 31 - 1


# specifications of subvarieties

@dataclass
class Parametrization:
    """Arrow matrices whose entries are polynomials in ``params`` parameters."""

    params: int
    matrices: dict

    def point(self, Q: Quiver, dim, values, field: Field = QQ) -> Representation:
        assign = {param(f"t{i}"): v for i, v in enumerate(values)}
        mats = {}
        for a in Q.arrows:
            rows = self.matrices.get(a.id)
            if rows is None:
                continue
            mats[a.id] = Matrix(field, [[poly_eval(e, assign) if isinstance(e, Poly) else e
                                          for e in row] for row in rows], dim[Q.ti(a)])
        return Representation(Q, dim, mats, field)


@dataclass
class ComponentSpec:
    """A closed subvariety of rep(A, d) given by equations and/or parametrizations."""

    quiver: Quiver
    relations: list
    dim: tuple
    equations: list = dc_field(default_factory=list)
    parametrizations: list = dc_field(default_factory=list)
    id: str = "C"

    def __post_init__(self):
        self.dim = self.quiver.vec(self.dim)
        if isinstance(self.parametrizations, Parametrization):
            self.parametrizations = [self.parametrizations]

    def sample(self, rng: random.Random, bound: int = 5, general: bool = False) -> Representation:
        """A seeded point; ``general`` keeps every parameter nonzero."""
        if not self.parametrizations:
            raise PreconditionError(f"component {self.id!r} has no parametrization")
        par = self.parametrizations[rng.randrange(len(self.parametrizations))]
        pool = [v for v in range(-bound, bound + 1) if v or not general]
        values = [rng.choice(pool) for _ in range(par.params)]
        return par.point(self.quiver, self.dim, values)

    def check_samples(self, count: int = 10, seed: int = 0) -> list[str]:
        """Problems found on seeded samples (relations or equations failing)."""
        rng = random.Random(seed)
        issues = []
        for _ in range(count if self.parametrizations else 0):
            M = self.sample(rng)
            bad = check_relations(M, self.relations)
            if bad:
                issues.append(f"relations {bad} fail at {M}")
            point = rep_point(M)
            for k, e in enumerate(self.equations):
                if poly_eval(e, point):
                    issues.append(f"equation {k} fails at {M}")
        return issues

    def contains(self, M: Representation) -> bool:
        """Membership via the equations (and relations)."""
        if M.dim != self.dim:
            return False
        if check_relations(M, self.relations):
            return False
        point = rep_point(M)
        return all(not poly_eval(e.reduce_mod(M.field.p) if M.field.p else e, point)
                   for e in self.equations)


@dataclass
class SumSpec:
    """The closure of GL . (C_1^m_1 x ... x C_r^m_r x {M_1} x ...)."""

    parts: list  # list of (ComponentSpec, multiplicity)
    fixed: list = dc_field(default_factory=list)  # representations (orbit closures)
    id: str = "sum"

    @property
    def quiver(self):
        if self.parts:
            return self.parts[0][0].quiver
        return self.fixed[0].quiver

    @property
    def relations(self):
        return self.parts[0][0].relations if self.parts else []

    @property
    def dim(self):
        Q = self.quiver
        d = [0] * Q.n
        for C, mult in self.parts:
            d = [x + mult * y for x, y in zip(d, C.dim)]
        for M in self.fixed:
            d = [x + y for x, y in zip(d, M.dim)]
        return tuple(d)

    def sample(self, rng: random.Random, bound: int = 5, general: bool = False) -> Representation:
        reps = []
        for C, mult in self.parts:
            for _ in range(mult):
                reps.append(C.sample(rng, bound, general))
        reps.extend(self.fixed)
        return direct_sum(reps, self.quiver)


def _entry_to_json(e):
    if isinstance(e, Poly):
        return poly_to_json(e)
    return str(e)


def _entry_from_json(e):
    if isinstance(e, list):
        return poly_from_json(e, QQ)
    return parse_rational(e) if isinstance(e, str) else e


def component_to_json(C: ComponentSpec) -> dict:
    out = {"id": C.id, "dim": {v: k for v, k in zip(C.quiver.vertices, C.dim)},
           "equations": [poly_to_json(e) for e in C.equations]}
    pars = [{"params": P.params,
             "matrices": {a: [[_entry_to_json(e) for e in row] for row in rows]
                          for a, rows in P.matrices.items()}} for P in C.parametrizations]
    if len(pars) == 1:
        out["parametrization"] = pars[0]
    elif pars:
        out["parametrizations"] = pars
    return out


def component_from_json(Q: Quiver, relations, obj) -> ComponentSpec:
    """Accepts a single ``parametrization`` or a list ``parametrizations``."""
    raw = obj.get("parametrizations") or ([obj["parametrization"]] if obj.get("parametrization") else [])
    pars = [Parametrization(int(P["params"]),
                            {a: [[_entry_from_json(e) for e in row] for row in rows]
                             for a, rows in P["matrices"].items()}) for P in raw]
    return ComponentSpec(Q, relations, Q.vec(obj["dim"]),
                         [poly_from_json(e, QQ) for e in obj.get("equations", [])],
                         pars, obj.get("id", "C"))


def sumspec_from_json(Q: Quiver, relations, obj) -> SumSpec:
    """``{"parts": [{"component": {...}, "mult": k}], "fixed": [representation, ...]}``."""
    parts = [(component_from_json(Q, relations, p["component"]), int(p.get("mult", 1)))
             for p in obj.get("parts", [])]
    fixed = [Representation.from_json(Q, M) for M in obj.get("fixed", [])]
    return SumSpec(parts, fixed, obj.get("id", "sum"))


def rep_point(M: Representation) -> dict:
    """The coordinates of ``M`` as an assignment of arrow-entry variables."""
    out = {}
    for aid, m in M.matrices.items():
        for i, row in enumerate(m.data):
            for j, x in enumerate(row):
                out[arrow_var(aid, i, j)] = M.field.wrap(x)
    return out


def evaluate_at(f: Poly, M: Representation):
    return poly_eval(f, rep_point(M))


# symbolic representations

def symbolic_matrices(Q: Quiver, dim, field: Field = QQ) -> dict:
    dim = Q.vec(dim)
    out = {}
    for a in Q.arrows:
        r, c = dim[Q.hi(a)], dim[Q.ti(a)]
        out[a.id] = [[Poly.var(field, arrow_var(a.id, i, j)) for j in range(c)] for i in range(r)]
    return out


def _sym_mul(A, B, field, inner, cols):
    rows = len(A)
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            s = Poly.zero(field)
            for k in range(inner):
                s = s + A[i][k] * B[k][j]
            row.append(s)
        out.append(row)
    return out


def relation_polys(Q: Quiver, relations, dim, field: Field = QQ) -> list[Poly]:
    """Entries of every relation evaluated on the generic representation."""
    dim = Q.vec(dim)
    sym = symbolic_matrices(Q, dim, field)
    out = []
    for r in relations:
        t = dim[Q.vindex[r.tail(Q)]]
        h = dim[Q.vindex[r.head(Q)]]
        total = [[Poly.zero(field) for _ in range(t)] for _ in range(h)]
        for c, path in r.terms:
            mat = sym[path.arrows[0]]
            inner = dim[Q.vindex[Q.arrow[path.arrows[0]].head]]
            for x in path.arrows[1:]:
                mat = _sym_mul(sym[x], mat, field, inner, t)
                inner = dim[Q.vindex[Q.arrow[x].head]]
            coeff = c if field.p is None else reduce_mod_p(c, field.p)
            for i in range(h):
                for j in range(t):
                    total[i][j] = total[i][j] + mat[i][j].scale(coeff)
        for row in total:
            out.extend(e for e in row if e)
    return out


# monomial enumeration by torus weight

class _Ambient:
    """Arrow-entry variables of rep(Q, d) with their torus weights."""

    def __init__(self, Q: Quiver, dim):
        self.Q = Q
        self.dim = Q.vec(dim)
        self.arrows = [a for a in Q.arrows if self.dim[Q.hi(a)] and self.dim[Q.ti(a)]]
        self.coords = [(x, i) for x in range(Q.n) for i in range(self.dim[x])]
        self.cindex = {c: k for k, c in enumerate(self.coords)}
        self.vars_of = {}
        self.var_weight = {}
        for a in self.arrows:
            t, h = Q.ti(a), Q.hi(a)
            vs = []
            for i in range(self.dim[h]):
                for j in range(self.dim[t]):
                    v = arrow_var(a.id, i, j)
                    vs.append(v)
                    w = [0] * len(self.coords)
                    w[self.cindex[(t, j)]] += 1
                    w[self.cindex[(h, i)]] -= 1
                    self.var_weight[v] = tuple(w)
            self.vars_of[a.id] = vs
        self.acyclic = Q.support_quiver_acyclic(self.dim)

    def vertex_weight(self, cweight):
        out = [0] * self.Q.n
        for (x, _), w in zip(self.coords, cweight):
            out[x] += w
        return out

    def mono_weight(self, mono):
        w = [0] * len(self.coords)
        for v, e in mono:
            for k, x in enumerate(self.var_weight[v]):
                if x:
                    w[k] += e * x
        return tuple(w)

    def degree_bound(self, vweight):
        """A bound on the total degree of monomials of vertex weight ``vweight``."""
        Q = self.Q
        sub = Quiver([v for v, x in zip(Q.vertices, self.dim) if x], self.arrows)
        sorder = sub.topological_order()
        if sorder is None:
            return None
        order = [Q.vindex[sub.vertices[i]] for i in sorder]
        bout = {}
        for x in order:
            preds = {Q.ti(a) for a in self.arrows if Q.hi(a) == x}
            inflow = sum(bout.get(y, 0) for y in preds)
            bout[x] = max(0, inflow + vweight[x])
        return sum(bout.values())

    def degree_vectors(self, vweight, D):
        """Arrow-degree vectors with out-minus-in equal to ``vweight`` and total <= D."""
        Q = self.Q
        arrows = self.arrows
        last = {}
        for k, a in enumerate(arrows):
            last[Q.ti(a)] = k
            last[Q.hi(a)] = k
        closes = [[] for _ in arrows]
        for x in range(Q.n):
            if x in last:
                closes[last[x]].append(x)
            elif vweight[x] != 0:
                return []
        bal = [0] * Q.n
        out = []
        degs = [0] * len(arrows)

        def rec(k, used):
            if k == len(arrows):
                out.append(tuple(degs))
                return
            a = arrows[k]
            t, h = Q.ti(a), Q.hi(a)
            for e in range(D - used + 1):
                degs[k] = e
                bal[t] += e
                bal[h] -= e
                if all(bal[x] == vweight[x] for x in closes[k]):
                    rec(k + 1, used + e)
                bal[t] -= e
                bal[h] += e
            degs[k] = 0

        rec(0, 0)
        return out

    def monomials(self, cweight, D):
        vweight = self.vertex_weight(cweight)
        out = []
        for degs in self.degree_vectors(vweight, D):
            groups = [self.vars_of[a.id] for a in self.arrows]
            for mono in monomials_of_multidegree(groups, degs):
                if self.mono_weight(mono) == cweight:
                    out.append(mono)
        return sorted(out)


class _WeightPiece:
    """Monomials of one torus weight modulo the truncated ideal."""

    def __init__(self, amb: _Ambient, cweight, D, generators, field):
        self.cweight = cweight
        self.monos = amb.monomials(cweight, D)
        self.index = {m: k for k, m in enumerate(self.monos)}
        self.field = field
        self.ech = SparseEchelon(field)
        for g, gw, gdeg in generators:
            rest = tuple(x - y for x, y in zip(cweight, gw))
            if D - gdeg < 0:
                continue
            for mu in amb.monomials(rest, D - gdeg):
                prod = Poly._make(field, {mu: field.one_raw}) * g
                self.ech.add(self.vector(prod))
        self.standard = [k for k in range(len(self.monos)) if k not in self.ech.rows]

    def vector(self, f: Poly) -> dict:
        out = {}
        for m, c in f.terms.items():
            k = self.index.get(m)
            if k is None:
                raise ValueError(f"monomial {m} lies outside the weight piece")
            out[k] = c
        return out

    def normal_form(self, f: Poly) -> dict:
        return self.ech.reduce(self.vector(f))


def _split_torus_homogeneous(amb: _Ambient, f: Poly):
    parts = {}
    for m, c in f.terms.items():
        parts.setdefault(amb.mono_weight(m), {})[m] = c
    return [(Poly._make(f.field, t), w) for w, t in parts.items()]


@dataclass
class WeightSpaceBasis:
    polys: list
    weight: tuple
    multiplier: int
    degree_bound: int
    truncated: bool
    dim_vector: tuple
    note: str = ""

    def __len__(self):
        return len(self.polys)


def default_degree_bound(Q: Quiver, dim, theta, m: int):
    amb = _Ambient(Q, dim)
    cw = tuple(m * theta[x] for (x, _) in amb.coords)
    return amb.degree_bound(amb.vertex_weight(cw))


def si_space(Q: Quiver, relations, dim, theta, m: int = 1, degree_bound: int | None = None,
             equations=(), field: Field = QQ) -> WeightSpaceBasis:
    """Basis of the weight-``m*theta`` semi-invariants (modulo the ideal).

    ``equations`` are extra generators (a component's ideal) added to the
    relation entries; they are split into torus-homogeneous parts.
    """
    dim = Q.vec(dim)
    theta = Q.vec(theta)
    amb = _Ambient(Q, dim)
    cw = tuple(m * theta[x] for (x, _) in amb.coords)
    truncated = not amb.acyclic
    if degree_bound is None:
        if truncated:
            raise PreconditionError("an oriented cycle in the support needs an explicit degree bound")
        degree_bound = amb.degree_bound(amb.vertex_weight(cw))
    D = degree_bound
    if m and theta_eval(theta, dim) != 0:
        return WeightSpaceBasis([], theta, m, D, truncated, dim, note="theta(d) != 0")

    gens = []
    for g in list(relation_polys(Q, relations, dim, field)) + [e for e in equations]:
        if g.field != field:
            g = g.reduce_mod(field.p)
        for part, w in _split_torus_homogeneous(amb, g):
            gens.append((part, w, part.total_degree()))

    pieces = {}

    def piece(w):
        if w not in pieces:
            pieces[w] = _WeightPiece(amb, w, D, gens, field)
        return pieces[w]

    base = piece(cw)
    std = base.standard
    if not std:
        return WeightSpaceBasis([], theta, m, D, truncated, dim)
    std_polys = [Poly._make(field, {base.monos[k]: field.one_raw}) for k in std]

    # transvection constraints
    constraint_rows = []
    t = param("t")
    for x in range(Q.n):
        n = dim[x]
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                mapping = _transvection_map(Q, dim, x, i, j, field, t)
                if not mapping:
                    continue
                per_k = {}
                for col, s in enumerate(std_polys):
                    img = substitute(s, mapping)
                    for k, coeff in parameter_expansion(img, t).items():
                        if k == 0:
                            continue
                        per_k.setdefault(k, []).append((col, coeff))
                for k, items in per_k.items():
                    shift = list(cw)
                    shift[amb.cindex[(x, i)]] += k
                    shift[amb.cindex[(x, j)]] -= k
                    pc = piece(tuple(shift))
                    rows = {}
                    for col, coeff in items:
                        for r, v in pc.normal_form(coeff).items():
                            rows.setdefault(r, {})[col] = v
                    constraint_rows.extend(rows.values())

    if constraint_rows:
        dense = [[row.get(c, field.zero_raw) for c in range(len(std))] for row in constraint_rows]
        kernel = Matrix._from_raw(field, dense, len(dense), len(std)).nullspace_raw()
    else:
        kernel = [[field.one_raw if c == k else field.zero_raw for c in range(len(std))]
                  for k in range(len(std))]
    polys = []
    for vec in kernel:
        terms = {base.monos[std[c]]: v for c, v in enumerate(vec) if v}
        polys.append(Poly._make(field, terms))
    polys.sort(key=lambda f: f.sorted_terms()[0][0])
    return WeightSpaceBasis(polys, theta, m, D, truncated, dim)


def _transvection_map(Q, dim, x, i, j, field, t):
    """Images of arrow entries under ``M -> g^-1 . M`` with ``g = I + t E_ij`` at ``x``.

    Heads at ``x`` get ``row_i -= t row_j``; tails at ``x`` get
    ``col_j += t col_i``.
    """
    T = Poly.var(field, t)
    mapping = {}
    for a in Q.arrows:
        ta, ha = Q.ti(a), Q.hi(a)
        if x not in (ta, ha):
            continue
        r, c = dim[ha], dim[ta]
        if r == 0 or c == 0:
            continue
        M = [[Poly.var(field, arrow_var(a.id, p, q)) for q in range(c)] for p in range(r)]
        if ha == x:
            M = [row[:] for row in M]
            M[i] = [M[i][q] - T * M[j][q] for q in range(c)]
        if ta == x:
            M = [row[:] for row in M]
            for p in range(r):
                M[p][j] = M[p][j] + T * M[p][i]
        for p in range(r):
            for q in range(c):
                mapping[arrow_var(a.id, p, q)] = M[p][q]
    return mapping


# restriction to components

def _rank_exact(rows, ncols):
    if not rows:
        return 0
    return Matrix(QQ, rows, ncols).rank()


def restrict_dim(C: ComponentSpec, theta, m: int = 1, degree_bound: int | None = None,
                 samples: int | None = None, seed: int = 0, method: str = "auto", bound: int = 5):
    """``dim SI(C)_{m theta}`` with the evaluation matrix and an image basis.

    ``method`` is ``"sample"`` (rank of the ambient basis at sampled points),
    ``"ideal"`` (quotient by the enlarged ideal) or ``"auto"`` (sampling when
    a parametrization is available).  Returns a dict.
    """
    Q = C.quiver
    theta = Q.vec(theta)
    if method == "auto":
        method = "sample" if C.parametrizations else "ideal"
    if method == "ideal":
        B = si_space(Q, C.relations, C.dim, theta, m, degree_bound, equations=C.equations)
        return {"dim": len(B), "basis": B.polys, "matrix": None, "method": "ideal",
                "degree_bound": B.degree_bound, "truncated": B.truncated}
    B = si_space(Q, C.relations, C.dim, theta, m, degree_bound)
    if not B.polys:
        return {"dim": 0, "basis": [], "matrix": [], "method": "sample",
                "degree_bound": B.degree_bound, "truncated": B.truncated}
    rng = random.Random(seed)
    count = samples or 3 * len(B.polys)
    points = []
    history = []
    while True:
        while len(points) < count:
            points.append(C.sample(rng, bound))
        rows = [[evaluate_at(f, P) for P in points] for f in B.polys]
        r = _rank_exact(rows, len(points))
        history.append(r)
        if r == len(B.polys) or (len(history) >= 3 and history[-1] == history[-2] == history[-3]):
            break
        if len(history) > 8:
            raise InconclusiveError(f"rank did not stabilize: {history}")
        count *= 2
    image = _independent_rows(B.polys, rows)
    return {"dim": r, "basis": image, "matrix": rows, "method": "sample",
            "degree_bound": B.degree_bound, "truncated": B.truncated}


def _independent_rows(polys, rows):
    keep, acc = [], []
    rank = 0
    for f, row in zip(polys, rows):
        trial = acc + [row]
        r = _rank_exact(trial, len(row))
        if r > rank:
            acc, rank = trial, r
            keep.append(f)
    return keep


def hilbert_function(spec, theta, m_max: int, degree_bounds=None, seed: int = 0,
                     samples: int | None = None, method: str = "auto", **kw) -> list[int]:
    """``[h(0), ..., h(m_max)]`` for a component or a direct-sum spec."""
    Q = spec.quiver
    theta = Q.vec(theta)
    if isinstance(spec, SumSpec):
        return schofield_hilbert(spec, theta, m_max, seed=seed, **kw)["h"]
    out = [1]
    for m in range(1, m_max + 1):
        D = None
        if degree_bounds is not None:
            D = degree_bounds(m) if callable(degree_bounds) else degree_bounds[m]
        out.append(restrict_dim(spec, theta, m, D, samples, seed, method)["dim"])
    return out


# spanning by determinantal semi-invariants

def _points_mod(spec, rng, count, prime, bound):
    pts = []
    for _ in range(count):
        M = spec.sample(rng, bound)
        pts.append(M.reduce_mod(prime) if M.field.p is None else M)
    return pts


def schofield_hilbert(spec, theta, m_max: int, seed: int = 0, prime: int = DEFAULT_PRIME,
                      bound: int = 5, per_dim_patience: int = 3, level_patience: int = 2,
                      max_level: int = 6, initial_points: int = 12):
    """Hilbert data from ranks of ``c^V o tau`` at sampled product-locus points.

    Values are computed modulo ``prime`` for integer sample points and
    reductions of integer ``V``, so every rank is a lower bound for the
    dimension over the rationals.  For each multiplier, dimension vectors of
    ``V`` are drawn from lift weights with growing clearing exponents, and
    the search stops after ``level_patience`` levels without a rank gain.
    """
    from .schofield import SchofieldEvaluator, _candidate_dims, _random_rep, double_quiver
    Q = spec.quiver
    theta = Q.vec(theta)
    dim = spec.dim
    if theta_eval(theta, dim) != 0:
        raise PreconditionError("theta(d) must vanish")
    rng = random.Random(seed)
    F = GF(prime)
    Dq = double_quiver(Q).quiver
    h = [1]
    details = []
    functions = {}
    points = _points_mod(spec, rng, initial_points, prime, bound)
    useful = {}  # m -> dimension vectors of V that raised the rank
    for m in range(1, m_max + 1):
        mtheta = [m * t for t in theta]
        values = []  # one row of values per function
        ech = SparseEchelon(F)
        rank = 0
        stale_levels = 0
        tried = set()
        level = 0
        useful[m] = []
        # sums of useful vectors from lower multipliers give products of functions
        sums = sorted({tuple(x + y for x, y in zip(c1, c2))
                       for k in range(1, m // 2 + 1) for c1 in useful[k] for c2 in useful[m - k]})
        while level <= max_level and (stale_levels < level_patience or rank == 0):
            before = rank
            cands = list(sums) + list(_candidate_dims(Q, mtheta, level)) if level == 0 else \
                _candidate_dims(Q, mtheta, level)
            for c in cands:
                if c in tried:
                    continue
                tried.add(c)
                misses = 0
                while misses < per_dim_patience:
                    V = _random_rep(Dq, c, rng, bound, F)
                    ev = SchofieldEvaluator(V, Q, dim, prime)
                    row = [ev(P) for P in points]
                    values.append((ev, row))
                    if ech.add({k: x for k, x in enumerate(row) if x}):
                        rank += 1
                        misses = 0
                        if c not in useful[m]:
                            useful[m].append(c)
                        if rank > len(points) - 4:
                            new = _points_mod(spec, rng, len(points), prime, bound)
                            _extend_points(values, points, new)
                            ech = SparseEchelon(F)
                            rank = sum(ech.add({k: x for k, x in enumerate(r) if x}) for _, r in values)
                    else:
                        misses += 1
            stale_levels = stale_levels + 1 if rank == before else 0
            level += 1
        h.append(rank)
        functions[m] = [ev for ev, _ in values]
        details.append({"m": m, "functions": len(values), "points": len(points), "levels": level})
    return {"h": h, "details": details, "prime": prime, "functions": functions}


def _extend_points(values, points, new):
    points.extend(new)
    for ev, row in values:
        row.extend(ev(P) for P in new)


def pullback_direct_sum(f: Poly, M2: Representation, d1) -> Poly:
    """``X -> f(X + M2)`` with ``X`` in the first diagonal block."""
    Q = M2.quiver
    d1 = Q.vec(d1)
    d2 = M2.dim
    F = f.field
    mapping = {}
    for v in f.variables():
        if v.kind != 0:
            continue
        a = Q.arrow[v.name]
        h1, t1 = d1[Q.hi(a)], d1[Q.ti(a)]
        i, j = v.row, v.col
        if i >= h1 + d2[Q.hi(a)] or j >= t1 + d2[Q.ti(a)]:
            raise ShapeError(f"variable {v} outside the block sum of dimensions")
        if i < h1 and j < t1:
            continue
        if i >= h1 and j >= t1:
            x = M2[a.id].data[i - h1][j - t1]
            if M2.field != F:
                x = reduce_mod_p(x, F.p) if F.p else x
            mapping[v] = Poly.const(F, F.wrap(x) if F.p else x)
        else:
            mapping[v] = Poly.zero(F)
    return substitute(f, mapping) if mapping else f
