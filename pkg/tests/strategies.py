"""Shared random generators for quivers, representations and group elements."""

from hypothesis import strategies as st

from quivmod import fixtures as fx
from quivmod.exactfield import QQ, Matrix
from quivmod.polyring import Poly, arrow_var
from quivmod.quivercore import GroupElement, Quiver, Representation


def random_quiver(rnd, n_max=3, arrows_max=4, acyclic=True):
    n = rnd.randint(1, n_max)
    verts = [str(i) for i in range(n)]
    arrows = []
    for k in range(rnd.randint(0, arrows_max)):
        i, j = rnd.randrange(n), rnd.randrange(n)
        if acyclic:
            if i == j:
                continue
            i, j = min(i, j), max(i, j)
        arrows.append((f"x{k}", verts[i], verts[j]))
    return Quiver(verts, arrows)


def random_rep(rnd, Q, dim=None, field=QQ, bound=3, d_max=2):
    dim = dim if dim is not None else [rnd.randint(0, d_max) for _ in Q.vertices]
    mats = {}
    for a in Q.arrows:
        r, c = dim[Q.hi(a)], dim[Q.ti(a)]
        if field.p is None:
            mats[a.id] = Matrix(field, [[rnd.randint(-bound, bound) for _ in range(c)] for _ in range(r)], c)
        else:
            mats[a.id] = Matrix(field, [[rnd.randrange(field.p) for _ in range(c)] for _ in range(r)], c)
    return Representation(Q, dim, mats, field)


def random_group(rnd, Q, dim, field=QQ, bound=3):
    blocks = []
    for x in dim:
        while True:
            if field.p is None:
                B = Matrix(field, [[rnd.randint(-bound, bound) for _ in range(x)] for _ in range(x)], x)
            else:
                B = Matrix(field, [[rnd.randrange(field.p) for _ in range(x)] for _ in range(x)], x)
            if x == 0 or B.det():
                break
        blocks.append(B)
    return GroupElement(Q, blocks)


def random_poly(rnd, Q, d, terms=4, max_deg=3):
    vars_ = [arrow_var(a.id, i, j) for a in Q.arrows
             for i in range(d[Q.hi(a)]) for j in range(d[Q.ti(a)])]
    f = Poly.zero(QQ)
    for _ in range(rnd.randint(1, terms)):
        t = Poly.const(QQ, rnd.randint(-4, 4))
        for _ in range(rnd.randint(0, max_deg)):
            t = t * Poly.var(QQ, rnd.choice(vars_))
        f = f + t
    return f


def compose_with_tau(F, Q, d):
    """Substitute the symbolic image of tau: connectors -> identity, hats -> arrows."""
    mapping = {}
    for v in F.variables():
        name = v.name
        if name.startswith("c[") and name.endswith("]") and name[2:-1] in Q.vindex:
            mapping[v] = Poly.const(QQ, int(v.row == v.col))
        elif name.endswith("^"):
            mapping[v] = Poly.var(QQ, arrow_var(name[:-1], v.row, v.col))
    return F.substitute(mapping)


def lift_cases(rnd, count):
    """Random polynomials on the two worked-example quivers."""
    cases = []
    quivers = [fx.wild_quiver(), fx.biserial_quiver()]
    for k in range(count):
        Q = quivers[k % 2]
        d = [rnd.randint(1, 2) for _ in Q.vertices]
        cases.append((Q, d, random_poly(rnd, Q, d)))
    return cases


seeds = st.integers(0, 10**6)

