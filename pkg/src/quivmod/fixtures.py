"""Ready-made quivers, relations and components for the two worked examples.

``wild``: vertices 1, 2, 3 with arrows ``a0..a3: 1 -> 2`` and
``b0..b3: 2 -> 3``, commutativity relations and ``a1 b2 = 0``.

``biserial``: arrows ``a: 1 -> 2``, ``b: 1 -> 3``, ``c: 2 -> 3`` and
``c': 3 -> 2`` with both two-cycles set to zero.
"""

from __future__ import annotations

from .exactfield import QQ
from .polyring import Poly, arrow_var, param
from .quivercore import Quiver, Relation, Representation
from .siring import ComponentSpec, Parametrization, SumSpec

THETA = (2, -1, -1)


def _t(i):
    return Poly.var(QQ, param(f"t{i}"))


def _x(aid, i=0, j=0):
    return Poly.var(QQ, arrow_var(aid, i, j))


# four arrows at each step

def wild_quiver() -> Quiver:
    return Quiver(["1", "2", "3"],
                  [(f"a{i}", "1", "2") for i in range(4)] + [(f"b{i}", "2", "3") for i in range(4)])


def wild_relations(Q: Quiver | None = None) -> list:
    Q = Q or wild_quiver()
    rels = [Relation([(1, [f"a{i}", f"b{j}"]), (-1, [f"a{j}", f"b{i}"])], Q)
            for i in range(4) for j in range(i + 1, 4)]
    rels.append(Relation([(1, ["a1", "b2"])], Q))
    return rels


def wild_rep(a, b, field=QQ) -> Representation:
    Q = wild_quiver()
    mats = {f"a{i}": [[a[i]]] for i in range(4)}
    mats.update({f"b{i}": [[b[i]]] for i in range(4)})
    return Representation(Q, (1, 1, 1), mats, field)


def wild_point(v, field=QQ) -> Representation:
    """The representation with ``a = b = v``."""
    return wild_rep(v, v, field)


def wild_semistable_predicate(a, b) -> bool:
    return any(a) and any(b)


def _wild_line_param(zero_index):
    """``a = v``, ``b = s v`` with ``v[zero_index] = 0``."""
    mats = {}
    k = 0
    vs = {}
    for i in range(4):
        if i == zero_index:
            vs[i] = Poly.zero(QQ)
        else:
            vs[i] = _t(k)
            k += 1
    s = _t(k)
    for i in range(4):
        mats[f"a{i}"] = [[vs[i]]]
        mats[f"b{i}"] = [[s * vs[i]]]
    return Parametrization(k + 1, mats)


def wild_components():
    """The components with ``a1 = 0`` and ``a2 = 0`` on the line ``a || b``."""
    Q = wild_quiver()
    R = wild_relations(Q)
    C1 = ComponentSpec(Q, R, (1, 1, 1), [_x("a1"), _x("b1")], [_wild_line_param(1)], "C1")
    C2 = ComponentSpec(Q, R, (1, 1, 1), [_x("a2"), _x("b2")], [_wild_line_param(2)], "C2")
    return C1, C2


def wild_ambient() -> ComponentSpec:
    """All of rep(A, (1,1,1)): union of four parametrized components."""
    Q = wild_quiver()
    R = wild_relations(Q)
    zero_a = Parametrization(4, {**{f"a{i}": [[0]] for i in range(4)},
                                 **{f"b{i}": [[_t(i)]] for i in range(4)}})
    zero_b = Parametrization(4, {**{f"a{i}": [[_t(i)]] for i in range(4)},
                                 **{f"b{i}": [[0]] for i in range(4)}})
    return ComponentSpec(Q, R, (1, 1, 1), [],
                         [zero_a, zero_b, _wild_line_param(1), _wild_line_param(2)], "rep")


# special biserial example

def biserial_quiver() -> Quiver:
    return Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "1", "3"), ("c", "2", "3"), ("c'", "3", "2")])


def biserial_relations(Q: Quiver | None = None) -> list:
    Q = Q or biserial_quiver()
    return [Relation([(1, ["c", "c'"])], Q), Relation([(1, ["c'", "c"])], Q)]


def biserial_rep(a, b, c, cp, field=QQ) -> Representation:
    return Representation(biserial_quiver(), (1, 1, 1),
                          {"a": [[a]], "b": [[b]], "c": [[c]], "c'": [[cp]]}, field)


def band(lam, field=QQ) -> Representation:
    """The (2,2,2) family with identity ``a``, ``b`` and nilpotent ``c``, ``c'``."""
    return Representation(biserial_quiver(), (2, 2, 2), {
        "a": [[1, 0], [0, 1]], "b": [[1, 0], [0, 1]],
        "c": [[0, 1], [0, 0]], "c'": [[0, lam], [0, 0]],
    }, field)


def biserial_components():
    Q = biserial_quiver()
    R = biserial_relations(Q)
    C1 = ComponentSpec(Q, R, (1, 1, 1), [_x("c")],
                       [Parametrization(3, {"a": [[_t(0)]], "b": [[_t(1)]], "c'": [[_t(2)]]})], "C1")
    C2 = ComponentSpec(Q, R, (1, 1, 1), [_x("c'")],
                       [Parametrization(3, {"a": [[_t(0)]], "b": [[_t(1)]], "c": [[_t(2)]]})], "C2")
    return C1, C2


def biserial_degree_bound(m: int) -> int:
    """Degree bound for weight ``m*theta`` at (1,1,1): products with ``cc'`` vanish."""
    return 3 * m


def sum_spec(parts, fixed=(), id="sum") -> SumSpec:
    return SumSpec(list(parts), list(fixed), id)
