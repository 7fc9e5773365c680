import random
from fractions import Fraction

import pytest
from hypothesis import given

from quivmod import fixtures as fx
from quivmod.errors import LiftError, ShapeError
from quivmod.exactfield import GF, QQ, Matrix
from quivmod.polyring import Poly, arrow_var, poly_eval
from quivmod.quivercore import (
    Quiver, Representation, act, chi_theta, direct_sum, euler_form, hom_dim,
)
from quivmod.schofield import (
    SchofieldEvaluator, block_sign, conn, domokos_lift, double_quiver, dxy_matrix, hat, hat_dim, lift_to_double,
    lift_weight, paths_count, schofield_semiinvariant, schofield_weight, semistable_witness, tau,
    tau_v, vertex_split, weight_to_dims,
)
from quivmod.siring import rep_point, si_space

from .strategies import (
    compose_with_tau, lift_cases, random_group, random_quiver, random_rep, seeds,
)

KRONECKER = Quiver(["1", "2"], [("a", "1", "2"), ("b", "1", "2")])


# structure

def test_double_quiver_shape():
    Q = fx.biserial_quiver()
    D = double_quiver(Q).quiver
    assert list(D.vertices) == ["1_0", "2_0", "3_0", "1_1", "2_1", "3_1"]
    assert D.is_acyclic()
    assert len(D.arrows) == Q.n + len(Q.arrows)
    assert hat_dim(Q, (1, 2, 3)) == (1, 2, 3, 1, 2, 3)


def test_tau_is_identity_on_connectors():
    M = fx.band(2)
    W = tau(M)
    for v in M.quiver.vertices:
        assert W[conn(v)] == Matrix.identity(QQ, 2)
    assert W[hat("c'")] == M["c'"]


def test_vertex_split_is_idempotent_on_names():
    Q = fx.biserial_quiver()
    S = vertex_split(Q, "2")
    assert S.renamed == {"a": "a^", "c": "c^", "c'": "c'^"}
    S2 = vertex_split(S.quiver, "1")
    assert S2.renamed["a^"] == "a^"
    M = fx.band(1)
    T = tau_v(M, "2", S)
    assert T[conn("2")] == Matrix.identity(QQ, 2)


def test_splitting_every_vertex_gives_the_double():
    Q = fx.biserial_quiver()
    cur = Q
    for v in Q.vertices:
        cur = vertex_split(cur, v).quiver
    D = double_quiver(Q).quiver
    assert sorted((a.id, a.tail, a.head) for a in cur.arrows) == \
        sorted((a.id, a.tail, a.head) for a in D.arrows)


def test_weight_examples():
    D = double_quiver(fx.biserial_quiver()).quiver
    c, f = weight_to_dims(D, (2, 0, 0, 0, -1, -1))
    assert c == (2, 0, 0, 2, 1, 1) and not any(f)
    assert schofield_weight(D, c) == (2, 0, 0, 0, -1, -1)


@given(seeds)
def test_weight_to_dims_round_trip(seed):
    rnd = random.Random(seed)
    Q = random_quiver(rnd, 4, 5)
    c = [rnd.randint(0, 3) for _ in Q.vertices]
    c2, f = weight_to_dims(Q, schofield_weight(Q, c))
    assert tuple(c2) == tuple(c) and not any(f)
    theta = [rnd.randint(-3, 3) for _ in Q.vertices]
    c, f = weight_to_dims(Q, theta)
    assert all(x == 0 or y == 0 for x, y in zip(c, f))
    # theta = <c, -> - <dim P_f, ->, and <dim P_y, e> = e(y)
    for k in range(Q.n):
        assert schofield_weight(Q, c)[k] - sum(
            f[y] * (paths_count(Q, y)[k] - sum(paths_count(Q, y)[Q.ti(b)] for b in Q.arrows if Q.hi(b) == k))
            for y in range(Q.n)) == theta[k]


def test_pairing_required():
    D = double_quiver(KRONECKER).quiver
    V = random_rep(random.Random(0), D, [1, 0, 0, 0])
    W = tau(random_rep(random.Random(1), KRONECKER, [1, 1]))
    with pytest.raises(ShapeError):
        schofield_semiinvariant(V, W)


# Schofield identities on random instances

def _instance(rnd):
    while True:
        Q = random_quiver(rnd, 3, 4)
        c = [rnd.randint(0, 2) for _ in Q.vertices]
        d = [rnd.randint(0, 3) for _ in Q.vertices]
        if sum(c) and sum(d) and euler_form(Q, c, d) == 0:
            return Q, c, d


def test_schofield_identities_property_suite():
    rnd = random.Random(2024)
    for _ in range(200):
        Q, c, d = _instance(rnd)
        V = random_rep(rnd, Q, c, bound=2)
        W = random_rep(rnd, Q, d, bound=2)
        g = random_group(rnd, Q, d, bound=2)
        val = schofield_semiinvariant(V, W)
        w = schofield_weight(Q, c)
        factor = Fraction(1)
        for y, b in enumerate(g.blocks):
            if w[y]:
                factor *= b.det() ** (-w[y])
        assert schofield_semiinvariant(V, act(g, W)) == factor * val
        assert (val == 0) == (hom_dim(V, W) > 0)
        c2 = [rnd.randint(0, 2) for _ in Q.vertices]
        if euler_form(Q, c2, d) == 0:
            V2 = random_rep(rnd, Q, c2, bound=2)
            # block-triangular determinant, up to the fixed sign of the basis reordering
            sign = block_sign(Q, [c, c2], [d])
            assert schofield_semiinvariant(direct_sum([V, V2]), W) == \
                sign * val * schofield_semiinvariant(V2, W)


def test_multiplicativity_in_the_second_argument():
    rnd = random.Random(77)
    hits = 0
    while hits < 60:
        Q, c, d = _instance(rnd)
        d2 = [rnd.randint(0, 2) for _ in Q.vertices]
        if euler_form(Q, c, d2) != 0:
            continue
        hits += 1
        V = random_rep(rnd, Q, c, bound=2)
        W, W2 = random_rep(rnd, Q, d, bound=2), random_rep(rnd, Q, d2, bound=2)
        assert schofield_semiinvariant(V, direct_sum([W, W2])) == \
            block_sign(Q, [c], [d, d2]) * schofield_semiinvariant(V, W) * schofield_semiinvariant(V, W2)


def test_block_sign_is_a_ratio_of_determinants():
    # the reordering sign is visible whenever both factors are nonzero
    rnd = random.Random(78)
    seen = set()
    for _ in range(400):
        Q, c, d = _instance(rnd)
        c2 = [rnd.randint(0, 2) for _ in Q.vertices]
        if euler_form(Q, c2, d) != 0:
            continue
        V, V2, W = (random_rep(rnd, Q, c, bound=3), random_rep(rnd, Q, c2, bound=3),
                    random_rep(rnd, Q, d, bound=3))
        prod = schofield_semiinvariant(V, W) * schofield_semiinvariant(V2, W)
        if prod:
            ratio = schofield_semiinvariant(direct_sum([V, V2]), W) / prod
            assert ratio == block_sign(Q, [c, c2], [d])
            seen.add(ratio)
    assert seen == {1, -1}


def test_block_sign_trivial_cases():
    Q = KRONECKER
    assert block_sign(Q, [(1, 1)], [(2, 2)]) == 1
    assert block_sign(Q, [(1, 1), (0, 0)], [(2, 2)]) == 1


@given(seeds)
def test_evaluator_matches_direct_determinant(seed):
    rnd = random.Random(seed)
    Q = fx.biserial_quiver()
    D = double_quiver(Q)
    V = random_rep(rnd, D.quiver, (2, 0, 0, 2, 1, 1), field=GF(101))
    ev = SchofieldEvaluator(V, Q, (1, 1, 1), 101)
    M = random_rep(rnd, Q, (1, 1, 1))
    direct = schofield_semiinvariant(V, tau(M.reduce_mod(101), D))
    assert ev(M) == int(direct)


# lifting

def test_domokos_lift_round_trip():
    rnd = random.Random(11)
    for Q, d, f in lift_cases(rnd, 50):
        v = rnd.choice(Q.vertices)
        g, S, need = domokos_lift(f, Q, d, v)
        assert compose_with_tau(g, Q, d) == f
        if need:
            with pytest.raises(LiftError):
                domokos_lift(f, Q, d, v, need - 1)
        g2, _, _ = domokos_lift(f, Q, d, v, need + 1)
        assert compose_with_tau(g2, Q, d) == f


def test_lift_to_double_round_trip():
    rnd = random.Random(12)
    for Q, d, f in lift_cases(rnd, 50):
        theta = [0] * Q.n
        g, w, used = lift_to_double(f, Q, d, theta)
        assert compose_with_tau(g, Q, d) == f
        assert w == lift_weight(Q, theta, used)


def test_lift_example():
    Q = fx.biserial_quiver()
    f = Poly.var(QQ, arrow_var("a", 0, 0)) * Poly.var(QQ, arrow_var("b", 0, 0))
    g, w, used = lift_to_double(f, Q, (1, 1, 1), fx.THETA)
    assert g == Poly.var(QQ, arrow_var("a^", 0, 0)) * Poly.var(QQ, arrow_var("b^", 0, 0))
    assert w == (2, 0, 0, 0, -1, -1)


def _transforms(F, Qh, dim, weight, rnd, trials=3):
    for _ in range(trials):
        W = random_rep(rnd, Qh, dim)
        g = random_group(rnd, Qh, dim)
        lhs = poly_eval(F, rep_point(act(g.inverse(), W)))
        if lhs != chi_theta(weight, g) * poly_eval(F, rep_point(W)):
            return False
    return True


@pytest.mark.parametrize("name", ["wild", "biserial"])
def test_lift_weight_bookkeeping(name):
    rnd = random.Random(5)
    if name == "wild":
        Q, R, D = fx.wild_quiver(), fx.wild_relations(), None
    else:
        Q, R, D = fx.biserial_quiver(), fx.biserial_relations(), 3
    d = (1, 1, 1)
    B = si_space(Q, R, d, fx.THETA, 1, D)
    Qh = double_quiver(Q).quiver
    for f in B.polys[:6]:
        n = [rnd.randint(0, 1) + k for k in (0, 1, 1)]
        for v in Q.vertices:
            g, S, need = domokos_lift(f, Q, d, v)
            k = need + rnd.randint(0, 1)
            g, S, _ = domokos_lift(f, Q, d, v, k)
            split_theta = {x: t for x, t in zip(Q.vertices, fx.THETA)}
            t_v = split_theta.pop(v)
            split_theta[v + "_0"] = t_v + k
            split_theta[v + "_1"] = -k
            weight = [split_theta[x] for x in S.quiver.vertices]
            sdim = [1] * S.quiver.n
            assert _transforms(g, S.quiver, sdim, weight, rnd)
        try:
            g, w, used = lift_to_double(f, Q, d, fx.THETA, n)
        except LiftError:
            continue
        assert all(w[i] == fx.THETA[i] + used[i] and w[Q.n + i] == -used[i] for i in range(Q.n))
        assert _transforms(g, Qh, hat_dim(Q, d), w, rnd)


# witnesses

def test_witness_certifies_semistable_point():
    M = fx.wild_point([1, 0, 0, 1])
    cert = semistable_witness(M, fx.THETA, seed=1)
    assert cert is not None
    V, m, val = cert
    assert val != 0
    assert schofield_semiinvariant(V, tau(M)) == val
    w = schofield_weight(V.quiver, V.dim)
    assert tuple(w[i] + w[3 + i] for i in range(3)) == tuple(m * t for t in fx.THETA)


def test_no_witness_for_unstable_point():
    M = fx.wild_rep([0, 0, 0, 0], [1, 0, 0, 0])
    assert semistable_witness(M, fx.THETA, trials=3) is None


def test_witness_zero_weight_on_support():
    M = Representation(KRONECKER, (1, 0), {})
    V, m, val = semistable_witness(M, (0, 5))
    assert V is None and m == 0 and val == 1


def test_dxy_matrix_shape():
    rnd = random.Random(4)
    Q = fx.wild_quiver()
    V = random_rep(rnd, Q, (1, 2, 0))
    W = random_rep(rnd, Q, (2, 1, 3))
    A = dxy_matrix(V, W)
    rows = sum(V.dim[Q.ti(a)] * W.dim[Q.hi(a)] for a in Q.arrows)
    cols = sum(x * y for x, y in zip(V.dim, W.dim))
    assert A.shape == (rows, cols)
    assert cols - rows == euler_form(Q, V.dim, W.dim)
