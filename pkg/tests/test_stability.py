import itertools
import random
from collections import Counter

import pytest
from hypothesis import given

from quivmod import fixtures as fx
from quivmod.errors import CapExceededError, PreconditionError
from quivmod.exactfield import GF, Matrix
from quivmod.quivercore import Representation, act, direct_sum, hom_dim, theta_eval
from quivmod.stability import (
    decompose_sample, enumerate_subreps, enumerate_subspaces, is_semistable, is_stable,
    jh_factors, polystabilize, quotient, s_equivalent, subrep, subspace_count,
)

from .strategies import random_group, random_quiver, random_rep, seeds

F2, F3, F5 = GF(2), GF(3), GF(5)
THETA = fx.THETA


def _spans(n, p):
    """Every subspace of GF(p)^n as a frozenset of vectors, by closing subsets."""
    vecs = list(itertools.product(range(p), repeat=n))
    found = set()
    for k in range(n + 1):
        for gens in itertools.combinations(vecs, k):
            span = {tuple([0] * n)}
            for g in gens:
                span = {tuple((s[i] + c * g[i]) % p for i in range(n)) for s in span for c in range(p)}
            found.add(frozenset(span))
    return found


def brute_subreps(M):
    p = M.field.p
    Q = M.quiver
    per_vertex = [_spans(d, p) for d in M.dim]
    out = []
    for choice in itertools.product(*per_vertex):
        ok = True
        for a in Q.arrows:
            A = M[a.id].data
            for v in choice[Q.ti(a)]:
                img = tuple(sum(A[i][j] * v[j] for j in range(len(v))) % p for i in range(len(A)))
                if img not in choice[Q.hi(a)]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(choice)
    return out


def dims_of(subs):
    return Counter(w.dim for w in subs)


def test_subspace_count_small():
    assert [subspace_count(n, 2) for n in range(4)] == [1, 2, 5, 16]
    assert subspace_count(2, 3) == 6


@pytest.mark.parametrize("n,p", [(0, 2), (1, 5), (2, 2), (2, 3), (3, 2)])
def test_enumerate_subspaces_against_closure(n, p):
    assert len(list(enumerate_subspaces(n, p))) == subspace_count(n, p) == len(_spans(n, p))


def test_string_subreps_over_f2():
    M = fx.biserial_rep(1, 1, 1, 0, F2)
    assert sorted(w.dim for w in enumerate_subreps(M)) == [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1)]


@given(seeds)
def test_enumeration_matches_brute_force(seed):
    rnd = random.Random(seed)
    Q = random_quiver(rnd, 3, 3)
    M = random_rep(rnd, Q, field=F2, d_max=2)
    subs = enumerate_subreps(M)
    brute = brute_subreps(M)
    assert len(subs) == len(brute)
    assert dims_of(subs) == Counter(tuple(len(s).bit_length() - 1 for s in c) for c in brute)


def test_zero_rep_has_only_zero_subrep():
    Q = fx.biserial_quiver()
    Z = Representation.zero(Q, (0, 0, 0), F3)
    assert [w.dim for w in enumerate_subreps(Z)] == [(0, 0, 0)]


def test_doubling_adds_subreps():
    M = fx.biserial_rep(1, 2, 1, 0, F3)
    assert len(enumerate_subreps(direct_sum([M, M]))) > len(enumerate_subreps(M))


def test_cap_is_enforced():
    M = fx.band(1).reduce_mod(5)
    with pytest.raises(CapExceededError):
        enumerate_subreps(M, cap=10)


def test_rational_input_is_refused():
    with pytest.raises(PreconditionError):
        enumerate_subreps(fx.biserial_rep(1, 1, 0, 1))


@pytest.mark.parametrize("rep,stable", [
    ((1, 1, 1, 0), True),
    ((1, 1, 0, 1), True),
    ((0, 1, 0, 1), True),
    ((1, 0, 1, 0), True),
    ((1, 1, 0, 0), True),
])
def test_biserial_verdicts(rep, stable):
    M = fx.biserial_rep(*rep)
    assert is_semistable(M, THETA).value
    assert is_stable(M, THETA).value is stable


def test_sum_of_stables_is_strictly_semistable():
    M = direct_sum([fx.biserial_rep(1, 1, 1, 0), fx.biserial_rep(1, 1, 0, 1)])
    assert is_semistable(M, THETA).value
    v = is_stable(M, THETA)
    assert v.value is False and theta_eval(THETA, v.witness.dim) == 0


def test_destabilizing_witness():
    M = fx.biserial_rep(0, 1, 1, 0)
    v = is_semistable(M, THETA)
    assert v.value is False
    assert v.witness.dim == (1, 0, 1) and v.witness.theta_value > 0


def test_wrong_total_weight():
    M = Representation.zero(fx.biserial_quiver(), (1, 0, 0))
    assert is_semistable(M, THETA).value is False
    assert is_stable(M, THETA).value is False


def test_zero_rep_is_semistable_not_stable():
    Z = Representation.zero(fx.biserial_quiver(), (0, 0, 0))
    assert is_semistable(Z, THETA).value
    assert not is_stable(Z, THETA).value


def test_rational_verdict_carries_caveat():
    v = is_semistable(fx.biserial_rep(1, 1, 1, 0), THETA)
    assert v.prime == 101 and v.caveats


def test_wild_census_small():
    amb = fx.wild_ambient()
    rnd = random.Random(3)
    for _ in range(15):
        M = amb.sample(rnd, 3)
        a = [M[f"a{i}"].data[0][0] for i in range(4)]
        b = [M[f"b{i}"].data[0][0] for i in range(4)]
        assert is_semistable(M, THETA).value == fx.wild_semistable_predicate(a, b)


@given(seeds)
def test_stable_reps_are_bricks(seed):
    rnd = random.Random(seed)
    M = random_rep(rnd, fx.biserial_quiver(), (1, 1, 1), field=F5)
    M = Representation(M.quiver, M.dim, {**M.matrices, "c'": Matrix(F5, [[0]], 1)}, F5)
    if is_stable(M, THETA).value:
        assert hom_dim(M, M) == 1


def test_band_factors():
    B = fx.band(2).reduce_mod(5)
    factors = jh_factors(B, THETA)
    assert sum(k for _, k in factors) == 2
    for f, _ in factors:
        assert theta_eval(THETA, f.dim) == 0
        assert is_stable(f, THETA).value


@pytest.mark.parametrize("lam", [1, 2, 3])
def test_jh_is_independent_of_search_order_and_base_change(lam):
    B = fx.band(lam).reduce_mod(5)
    plain = jh_factors(B, THETA)
    rev = jh_factors(B, THETA, reverse=True)
    assert sorted((f.dim, k) for f, k in plain) == sorted((f.dim, k) for f, k in rev)
    g = random_group(random.Random(lam), B.quiver, B.dim, field=F5)
    assert s_equivalent(B, act(g, B), THETA)


def test_s_equivalence_is_an_equivalence():
    reps = [fx.band(lam).reduce_mod(5) for lam in (1, 2, 3)]
    reps.append(direct_sum([fx.biserial_rep(1, 1, 1, 0, F5), fx.biserial_rep(1, 1, 0, 1, F5)]))
    rel = [[s_equivalent(x, y, THETA) for y in reps] for x in reps]
    n = len(reps)
    for i in range(n):
        assert rel[i][i]
        for j in range(n):
            assert rel[i][j] == rel[j][i]
            for k in range(n):
                if rel[i][j] and rel[j][k]:
                    assert rel[i][k]


def test_polystable_representative():
    B = fx.band(1).reduce_mod(5)
    P = polystabilize(B, THETA)
    assert P.dim == B.dim
    assert s_equivalent(P, B, THETA)
    assert jh_factors(P, THETA) and sum(k for _, k in jh_factors(P, THETA)) == 2


def test_jh_refuses_unstable():
    with pytest.raises(PreconditionError):
        jh_factors(fx.biserial_rep(0, 1, 1, 0, F5), THETA)


def test_different_factors_are_not_s_equivalent():
    x = direct_sum([fx.biserial_rep(1, 1, 1, 0, F5)] * 2)
    y = direct_sum([fx.biserial_rep(1, 1, 0, 1, F5)] * 2)
    assert not s_equivalent(x, y, THETA)


def test_subrep_and_quotient_dimensions():
    M = fx.band(1).reduce_mod(5)
    for w in enumerate_subreps(M):
        S = subrep(M, w.bases)
        R = quotient(M, w.bases)
        assert S.dim == w.dim
        assert tuple(a + b for a, b in zip(S.dim, R.dim)) == M.dim


def test_decompose_sample_patterns():
    C1, C2 = fx.biserial_components()
    single = decompose_sample([C1, C2], C1, THETA, 3, 101, 0)
    assert single["pattern"] == [["C1", 1]] and single["agreement"] == 3
    double = decompose_sample([C1, C2], fx.sum_spec([(C1, 2)]), THETA, 3, 101, 0)
    assert double["pattern"] == [["C1", 2]] and not double["unclassified"]
    mixed = decompose_sample([C1, C2], fx.sum_spec([(C1, 1), (C2, 1)]), THETA, 3, 101, 0)
    assert mixed["pattern"] == [["C1", 1], ["C2", 1]]
    assert not mixed["unclassified"]
