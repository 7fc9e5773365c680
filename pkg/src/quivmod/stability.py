"""King stability by exhaustive subrepresentation search over prime fields.

Subspaces are stored as reduced row echelon bases (rows are basis
vectors).  Rational inputs are reduced modulo a prime first; a
subrepresentation over the rationals reduces to one over GF(p) of the same
dimension vector, so semistability and stability verdicts found mod p
transfer to the rational representation.  Only GF(p)-rational subspaces
are searched.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field as dc_field

from . import _kernels
from .errors import CapExceededError, InconclusiveError, PreconditionError
from .exactfield import GF, Matrix
from .quivercore import (
    GroupElement, Representation, act, direct_sum, is_isomorphic, theta_eval,
)

__all__ = [
    "SubrepWitness",
    "Verdict",
    "subspace_count",
    "enumerate_subspaces",
    "enumerate_subreps",
    "is_semistable",
    "is_stable",
    "jh_factors",
    "polystabilize",
    "s_equivalent",
    "decompose_sample",
    "subrep",
    "quotient",
]

DEFAULT_PRIME = 101
DEFAULT_CAP = 10 ** 7


@dataclass(frozen=True)
class SubrepWitness:
    bases: tuple  # per vertex, tuple of RREF rows
    dim: tuple
    theta_value: int | None = None

    def total(self):
        return sum(self.dim)


@dataclass
class Verdict:
    value: bool | None
    reason: str
    witness: SubrepWitness | None = None
    method: str = "enumeration"
    prime: int | None = None
    caveats: list = dc_field(default_factory=list)

    def __bool__(self):
        return bool(self.value)


def subspace_count(n: int, p: int) -> int:
    """Number of subspaces of GF(p)^n."""
    total = 0
    for k in range(n + 1):
        num = den = 1
        for i in range(k):
            num *= p ** (n - i) - 1
            den *= p ** (i + 1) - 1
        total += num // den
    return total


def enumerate_subspaces(n: int, p: int, k: int | None = None):
    """All subspaces of GF(p)^n as RREF row tuples, ordered by dimension."""
    dims = range(n + 1) if k is None else [k]
    for kk in dims:
        for pivots in itertools.combinations(range(n), kk):
            free = [(r, c) for r, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots]
            for vals in itertools.product(range(p), repeat=len(free)):
                rows = [[0] * n for _ in range(kk)]
                for r, pc in enumerate(pivots):
                    rows[r][pc] = 1
                for (r, c), v in zip(free, vals):
                    rows[r][c] = v
                yield tuple(tuple(r) for r in rows)


def _as_fp(M: Representation, p: int | None):
    if M.field.p is not None:
        return M, M.field.p
    p = p or DEFAULT_PRIME
    return M.reduce_mod(p), p


def _contained(vectors, basis, pivots, p):
    for v in vectors:
        if any(_kernels.reduce_by_rref(list(v), [list(r) for r in basis], pivots, p)):
            return False
    return True


def _pivots(basis):
    return [next(j for j, x in enumerate(r) if x) for r in basis]


def enumerate_subreps(M: Representation, cap: int = DEFAULT_CAP, reverse: bool = False):
    """All subrepresentations of ``M`` over GF(p), deduplicated.

    Backtracks over vertices, pruning as soon as an arrow between two
    chosen subspaces fails the closure test.
    """
    if M.field.p is None:
        raise PreconditionError("enumerate_subreps needs a prime-field representation")
    p = M.field.p
    Q = M.quiver
    total = 1
    for x in M.dim:
        total *= subspace_count(x, p)
    if total > cap:
        raise CapExceededError(f"{total} subspace tuples exceed the cap {cap}; use a witness instead")
    order = list(range(Q.n))
    images = {}
    for a in Q.arrows:
        images[a.id] = [list(col) for col in zip(*M[a.id].data)] if M[a.id].nrows else \
            [[] for _ in range(M[a.id].ncols)]
    chosen = [None] * Q.n
    out = []
    candidates = [list(enumerate_subspaces(x, p)) for x in M.dim]
    if reverse:
        candidates = [c[::-1] for c in candidates]

    def ok(x):
        for a in Q.arrows:
            t, h = Q.ti(a), Q.hi(a)
            if x not in (t, h) or chosen[t] is None or chosen[h] is None:
                continue
            if not chosen[t]:
                continue
            # image of each basis vector of S(t)
            Ma = M[a.id].data
            vecs = [[sum(Ma[i][j] * b[j] for j in range(len(b))) % p for i in range(len(Ma))]
                    for b in chosen[t]]
            if not _contained(vecs, chosen[h], _pivots(chosen[h]), p):
                return False
        return True

    def rec(k):
        if k == len(order):
            dim = tuple(len(chosen[x]) for x in range(Q.n))
            out.append(SubrepWitness(tuple(chosen), dim))
            return
        x = order[k]
        for S in candidates[x]:
            chosen[x] = S
            if ok(x):
                rec(k + 1)
        chosen[x] = None

    rec(0)
    return out


def _with_theta(ws, theta):
    return [SubrepWitness(w.bases, w.dim, theta_eval(theta, w.dim)) for w in ws]


def is_semistable(M: Representation, theta, prime: int | None = None, cap: int = DEFAULT_CAP,
                  witness_trials: int = 20, seed: int = 0) -> Verdict:
    Q = M.quiver
    theta = Q.vec(theta)
    caveats = []
    if theta_eval(theta, M.dim) != 0:
        return Verdict(False, "theta(dim M) != 0", None, "definition")
    try:
        Mp, p = _as_fp(M, prime)
        if M.field.p is None:
            caveats.append(f"verdict from the reduction mod {p}; a positive answer transfers to the rationals")
        subs = enumerate_subreps(Mp, cap)
    except (CapExceededError, ZeroDivisionError) as exc:
        if M.field.p is not None:
            raise
        from .schofield import semistable_witness
        cert = semistable_witness(M, theta, trials=witness_trials, seed=seed)
        if cert is not None:
            return Verdict(True, "nonvanishing determinantal semi-invariant", None, "witness",
                           caveats=[str(exc)])
        raise InconclusiveError(f"enumeration infeasible ({exc}) and no witness found")
    for w in _with_theta(subs, theta):
        if w.theta_value > 0:
            return Verdict(False, "destabilizing subrepresentation", w, "enumeration", p, caveats)
    return Verdict(True, "all subrepresentations have theta <= 0", None, "enumeration", p, caveats)


def is_stable(M: Representation, theta, prime: int | None = None, cap: int = DEFAULT_CAP) -> Verdict:
    Q = M.quiver
    theta = Q.vec(theta)
    if sum(M.dim) == 0:
        return Verdict(False, "the zero representation is not stable", None, "definition")
    if theta_eval(theta, M.dim) != 0:
        return Verdict(False, "theta(dim M) != 0", None, "definition")
    Mp, p = _as_fp(M, prime)
    caveats = ["only GF(p)-rational subspaces are searched"]
    full = M.dim
    for w in _with_theta(enumerate_subreps(Mp, cap), theta):
        if w.total() == 0 or w.dim == full:
            continue
        if w.theta_value >= 0:
            return Verdict(False, "proper subrepresentation with theta >= 0", w, "enumeration", p, caveats)
    return Verdict(True, "all proper nonzero subrepresentations have theta < 0", None,
                   "enumeration", p, caveats)


def subrep(M: Representation, bases) -> Representation:
    """The subrepresentation on the given RREF bases, in those bases."""
    Q = M.quiver
    p = M.field.p
    F = M.field
    mats = {}
    for a in Q.arrows:
        t, h = Q.ti(a), Q.hi(a)
        Bt, Bh = bases[t], bases[h]
        piv = _pivots(Bh)
        Ma = M[a.id].data
        cols = []
        for b in Bt:
            img = [sum(Ma[i][j] * b[j] for j in range(len(b))) % p for i in range(len(Ma))]
            cols.append([img[c] for c in piv])
        rows = [[cols[j][i] for j in range(len(Bt))] for i in range(len(Bh))]
        mats[a.id] = Matrix._from_raw(F, rows, len(Bh), len(Bt))
    return Representation(Q, [len(b) for b in bases], mats, F)


def quotient(M: Representation, bases) -> Representation:
    """``M / S`` in the basis of unit vectors at the non-pivot columns."""
    Q = M.quiver
    p = M.field.p
    F = M.field
    keep = []
    for x in range(Q.n):
        piv = set(_pivots(bases[x]))
        keep.append([c for c in range(M.dim[x]) if c not in piv])
    mats = {}
    for a in Q.arrows:
        t, h = Q.ti(a), Q.hi(a)
        Bh = [list(r) for r in bases[h]]
        ph = _pivots(bases[h])
        Ma = M[a.id].data
        cols = []
        for c in keep[t]:
            img = [Ma[i][c] % p for i in range(len(Ma))]
            red = _kernels.reduce_by_rref(img, Bh, ph, p) if Bh else img
            cols.append([red[r] for r in keep[h]])
        rows = [[cols[j][i] for j in range(len(keep[t]))] for i in range(len(keep[h]))]
        mats[a.id] = Matrix._from_raw(F, rows, len(keep[h]), len(keep[t]))
    return Representation(Q, [len(k) for k in keep], mats, F)


def _stable_factors(M, theta, cap, reverse):
    if sum(M.dim) == 0:
        return []
    subs = enumerate_subreps(M, cap, reverse=reverse)
    zero = [w for w in subs if w.total() > 0 and theta_eval(theta, w.dim) == 0]
    zero.sort(key=lambda w: w.total())
    S = zero[0]
    if S.dim == M.dim:
        return [M]
    return [subrep(M, S.bases)] + _stable_factors(quotient(M, S.bases), theta, cap, reverse)


def _group(factors, seed=0):
    groups = []
    for f in factors:
        for g in groups:
            if g[0].dim == f.dim and is_isomorphic(g[0], f, seed=seed) is not None:
                g[1] += 1
                break
        else:
            groups.append([f, 1])
    return [(g[0], g[1]) for g in groups]


def jh_factors(M: Representation, theta, prime: int | None = None, cap: int = DEFAULT_CAP,
               reverse: bool = False):
    """theta-stable composition factors with multiplicities.

    Repeatedly splits off a nonzero theta-zero subrepresentation of least
    total dimension (necessarily stable) and continues with the quotient.
    """
    Q = M.quiver
    theta = Q.vec(theta)
    Mp, p = _as_fp(M, prime)
    v = is_semistable(Mp, theta, cap=cap)
    if not v:
        raise PreconditionError(f"representation is not semistable: {v.reason}")
    return _group(_stable_factors(Mp, theta, cap, reverse))


def polystabilize(M: Representation, theta, prime: int | None = None, cap: int = DEFAULT_CAP):
    factors = jh_factors(M, theta, prime, cap)
    reps = [f for f, mult in factors for _ in range(mult)]
    return direct_sum(reps, M.quiver)


def s_equivalent(M: Representation, N: Representation, theta, prime: int | None = None,
                 cap: int = DEFAULT_CAP) -> bool:
    if M.dim != N.dim:
        return False
    fM = jh_factors(M, theta, prime, cap)
    fN = jh_factors(N, theta, prime, cap)
    if sorted(m for _, m in fM) != sorted(m for _, m in fN):
        return False
    used = set()
    for f, mult in fM:
        for k, (g, mult2) in enumerate(fN):
            if k in used or mult != mult2 or f.dim != g.dim:
                continue
            if is_isomorphic(f, g) is not None:
                used.add(k)
                break
        else:
            return False
    return True


def random_group_element(Q, dim, field, rng):
    blocks = []
    for x in dim:
        while True:
            if field.p is None:
                B = Matrix(field, [[rng.randint(-3, 3) for _ in range(x)] for _ in range(x)], x)
            else:
                B = Matrix(field, [[rng.randrange(field.p) for _ in range(x)] for _ in range(x)], x)
            if x == 0 or B.det():
                break
        blocks.append(B)
    return GroupElement(Q, blocks, check=False)


def decompose_sample(candidates, ambient, theta, samples: int = 5, prime: int = DEFAULT_PRIME,
                     seed: int = 0, cap: int = DEFAULT_CAP, bound: int = 5):
    """Stable factor pattern of general points of ``ambient``.

    Returns ``{"pattern": [(id, multiplicity), ...], "agreement": k,
    "samples": n, "disagreements": [...], "unclassified": [...]}``.
    """
    Q = ambient.quiver
    theta = Q.vec(theta)
    rng = random.Random(seed)
    F = GF(prime)
    patterns = []
    unclassified = []
    for s in range(samples):
        M = ambient.sample(rng, bound, general=True).reduce_mod(prime)
        M = act(random_group_element(Q, M.dim, F, rng), M)
        if not is_semistable(M, theta, cap=cap):
            patterns.append(("not semistable",))
            continue
        counts = Counter()
        ok = True
        for f, mult in jh_factors(M, theta, cap=cap):
            hits = [C.id for C in candidates if C.contains(f)]
            if len(hits) != 1:
                unclassified.append({"sample": s, "factor_dim": f.dim, "matches": hits})
                ok = False
                break
            counts[hits[0]] += mult
        patterns.append(tuple(sorted(counts.items())) if ok else ("unclassified",))
    tally = Counter(patterns)
    best, agreement = tally.most_common(1)[0]
    return {
        "pattern": [list(x) for x in best] if best and isinstance(best[0], tuple) else list(best),
        "agreement": agreement,
        "samples": samples,
        "disagreements": [list(p) for p in tally if p != best],
        "unclassified": unclassified,
    }
