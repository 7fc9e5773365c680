"""Verification of moduli decompositions on concrete inputs.

Two comparisons are offered.  Removing an orbit-closure summand should not
change the Hilbert data of the moduli space, and the Hilbert data of a
direct-sum component is bounded above by that of the matching product of
symmetric powers, with equality expected in good cases.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field
from math import comb

from . import fixtures as fx
from .errors import PreconditionError
from .exactfield import GF, SparseEchelon
from .quivercore import direct_sum, is_isomorphic, theta_eval
from .siring import ComponentSpec, SumSpec, hilbert_function, restrict_dim, schofield_hilbert, si_space
from .stability import (
    decompose_sample, is_semistable, is_stable, jh_factors, polystabilize, s_equivalent,
)

__all__ = [
    "VerificationReport",
    "product_side_hilbert",
    "normalize_theta",
    "verify_orbit_removal",
    "verify_product_decomposition",
    "example_fixtures",
    "EXIT_OK",
    "EXIT_PSI",
    "EXIT_INCONCLUSIVE",
    "EXIT_VIOLATION",
]

EXIT_OK = 0
EXIT_PSI = 2
EXIT_INCONCLUSIVE = 3
EXIT_VIOLATION = 4

CONSISTENT = "consistent-with-isomorphism"
PSI = "psi-not-isomorphism"
VIOLATION = "INVARIANT VIOLATION"


@dataclass
class VerificationReport:
    kind: str
    rows: list = dc_field(default_factory=list)
    metadata: dict = dc_field(default_factory=dict)
    conclusion: str = CONSISTENT

    def add(self, m, left, right, verdict, **extra):
        self.rows.append({"m": m, "left": left, "right": right, "verdict": verdict, **extra})

    def finish(self):
        verdicts = {r["verdict"] for r in self.rows}
        if "violation" in verdicts:
            self.conclusion = VIOLATION
        elif "strict-inequality" in verdicts:
            self.conclusion = PSI
        else:
            self.conclusion = CONSISTENT
        return self

    @property
    def exit_code(self) -> int:
        return {CONSISTENT: EXIT_OK, PSI: EXIT_PSI, VIOLATION: EXIT_VIOLATION}[self.conclusion]

    def to_json(self):
        return {"kind": self.kind, "rows": self.rows, "metadata": self.metadata,
                "conclusion": self.conclusion}

    def table(self) -> str:
        extra = [k for k in (self.rows[0] if self.rows else {}) if k not in ("m", "left", "right", "verdict")]
        head = ["m", "left", "right", "verdict"] + extra
        lines = [" | ".join(head)]
        for r in self.rows:
            lines.append(" | ".join(str(r.get(k, "")) for k in head))
        lines.append(f"conclusion: {self.conclusion}")
        return "\n".join(lines)


def product_side_hilbert(hs, mults) -> list[int]:
    """``H'(m) = prod_i binom(h_i(m) + m_i - 1, m_i)``."""
    hs = [list(h) for h in hs]
    if len(hs) != len(mults):
        raise ValueError("one multiplicity per Hilbert array is required")
    if not hs:
        return []
    n = len(hs[0])
    if any(len(h) != n for h in hs):
        raise ValueError("Hilbert arrays of different lengths")
    out = []
    for m in range(n):
        v = 1
        for h, k in zip(hs, mults):
            v *= comb(h[m] + k - 1, k) if k else 1
        out.append(v)
    return out


def normalize_theta(theta):
    theta = tuple(theta)
    return tuple(2 * t for t in theta) if sum(theta) % 2 else theta


def _rank_mod(rows, prime):
    ech = SparseEchelon(GF(prime))
    return sum(ech.add({k: x for k, x in enumerate(r) if x}) for r in rows)


def verify_orbit_removal(C: SumSpec, C1: ComponentSpec, M2, theta, m_max: int = 3, seed: int = 0,
                         degree_bounds=None, prime: int = 101, pullback_points: int = 24):
    """Compare Hilbert data of ``closure(C1 + orbit(M2))`` with that of ``C1``.

    Left: ranks of determinantal semi-invariants on the product locus.
    Right: Hilbert function of ``C1``.  The pullback check evaluates the
    left-hand functions at ``X + M2`` for fresh samples ``X`` of ``C1``.
    """
    Q = C1.quiver
    theta = Q.vec(theta)
    if theta_eval(theta, M2.dim) != 0:
        raise PreconditionError("theta(dim M2) must vanish")
    if sum(M2.dim) and not is_semistable(M2, theta, prime):
        raise PreconditionError("M2 is not theta-semistable")
    t0 = time.time()
    report = VerificationReport("orbit-removal", metadata={"seed": seed, "m_max": m_max,
                                                          "theta": list(theta)})
    right = hilbert_function(C1, theta, m_max, degree_bounds, seed)
    if sum(M2.dim) == 0:
        for m in range(m_max + 1):
            report.add(m, right[m], right[m], "equal", pullback_rank=right[m])
        report.metadata["seconds"] = round(time.time() - t0, 3)
        return report.finish()
    res = schofield_hilbert(C, theta, m_max, seed=seed)
    left = res["h"]
    rng = random.Random(seed + 1)
    report.add(0, 1, 1, "equal", pullback_rank=1)
    for m in range(1, m_max + 1):
        fns = res["functions"][m]
        pts = [direct_sum([C1.sample(rng), M2]).reduce_mod(res["prime"])
               for _ in range(max(pullback_points, 2 * right[m] + 4))]
        pb = _rank_mod([[f(P) for P in pts] for f in fns], res["prime"])
        ok = left[m] == right[m] and pb == right[m]
        report.add(m, left[m], right[m], "equal" if ok else "violation", pullback_rank=pb)
    report.metadata.update({"prime": res["prime"], "details": res["details"],
                            "seconds": round(time.time() - t0, 3)})
    return report.finish()


def verify_product_decomposition(C: SumSpec, theta, m_max: int = 3, seed: int = 0,
                                 degree_bounds=None, prime: int = 101, stable_samples: int = 5):
    """Compare ``h_C`` with the product of symmetric powers of the factors."""
    Q = C.quiver
    theta0 = Q.vec(theta)
    theta = normalize_theta(theta0)
    t0 = time.time()
    rng = random.Random(seed)
    for comp, _ in C.parts:
        if not any(is_stable(comp.sample(rng, general=True).reduce_mod(prime), theta, prime)
                   for _ in range(stable_samples)):
            raise PreconditionError(f"no stable point found on {comp.id!r}; it may be an orbit closure")
    hs = [hilbert_function(comp, theta, m_max, degree_bounds, seed) for comp, _ in C.parts]
    mults = [k for _, k in C.parts]
    Hp = product_side_hilbert(hs, mults)
    res = schofield_hilbert(C, theta, m_max, seed=seed)
    hC = res["h"]
    report = VerificationReport("product-decomposition", metadata={
        "seed": seed, "m_max": m_max, "theta": list(theta), "theta_input": list(theta0),
        "components": {comp.id: h for (comp, _), h in zip(C.parts, hs)},
        "multiplicities": mults, "prime": res["prime"], "details": res["details"],
    })
    for m in range(m_max + 1):
        if Hp[m] == hC[m]:
            verdict = "equal"
        elif Hp[m] > hC[m]:
            verdict = "strict-inequality"
        else:
            verdict = "violation"
        report.add(m, hC[m], Hp[m], verdict)
    report.metadata["seconds"] = round(time.time() - t0, 3)
    return report.finish()


# worked examples

def _check(results, name, passed, detail=None):
    results.append({"check": name, "passed": bool(passed), "detail": detail})


def example_fixtures(name: str, seed: int = 0, prime: int = 101, quick: bool = False) -> dict:
    """Run the full pipeline on one of the worked examples."""
    if name == "wild":
        return _example_wild(seed, prime, quick)
    if name == "biserial":
        return _example_biserial(seed, prime, quick)
    raise ValueError(f"unknown example {name!r}")


def wild_census(count: int = 50, seed: int = 0, prime: int = 101, bound: int = 3):
    """Seeded representations with entries in ``[-bound, bound]`` and verdict agreement."""
    amb = fx.wild_ambient()
    rng = random.Random(seed)
    mismatches = []
    for _ in range(count):
        M = amb.sample(rng, bound)
        a = [M[f"a{i}"].data[0][0] for i in range(4)]
        b = [M[f"b{i}"].data[0][0] for i in range(4)]
        expect = fx.wild_semistable_predicate(a, b)
        ss = is_semistable(M, fx.THETA, prime).value
        st = is_stable(M, fx.THETA, prime).value
        if ss != expect or st != expect:
            mismatches.append({"a": [str(x) for x in a], "b": [str(x) for x in b],
                               "semistable": ss, "stable": st, "expected": expect})
    return mismatches


def _example_wild(seed, prime, quick):
    out = []
    Q = fx.wild_quiver()
    R = fx.wild_relations(Q)
    mism = wild_census(50, seed, prime)
    _check(out, "stability census matches the predicate", not mism, {"mismatches": mism})

    B = si_space(Q, R, (1, 1, 1), fx.THETA, 1)
    amb = fx.wild_ambient()
    samp = restrict_dim(amb, fx.THETA, 1, seed=seed, method="sample")
    _check(out, "weight space at m=1", len(B) == 16 and samp["dim"] == 16,
           {"transvection": len(B), "sampling": samp["dim"]})
    if not quick:
        h = hilbert_function(amb, fx.THETA, 2, seed=seed, method="ideal")
        _check(out, "ambient Hilbert data", h == [1, 16, 49], {"h": h})

    C1, C2 = fx.wild_components()
    h1 = hilbert_function(C1, fx.THETA, 2, seed=seed)
    h2 = hilbert_function(C2, fx.THETA, 2, seed=seed)
    _check(out, "component Hilbert data", h1 == h2 == [1, 10, 28], {"C1": h1, "C2": h2})

    p, q = [1, 0, 0, 1], [1, 0, 0, 2]
    Rp, Rq = fx.wild_point(p), fx.wild_point(q)
    stable = all(is_stable(X, fx.THETA, prime) for X in (Rp, Rq))
    inter = all(C.contains(X) for C in (C1, C2) for X in (Rp, Rq))
    g = is_isomorphic(direct_sum([Rp, Rq]), direct_sum([Rq, Rp]), seed=seed)
    _check(out, "swapped sums of stable points are isomorphic", stable and inter and g is not None,
           {"stable": stable, "in_both_components": inter})

    report = verify_product_decomposition(fx.sum_spec([(C1, 1), (C2, 1)]), fx.THETA, 1, seed, prime=prime)
    _check(out, "graded injectivity on the sum of the two components",
           report.conclusion != VIOLATION, report.to_json())
    return {"example": "wild", "checks": out, "passed": all(c["passed"] for c in out)}


def _example_biserial(seed, prime, quick):
    out = []
    Q = fx.biserial_quiver()
    R = fx.biserial_relations(Q)
    bd = fx.biserial_degree_bound
    B = si_space(Q, R, (1, 1, 1), fx.THETA, 1, bd(1))
    _check(out, "ambient weight space at m=1", [str(f) for f in B.polys] == [
        "1*a[0,0]*b[0,0]", "1*a[0,0]^2*c[0,0]", "1*b[0,0]^2*c'[0,0]"], [str(f) for f in B.polys])

    C1, C2 = fx.biserial_components()
    m_max = 3 if quick else 4
    h1 = hilbert_function(C1, fx.THETA, m_max, bd, seed)
    h2 = hilbert_function(C2, fx.THETA, m_max, bd, seed)
    expect = list(range(1, m_max + 2))
    _check(out, "component Hilbert data", h1 == h2 == expect, {"C1": h1, "C2": h2})

    bands = [fx.band(lam).reduce_mod(5) for lam in (1, 2, 3)]
    pairs = all(s_equivalent(x, y, fx.THETA) for i, x in enumerate(bands) for y in bands[i + 1:])
    factors = jh_factors(bands[0], fx.THETA)
    P = polystabilize(bands[0], fx.THETA)
    fdesc = [{"dim": list(f.dim), "mult": k,
              "arrows": {a: str(f[a].data[0][0]) for a in f.matrices},
              "in": [C.id for C in (C1, C2) if C.contains(f)]} for f, k in factors]
    two = sum(k for _, k in factors) == 2
    one_each = two and all(C1.contains(f) or C2.contains(f) for f, _ in factors) and \
        any(C1.contains(f) for f, _ in factors) and any(C2.contains(f) for f, _ in factors)
    _check(out, "band members are S-equivalent with two string factors", pairs and one_each,
           {"factors": fdesc, "polystable_dim": list(P.dim)})

    dec = decompose_sample([C1, C2], fx.sum_spec([(C1, 1), (C2, 1)]), fx.THETA, 3, prime, seed)
    _check(out, "stable decomposition of the mixed sum", dec["pattern"] == [["C1", 1], ["C2", 1]], dec)

    mm = 2 if quick else 3
    reports = {}
    for label, parts, target in (("C1+C2", [(C1, 1), (C2, 1)], lambda m: (m + 1) ** 2),
                                 ("2C1", [(C1, 2)], lambda m: comb(m + 2, 2))):
        rep = verify_product_decomposition(fx.sum_spec(parts), fx.THETA, mm, seed, bd, prime)
        ok = all(r["left"] == r["right"] == target(r["m"]) for r in rep.rows)
        reports[label] = rep.to_json()
        _check(out, f"product comparison {label}", ok and rep.conclusion == CONSISTENT, rep.to_json())

    string = fx.biserial_rep(0, 1, 0, 1)
    rem = verify_orbit_removal(fx.sum_spec([(C1, 1)], [string]), C1, string, fx.THETA, mm, seed, bd, prime)
    _check(out, "orbit removal", rem.conclusion == CONSISTENT, rem.to_json())
    return {"example": "biserial", "checks": out, "passed": all(c["passed"] for c in out)}
