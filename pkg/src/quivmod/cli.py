"""Command-line interface.

Every subcommand reads one JSON document (a file path or ``-`` for stdin)
and writes JSON to stdout.  Verification reports can be rendered as tables
with ``--table``.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .errors import InconclusiveError, QuivmodError
from .exactfield import QQ, scalar_to_json
from .polyring import poly_from_json, poly_to_json
from .quivercore import Quiver, Relation, Representation, euler_form
from .schofield import (
    double_quiver, hat_dim, lift_to_double, domokos_lift, schofield_semiinvariant, schofield_weight,
    semistable_witness, tau,
)
from .siring import (
    SumSpec, component_from_json, hilbert_function, restrict_dim, si_space, sumspec_from_json,
)
from .stability import (
    DEFAULT_PRIME, decompose_sample, enumerate_subreps, is_semistable, is_stable, jh_factors,
    polystabilize, s_equivalent,
)


def _load(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _quiver(doc):
    return Quiver.from_json(doc["quiver"])


def _relations(Q, doc):
    return [Relation.from_json(r, Q) for r in doc.get("relations", [])]


def _rep(Q, obj):
    return Representation.from_json(Q, obj)


def _scalar(x):
    return scalar_to_json(x) if x is not None else None


def _witness_json(w):
    if w is None:
        return None
    return {"dim": list(w.dim), "theta": w.theta_value,
            "bases": [[list(map(int, r)) for r in b] for b in w.bases]}


def _verdict_json(v):
    return {"value": v.value, "reason": v.reason, "method": v.method, "prime": v.prime,
            "witness": _witness_json(v.witness), "caveats": v.caveats}


def _bounds_for(args, doc):
    """Degree bound as a function of the multiplier.

    ``--degree-bound`` and an integer ``"degree_bound"`` are used at every
    multiplier; ``{"per_m": k}`` means ``k * m``.
    """
    D = args.degree_bound if args.degree_bound is not None else doc.get("degree_bound")
    if D is None:
        return None
    if isinstance(D, dict):
        k = int(D["per_m"])
        return lambda m: k * m
    return lambda m: int(D)


def _degree_bound(args, doc, m):
    bounds = _bounds_for(args, doc)
    return bounds(m) if bounds else None


# subcommands

def cmd_euler(args, doc):
    Q = _quiver(doc)
    return {"euler": euler_form(Q, Q.vec(doc["d"]), Q.vec(doc["e"]))}


def cmd_double(args, doc):
    Q = _quiver(doc)
    D = double_quiver(Q)
    out = {"quiver": D.quiver.to_json()}
    if "d" in doc:
        out["dim"] = dict(zip(D.quiver.vertices, hat_dim(Q, Q.vec(doc["d"]))))
    if "rep" in doc:
        out["tau"] = tau(_rep(Q, doc["rep"]), D).to_json()
    return out


def cmd_schofield_eval(args, doc):
    Q = _quiver(doc)
    D = double_quiver(Q)
    V = _rep(D.quiver, doc["V"])
    W = _rep(D.quiver, doc["W"]) if "W" in doc else tau(_rep(Q, doc["rep"]), D)
    return {"value": _scalar(schofield_semiinvariant(V, W)),
            "weight": dict(zip(D.quiver.vertices, schofield_weight(D.quiver, V.dim)))}


def cmd_lift(args, doc):
    Q = _quiver(doc)
    f = poly_from_json(doc["poly"], QQ)
    d = Q.vec(doc["dim"])
    if "vertex" in doc:
        g, S, need = domokos_lift(f, Q, d, doc["vertex"], doc.get("n"))
        return {"poly": poly_to_json(g), "quiver": S.quiver.to_json(), "min_n": need}
    g, w, used = lift_to_double(f, Q, d, Q.vec(doc["theta"]), doc.get("n"))
    D = double_quiver(Q)
    return {"poly": poly_to_json(g), "weight": dict(zip(D.quiver.vertices, w)),
            "n": dict(zip(Q.vertices, used))}


def cmd_witness(args, doc):
    Q = _quiver(doc)
    M = _rep(Q, doc["rep"])
    cert = semistable_witness(M, Q.vec(doc["theta"]), trials=args.samples or 20, seed=args.seed,
                              m_max=args.m_max or 3)
    if cert is None:
        return {"certificate": None, "conclusive": False}
    V, m, val = cert
    return {"certificate": {"V": V.to_json() if V is not None else None, "m": m,
                            "value": _scalar(val)}, "conclusive": True}


def cmd_si_basis(args, doc):
    Q = _quiver(doc)
    R = _relations(Q, doc)
    theta = Q.vec(doc["theta"])
    m = args.m if args.m is not None else doc.get("m", 1)
    D = _degree_bound(args, doc, m)
    if "component" in doc:
        C = component_from_json(Q, R, doc["component"])
        res = restrict_dim(C, theta, m, D, args.samples, args.seed, doc.get("method", "auto"))
        return {"dim": res["dim"], "basis": [poly_to_json(f) for f in res["basis"]],
                "basis_text": [str(f) for f in res["basis"]], "method": res["method"],
                "degree_bound": res["degree_bound"], "truncated": res["truncated"]}
    B = si_space(Q, R, Q.vec(doc["dim"]), theta, m, D)
    return {"dim": len(B), "basis": [poly_to_json(f) for f in B.polys],
            "basis_text": [str(f) for f in B.polys], "degree_bound": B.degree_bound,
            "truncated": B.truncated, "note": B.note}


def cmd_hilbert(args, doc):
    Q = _quiver(doc)
    R = _relations(Q, doc)
    theta = Q.vec(doc["theta"])
    m_max = args.m_max or doc.get("m_max", 3)
    if "sum" in doc:
        spec = sumspec_from_json(Q, R, doc["sum"])
    else:
        spec = component_from_json(Q, R, doc["component"])
    return {"h": hilbert_function(spec, theta, m_max, _bounds_for(args, doc), args.seed, args.samples)}


def cmd_stability(args, doc):
    Q = _quiver(doc)
    M = _rep(Q, doc["rep"])
    theta = Q.vec(doc["theta"])
    out = {"semistable": _verdict_json(is_semistable(M, theta, args.prime, seed=args.seed)),
           "stable": _verdict_json(is_stable(M, theta, args.prime))}
    if doc.get("list_subreps"):
        p = M.field.p or args.prime or DEFAULT_PRIME
        Mp = M.reduce_mod(p) if M.field.p is None else M
        out["subreps"] = [_witness_json(w) for w in enumerate_subreps(Mp)]
    return out


def cmd_jh(args, doc):
    Q = _quiver(doc)
    M = _rep(Q, doc["rep"])
    theta = Q.vec(doc["theta"])
    factors = jh_factors(M, theta, args.prime)
    return {"factors": [{"rep": f.to_json(), "mult": k} for f, k in factors],
            "polystable": polystabilize(M, theta, args.prime).to_json()}


def cmd_s_equiv(args, doc):
    Q = _quiver(doc)
    return {"s_equivalent": s_equivalent(_rep(Q, doc["M"]), _rep(Q, doc["N"]), Q.vec(doc["theta"]),
                                         args.prime)}


def cmd_decompose(args, doc):
    Q = _quiver(doc)
    R = _relations(Q, doc)
    cands = [component_from_json(Q, R, c) for c in doc["candidates"]]
    amb = doc["ambient"]
    ambient = sumspec_from_json(Q, R, amb) if "parts" in amb else component_from_json(Q, R, amb)
    res = decompose_sample(cands, ambient, Q.vec(doc["theta"]), args.samples or 5,
                           args.prime or DEFAULT_PRIME, args.seed)
    res["unclassified"] = [{**u, "factor_dim": list(u["factor_dim"])} for u in res["unclassified"]]
    return res


def cmd_verify_removal(args, doc):
    Q = _quiver(doc)
    R = _relations(Q, doc)
    C1 = component_from_json(Q, R, doc["component"])
    M2 = _rep(Q, doc["fixed"])
    C = SumSpec([(C1, 1)], [M2], "C")
    return harness.verify_orbit_removal(C, C1, M2, Q.vec(doc["theta"]), args.m_max or 3, args.seed,
                                        _bounds_for(args, doc), args.prime or DEFAULT_PRIME)


def cmd_verify_product(args, doc):
    Q = _quiver(doc)
    R = _relations(Q, doc)
    C = sumspec_from_json(Q, R, doc)
    return harness.verify_product_decomposition(C, Q.vec(doc["theta"]), args.m_max or 3, args.seed,
                                                _bounds_for(args, doc), args.prime or DEFAULT_PRIME)


COMMANDS = {
    "euler": (cmd_euler, "Euler form <d, e>"),
    "double": (cmd_double, "double quiver, doubled dimension vector and tau(M)"),
    "schofield-eval": (cmd_schofield_eval, "evaluate c^V at W (or at tau(rep))"),
    "lift": (cmd_lift, "lift a semi-invariant to a vertex split or the double quiver"),
    "witness": (cmd_witness, "search for a determinantal semistability certificate"),
    "si-basis": (cmd_si_basis, "basis of a semi-invariant weight space"),
    "hilbert": (cmd_hilbert, "Hilbert function of a component or a direct-sum spec"),
    "stability": (cmd_stability, "semistability and stability verdicts"),
    "jh": (cmd_jh, "stable composition factors and the polystable representative"),
    "s-equiv": (cmd_s_equiv, "S-equivalence of two representations"),
    "decompose": (cmd_decompose, "sampled stable decomposition of a component"),
    "verify-removal": (cmd_verify_removal, "compare a component with and without an orbit summand"),
    "verify-product": (cmd_verify_product, "compare a direct-sum component with its product side"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="quivmod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--prime", type=int, default=None)
        p.add_argument("--degree-bound", type=int, default=None)
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--m-max", type=int, default=None)
        p.add_argument("--m", type=int, default=None, help="multiplier for si-basis")
        p.add_argument("--table", action="store_true", help="render reports as tables")
        p.add_argument("--indent", type=int, default=2)

    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", help="JSON input file, or - for stdin")
        common(p)
    p = sub.add_parser("example", help="run a worked example end to end")
    p.add_argument("name", choices=["wild", "biserial"])
    p.add_argument("--quick", action="store_true", help="smaller multipliers")
    common(p)
    return parser


def _emit(obj, args):
    json.dump(obj, sys.stdout, indent=args.indent, default=str)
    sys.stdout.write("\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "example":
            res = harness.example_fixtures(args.name, args.seed, args.prime or DEFAULT_PRIME, args.quick)
            if args.table:
                for c in res["checks"]:
                    print(f"{'PASS' if c['passed'] else 'FAIL'}  {c['check']}")
            else:
                _emit(res, args)
            return 0 if res["passed"] else 1
        fn, _ = COMMANDS[args.command]
        out = fn(args, _load(args.input))
        if isinstance(out, harness.VerificationReport):
            if args.table:
                print(out.table())
            else:
                _emit(out.to_json(), args)
            return out.exit_code
        _emit(out, args)
        return 0
    except InconclusiveError as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return harness.EXIT_INCONCLUSIVE
    except (QuivmodError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
