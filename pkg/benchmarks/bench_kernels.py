"""Compare the compiled elimination kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--sizes 20 40 80] [--prime 101] [--repeat 5]

Both implementations run on identical seeded matrices; their outputs are
checked against each other before timing.
"""

import argparse
import random
import timeit

from quivmod._kernels import _pykernels

try:
    from quivmod._kernels import _ckernels
except ImportError:
    _ckernels = None


def random_rows(rng, n, ncols, p, rank=None):
    if rank is None:
        return [[rng.randrange(p) for _ in range(ncols)] for _ in range(n)]
    # product of an n x rank and a rank x ncols matrix
    left = [[rng.randrange(p) for _ in range(rank)] for _ in range(n)]
    right = [[rng.randrange(p) for _ in range(ncols)] for _ in range(rank)]
    return [[sum(a * b for a, b in zip(row, col)) % p for col in zip(*right)] for row in left]


def cases(rng, n, p):
    full = random_rows(rng, n, n, p)
    low = random_rows(rng, n, n, p, rank=n // 2)
    wide = random_rows(rng, n, 2 * n, p)
    rref, pivots = _pykernels.rref_mod_p([r[:] for r in wide], 2 * n, p)
    vec = [rng.randrange(p) for _ in range(2 * n)]
    return {
        "det": ("det_mod_p", lambda: (full, p)),
        "rank (half rank)": ("rank_mod_p", lambda: (low, n, p)),
        "rref (n x 2n)": ("rref_mod_p", lambda: (wide, 2 * n, p)),
        "reduce vector": ("reduce_by_rref", lambda: (vec, rref, pivots, p)),
    }


def fresh(args):
    # kernels may work in place, so every call gets its own copy
    return tuple([r[:] for r in a] if isinstance(a, list) and a and isinstance(a[0], list)
                 else (a[:] if isinstance(a, list) else a) for a in args)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 40, 80])
    ap.add_argument("--prime", type=int, default=101)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels are not built; only the Python fallback is available")
    rng = random.Random(args.seed)
    print(f"{'kernel':<18}{'n':>5}{'python ms':>12}{'cython ms':>12}{'speedup':>9}")
    for n in args.sizes:
        for label, (name, make) in cases(rng, n, args.prime).items():
            py = getattr(_pykernels, name)
            base = make()
            t_py = min(timeit.repeat(lambda: py(*fresh(base)), number=1, repeat=args.repeat))
            if _ckernels is None:
                print(f"{label:<18}{n:>5}{t_py * 1e3:>12.2f}{'-':>12}{'-':>9}")
                continue
            c = getattr(_ckernels, name)
            if c(*fresh(base)) != py(*fresh(base)):
                raise SystemExit(f"{name}: implementations disagree at n={n}")
            t_c = min(timeit.repeat(lambda: c(*fresh(base)), number=1, repeat=args.repeat))
            print(f"{label:<18}{n:>5}{t_py * 1e3:>12.2f}{t_c * 1e3:>12.2f}{t_py / t_c:>8.1f}x")


if __name__ == "__main__":
    main()
