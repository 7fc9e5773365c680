import os
import random
from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def leibniz_det(rows):
    """Permutation-sum determinant, independent of any elimination."""
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


def naive_rank(rows, p=None):
    """Gaussian elimination on Fractions (or ints mod p) written from scratch."""
    a = [[Fraction(x) if p is None else x % p for x in r] for r in rows]
    rank = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(len(a)):
            if i != rank and a[i][c]:
                if p is None:
                    f = a[i][c] / a[rank][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
                else:
                    f = a[i][c] * pow(a[rank][c], p - 2, p) % p
                    a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


@pytest.fixture
def rng():
    return random.Random(12345)
