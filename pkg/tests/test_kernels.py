import random

import pytest
from hypothesis import given, strategies as st

from quivmod import _kernels
from quivmod._kernels import _pykernels

from .conftest import naive_rank

try:
    from quivmod._kernels import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")
PRIMES = [2, 3, 5, 101, 65521, 2**31 - 1]


def matrices(p, max_rows=6, max_cols=6):
    return st.integers(0, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c),
                               min_size=r, max_size=r).map(lambda rows: (rows, c))))


def test_backend_is_named():
    assert _kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("p", PRIMES)
def test_python_rank_matches_naive(p):
    rnd = random.Random(p)
    for _ in range(30):
        r, c = rnd.randint(0, 5), rnd.randint(1, 5)
        rows = [[rnd.randrange(p) for _ in range(c)] for _ in range(r)]
        assert _pykernels.rank_mod_p(rows, c, p) == naive_rank(rows, p)


@needs_c
@pytest.mark.parametrize("p", [2, 5, 101, 2**31 - 1])
@given(data=st.data())
def test_backends_agree(p, data):
    rows, ncols = data.draw(matrices(p))
    assert _ckernels.rank_mod_p(rows, ncols, p) == _pykernels.rank_mod_p(rows, ncols, p)
    assert _ckernels.rref_mod_p(rows, ncols, p) == _pykernels.rref_mod_p(rows, ncols, p)
    if rows and len(rows) == ncols:
        assert _ckernels.det_mod_p(rows, p) == _pykernels.det_mod_p(rows, p)


@needs_c
@given(data=st.data())
def test_reduce_by_rref_agrees(data):
    p = 101
    rows, ncols = data.draw(matrices(p))
    rr, piv = _pykernels.rref_mod_p(rows, ncols, p)
    vec = data.draw(st.lists(st.integers(0, p - 1), min_size=ncols, max_size=ncols))
    a = _pykernels.reduce_by_rref(vec, rr, piv, p)
    b = _ckernels.reduce_by_rref(vec, rr, piv, p)
    assert list(a) == list(b)
    assert all(a[c] == 0 for c in piv)


def test_inputs_not_mutated():
    rows = [[1, 2], [3, 4]]
    _kernels.rref_mod_p(rows, 2, 7)
    _kernels.det_mod_p(rows, 7)
    assert rows == [[1, 2], [3, 4]]


def test_large_prime_falls_back():
    p = 2**61 - 1
    rows = [[p - 1, 2], [3, 5]]
    assert _kernels.det_mod_p(rows, p) == ((p - 1) * 5 - 6) % p
