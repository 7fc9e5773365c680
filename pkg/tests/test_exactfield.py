from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from quivmod.errors import FieldMismatchError, ShapeError
from quivmod.exactfield import (
    GF, QQ, Fp, Matrix, SparseEchelon, is_prime, matrix_from_json, matrix_to_json, parse_rational,
    reduce_mod_p, scalar_from_json, scalar_to_json,
)

from .conftest import leibniz_det, naive_rank

small = st.integers(-6, 6)
fractions = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


def square(n_max=4, elems=small):
    return st.integers(0, n_max).flatmap(
        lambda n: st.lists(st.lists(elems, min_size=n, max_size=n), min_size=n, max_size=n))


def rect(elems=small):
    return st.integers(1, 5).flatmap(
        lambda r: st.integers(1, 5).flatmap(
            lambda c: st.lists(st.lists(elems, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_det_example():
    assert Matrix(QQ, [[2, 1], [1, 1]]).det() == 1


def test_nullspace_example():
    ns = Matrix(QQ, [[1, -1]]).nullspace()
    assert len(ns) == 1
    assert ns[0][0] == ns[0][1]


def test_inverse_of_singular_is_none():
    assert Matrix(QQ, [[1, 2], [2, 4]]).inverse() is None


def test_empty_det_is_one():
    assert Matrix(QQ, [], 0).det() == 1


@given(square(elems=fractions))
def test_det_matches_leibniz(rows):
    n = len(rows)
    assert Matrix(QQ, rows, n).det() == leibniz_det(rows)


@given(square(elems=small))
def test_det_mod_p_matches_leibniz(rows):
    n = len(rows)
    p = 101
    assert int(Matrix(GF(p), rows, n).det()) == leibniz_det(rows) % p


@given(rect(elems=fractions))
def test_rank_and_nullity(rows):
    M = Matrix(QQ, rows)
    r = M.rank()
    assert r == naive_rank(rows)
    ns = M.nullspace()
    assert len(ns) + r == M.shape[1]
    for v in ns:
        assert all(x == 0 for x in M.apply(v))


@given(rect(elems=small))
def test_rref_is_reduced(rows):
    R, piv = Matrix(GF(7), rows).rref()
    assert len(piv) == R.shape[0] == naive_rank(rows, 7)
    for i, c in enumerate(piv):
        col = [int(R[k, c]) for k in range(R.shape[0])]
        assert col == [1 if k == i else 0 for k in range(R.shape[0])]


@given(square(n_max=4, elems=fractions))
def test_inverse_round_trip(rows):
    n = len(rows)
    M = Matrix(QQ, rows, n)
    inv = M.inverse()
    if leibniz_det(rows) == 0:
        assert inv is None
    else:
        assert M @ inv == Matrix.identity(QQ, n)


@given(rect(elems=fractions), st.data())
def test_solve(rows, data):
    M = Matrix(QQ, rows)
    x = data.draw(st.lists(fractions, min_size=M.shape[1], max_size=M.shape[1]))
    b = M.apply(x)
    y = M.solve(b)
    assert y is not None
    assert list(M.apply(y)) == list(b)


def test_solve_inconsistent():
    assert Matrix(QQ, [[1, 1], [1, 1]]).solve([1, 2]) is None


def test_fp_arithmetic():
    a, b = Fp(3, 7), Fp(5, 7)
    assert a + b == Fp(1, 7)
    assert a * b == Fp(1, 7)
    assert a / b * b == a
    assert a ** 6 == Fp(1, 7)
    assert -a == Fp(4, 7)


def test_field_mismatch():
    with pytest.raises(FieldMismatchError):
        Fp(1, 7) + Fraction(1, 2)
    with pytest.raises(FieldMismatchError):
        Matrix(GF(7), [[Fraction(1, 2)]])
    with pytest.raises(FieldMismatchError):
        Matrix(QQ, [[1]]) @ Matrix(GF(7), [[1]])
    with pytest.raises(FieldMismatchError):
        Fp(1, 7) + Fp(1, 5)


def test_shape_errors():
    with pytest.raises(ShapeError):
        Matrix(QQ, [[1, 2]]) @ Matrix(QQ, [[1, 2]])
    with pytest.raises(ShapeError):
        Matrix(QQ, [[1, 2]]) + Matrix(QQ, [[1]])


def test_reduce_mod_p():
    assert reduce_mod_p(Fraction(1, 2), 7) == 4
    assert reduce_mod_p(-1, 7) == 6
    with pytest.raises(ZeroDivisionError):
        reduce_mod_p(Fraction(1, 7), 7)
    M = Matrix(QQ, [["1/2", 3]]).reduce_mod(5)
    assert [int(x) for x in M.rows()[0]] == [3, 3]


def test_is_prime_and_gf():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    with pytest.raises(ValueError):
        GF(8)
    assert GF(7) is GF(7)


@given(fractions)
def test_scalar_json_round_trip(x):
    assert scalar_from_json(scalar_to_json(x)) == x
    assert parse_rational(scalar_to_json(x)) == x


def test_scalar_json_formats():
    assert scalar_to_json(Fraction(3, 4)) == "3/4"
    assert scalar_to_json(Fraction(3)) == "3"
    assert scalar_to_json(Fp(3, 7)) == {"mod 7": 3}
    assert scalar_from_json({"mod 7": 3}) == Fp(3, 7)


@given(rect(elems=fractions))
def test_matrix_json_round_trip(rows):
    M = Matrix(QQ, rows)
    assert matrix_from_json(QQ, matrix_to_json(M), *M.shape) == M
    N = M.reduce_mod(11) if all(x.denominator % 11 for r in rows for x in r) else None
    if N is not None:
        assert matrix_from_json(GF(11), matrix_to_json(N), *N.shape) == N


@given(st.lists(st.dictionaries(st.integers(0, 6), st.integers(-4, 4), max_size=5), max_size=8))
def test_sparse_echelon_rank(vectors):
    ech = SparseEchelon(QQ)
    added = sum(ech.add({k: v for k, v in vec.items() if v}) for vec in vectors)
    dense = [[vec.get(k, 0) for k in range(7)] for vec in vectors]
    assert added == (naive_rank(dense) if dense else 0)
    for vec in vectors:
        assert not ech.reduce({k: v for k, v in vec.items() if v})
