from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import rank_mod
from summands.linalg import PrimeField, is_prime, matrix_power, multiplicative_order, quotient

F5 = PrimeField(5)


def matrices(p, max_rows=6, max_cols=6):
    return st.integers(0, max_rows).flatmap(
        lambda r: st.integers(0, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r)
            .map(lambda rows: np.array(rows, dtype=np.int64).reshape(r, c))))


def test_field_rejects_composites():
    assert is_prime(101) and is_prime(2) and not is_prime(1) and not is_prime(91)
    with pytest.raises(ValueError):
        PrimeField(91)
    with pytest.raises(ValueError):
        PrimeField(2 ** 31 + 11)


def test_rref_identity():
    r, piv, rank = F5.rref(F5.eye(2))
    assert np.array_equal(r, F5.eye(2)) and list(piv) == [0, 1] and rank == 2


def test_rref_hand_example():
    r, piv, rank = F5.rref(np.array([[2, 4], [1, 2]]))
    assert np.array_equal(r, [[1, 2], [0, 0]]) and rank == 1 and list(piv) == [0]


def test_rref_zero():
    r, piv, rank = F5.rref(np.zeros((3, 3), np.int64))
    assert not r.any() and rank == 0 and list(piv) == []


def test_kernel_examples():
    assert F5.kernel_basis(F5.eye(3)).shape == (3, 0)
    k = F5.kernel_basis(np.array([[1, 2]]))
    assert np.array_equal(k, [[3], [1]])
    assert np.array_equal(F5.kernel_basis(np.zeros((2, 3), np.int64)), np.eye(3, dtype=np.int64))


def test_solve_examples():
    b = np.array([[1], [4]])
    assert np.array_equal(F5.solve(F5.eye(2), b), b)
    assert np.array_equal(F5.solve(np.array([[2]]), np.array([[1]])), [[3]])
    assert F5.solve(np.array([[0]]), np.array([[1]])) is None
    with pytest.raises(ValueError):
        F5.solve(F5.eye(2), np.array([[1], [2], [3]]))


def test_solve_free_variables_zero():
    x = F5.solve(np.array([[1, 1]]), np.array([[3]]))
    assert np.array_equal(x, [[3], [0]])


@settings(max_examples=60, deadline=None)
@given(matrices(7))
def test_rref_properties(m):
    f = PrimeField(7)
    r, piv, rank = f.rref(m)
    assert rank == len(piv) == rank_mod(m.tolist(), 7)
    assert np.array_equal(f.rref(r)[0], r)
    # row space preserved: stacking adds no rank
    if m.size:
        assert f.rank(np.vstack([m, r])) == rank


@settings(max_examples=60, deadline=None)
@given(matrices(7))
def test_rank_nullity(m):
    f = PrimeField(7)
    k = f.kernel_basis(m)
    assert f.rank(m) + k.shape[1] == m.shape[1]
    if k.size and m.shape[0]:
        assert not f.matmul(m, k).any()
    assert f.rank(k) == k.shape[1]


@settings(max_examples=60, deadline=None)
@given(matrices(11), st.integers(0, 2 ** 32))
def test_solve_recovers(m, seed):
    f = PrimeField(11)
    x = np.random.default_rng(seed).integers(0, 11, size=(m.shape[1], 2))
    b = f.matmul(m, x)
    y = f.solve(m, b)
    assert y is not None and np.array_equal(f.matmul(m, y), b)


def test_matmul_large_prime_no_overflow():
    p = 2147483629
    f = PrimeField(p)
    a = np.full((3, 40), p - 1, np.int64)
    b = np.full((40, 2), p - 1, np.int64)
    assert np.all(f.matmul(a, b) == (40 % p))


def test_quotient_projection_and_section():
    f = PrimeField(7)
    sub = np.array([[1], [1], [0]])
    q = quotient(f, 3, sub)
    assert q.dim == 2
    assert not f.matmul(q.proj, sub).any()
    assert np.array_equal(f.matmul(q.proj, q.section), f.eye(2))


@pytest.mark.parametrize("p", [2, 3, 7])
def test_multiplicative_order_matches_iteration(p):
    f = PrimeField(p)
    rng = np.random.default_rng(p)
    for _ in range(20):
        x = rng.integers(0, p, size=(3, 3))
        if f.rank(x) < 3:
            continue
        order = multiplicative_order(f, x)
        cur, k = x % p, 1
        while not np.array_equal(cur, f.eye(3)):
            cur, k = f.matmul(cur, x), k + 1
        assert order == k
        assert np.array_equal(matrix_power(f, x, order), f.eye(3))


@pytest.mark.parametrize("shape", [(12, 15), (30, 9), (9, 30)])
def test_large_and_small_elimination_agree(shape):
    f = PrimeField(101)
    rng = np.random.default_rng(shape[0] * shape[1])
    for rank in (0, 3, min(shape)):
        m = f.matmul(rng.integers(0, 101, size=(shape[0], rank)), rng.integers(0, 101, size=(rank, shape[1])))
        big = f.rref(m)
        small = f._rref_small(m % 101)
        assert np.array_equal(big[0], small[0]) and list(big[1]) == list(small[1])
        assert big[2] == rank_mod(m.tolist(), 101) == rank
