from __future__ import annotations

import itertools

import numpy as np
import pytest

from summands.algebra import AlgebraError, make_algebra, opposite_algebra
from summands.fixtures import a2, dual_numbers, fixture_algebras, square, truncated_polynomial


def test_dual_numbers_basis():
    alg = dual_numbers()
    assert alg.dim == 2
    assert set(alg.labels) == {"e_v", "a"}
    assert [alg.labels[i] for i in alg.path_basis("v", "v")] == ["e_v", "a"]


def test_a2_basis():
    alg = a2()
    assert alg.dim == 3
    assert set(alg.labels) == {"e_1", "e_2", "a"}
    assert [alg.labels[i] for i in alg.path_basis("1", "2")] == ["a"]
    assert alg.path_basis("2", "1") == []


def test_truncated_cubic_basis():
    alg = truncated_polynomial()
    assert alg.dim == 3
    assert set(alg.labels) == {"e_v", "x", "x*x"}


def test_square_relation_kills_one_path():
    alg = square()
    # four idempotents and four arrows, plus the long path c*d
    assert alg.dim == 9
    assert alg.basis_index(("a", "b")) is None
    assert alg.basis_index(("c", "d")) is not None


def test_commutativity_relation():
    alg = make_algebra(7, ["1", "2", "3", "4"],
                       [("a", "1", "2"), ("b", "2", "4"), ("c", "1", "3"), ("d", "3", "4")],
                       [[(1, "a*b"), (-1, "c*d")]], 10)
    assert alg.dim == 9
    assert len(alg.path_basis("1", "4")) == 1


def test_non_monomial_loop_relation():
    # x*x = y*y with x*y = y*x = 0 on one vertex; the basis is e, x, y and x^2
    alg = make_algebra(5, ["v"], [("x", "v", "v"), ("y", "v", "v")],
                       [[(1, "x*x"), (-1, "y*y")], [(1, "x*y")], [(1, "y*x")]], 10)
    assert alg.dim == 4
    x, y = (np.eye(alg.dim, dtype=np.int64)[alg.basis_index((n,))] for n in "xy")
    assert np.array_equal(alg.product(x, x), alg.product(y, y))
    assert alg.product(x, x).any()


@pytest.mark.parametrize("name", ["dualnumbers", "truncated3", "A2", "A3", "square"])
def test_dimension_is_sum_of_path_blocks(name):
    alg = fixture_algebras()[name]
    assert alg.dim == sum(len(alg.path_basis(s, t)) for s in alg.vertices for t in alg.vertices)


@pytest.mark.parametrize("name", ["dualnumbers", "truncated3", "A2", "A3", "square"])
def test_multiplication_is_associative_and_unital(name):
    alg = fixture_algebras(7)[name]
    d, p = alg.dim, alg.p
    m = alg.mult
    for i, j, k in itertools.product(range(d), repeat=3):
        left = (m[i, j] @ m[:, k]) % p    # (b_i b_j) b_k
        right = (m[j, k] @ m[i]) % p      # b_i (b_j b_k)
        assert np.array_equal(left % p, right % p)
    one = sum(np.eye(d, dtype=np.int64)[alg.idempotent(v)] for v in alg.vertices)
    for i in range(d):
        b = np.eye(d, dtype=np.int64)[i]
        assert np.array_equal(alg.product(one, b), b)
        assert np.array_equal(alg.product(b, one), b)


@pytest.mark.parametrize("name", ["dualnumbers", "truncated3", "A2", "A3", "square"])
def test_radical_is_nilpotent(name):
    alg = fixture_algebras(7)[name]
    d = alg.dim
    rad = [np.eye(d, dtype=np.int64)[i] for i in range(d) if alg.words[i]]
    cur = rad
    for _ in range(d + 1):
        cur = [alg.product(x, y) for x in cur for y in rad]
        cur = [c for c in cur if c.any()]
    assert not cur


def test_opposite_of_dual_numbers_is_itself():
    alg = dual_numbers()
    op = opposite_algebra(alg)
    assert op.dim == 2
    assert np.array_equal(op.mult, alg.mult)


def test_opposite_reverses_arrows():
    op = opposite_algebra(a2())
    assert op.dim == 3
    (arrow,) = op.arrows
    assert (arrow.source, arrow.target) == ("2", "1")
    assert op.is_opposite


@pytest.mark.parametrize("name", ["truncated3", "A3", "square"])
def test_opposite_multiplication_is_transposed(name):
    alg = fixture_algebras(7)[name]
    op = opposite_algebra(alg)
    assert opposite_algebra(op) is alg
    assert np.array_equal(op.mult, alg.mult.transpose(1, 0, 2))


def test_non_composable_relation_word():
    with pytest.raises(AlgebraError):
        make_algebra(5, ["1", "2"], [("a", "1", "2")], [[(1, "a*a")]], 10)


def test_relation_terms_with_different_endpoints():
    with pytest.raises(AlgebraError):
        make_algebra(5, ["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")], [[(1, "a*b"), (1, "a")]], 10)


def test_relation_of_length_one_rejected():
    with pytest.raises(AlgebraError):
        make_algebra(5, ["v"], [("x", "v", "v")], [[(1, "x")], [(1, "x*x")]], 10)


def test_unknown_vertex_rejected():
    with pytest.raises(AlgebraError):
        make_algebra(5, ["1"], [("a", "1", "2")], [], 10)
    with pytest.raises(AlgebraError):
        a2().vertex("7")


def test_paths_at_nilpotency_bound_vanish():
    alg = make_algebra(5, ["v"], [("x", "v", "v")], [], 6)
    assert alg.dim == 6
    assert alg.basis_index(("x",) * 5) is not None
    assert alg.basis_index(("x",) * 6) is None
