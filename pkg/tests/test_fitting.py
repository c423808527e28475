from __future__ import annotations

import numpy as np
import pytest

from summands.algebra import make_algebra
from summands.fixtures import dual_numbers
from summands.fitting import fitting_decomposition, fitting_index
from summands.generators import random_endo, random_rep
from summands.homological import projective
from summands.reps import Rep, RepError, RepMap, direct_sum, identity, is_epi, is_iso, is_mono, map_sum, power, simple, zero_map
from summands.selftest import fitting_violations

NAMES = ["dualnumbers", "truncated3", "A2", "A3", "square"]


def test_vector_space_example():
    alg = make_algebra(7, ["v"], [], [], 10)
    m = Rep(alg, [3], [])
    f = RepMap(m, m, [np.array([[1, 1, 0], [0, 1, 0], [0, 0, 0]])])
    res = fitting_decomposition(f)
    assert res.n == 1
    assert res.kernel.dims == (1,) and res.image.dims == (2,)


def test_mult_by_a_has_index_two():
    lam = projective(dual_numbers(), "v")
    f = RepMap(lam, lam, [lam.arrow("a")])
    res = fitting_decomposition(f)
    assert res.n == 2
    assert res.kernel.total_dim == 2 and res.image.total_dim == 0


def test_projection_onto_simple_summand():
    alg = dual_numbers()
    lam, s = projective(alg, "v"), simple(alg, "v")
    f = map_sum(zero_map(lam, lam), identity(s))
    res = fitting_decomposition(f)
    assert res.n == 1
    assert res.kernel.rep == lam and res.image.rep == s


def test_iso_has_index_zero():
    m = projective(dual_numbers(), "v")
    assert fitting_index(identity(m)) == 0
    assert fitting_index(3 * identity(m)) == 0


def test_non_endomorphism_rejected():
    alg = dual_numbers()
    with pytest.raises(RepError):
        fitting_index(zero_map(simple(alg, "v"), projective(alg, "v")))


@pytest.mark.parametrize("name", NAMES)
def test_random_endomorphisms(name, algebras):
    alg = algebras[name]
    rng = np.random.default_rng(43)
    for k in range(40):
        a = random_rep(alg, rng, 7) if k % 2 else direct_sum(random_rep(alg, rng, 4), random_rep(alg, rng, 4))[0]
        f = random_endo(a, rng, sparse=bool(k % 3))
        assert fitting_violations(f) == []
        res = fitting_decomposition(f)
        assert res.n <= a.total_dim
        assert res.kernel.total_dim + res.image.total_dim == a.total_dim
        assert power(res.on_kernel, res.n).is_zero()
        # mono or epi endomorphisms of finite length modules are isomorphisms
        if is_mono(f) or is_epi(f):
            assert is_iso(f) and res.n == 0


def test_nilpotent_gives_everything_in_kernel():
    alg = dual_numbers()
    a, _, _ = direct_sum(projective(alg, "v"), simple(alg, "v"))
    f = RepMap(a, a, [np.array([[0, 0, 0], [1, 0, 0], [0, 0, 0]])])
    res = fitting_decomposition(f)
    assert res.kernel.total_dim == 3 and res.image.total_dim == 0
