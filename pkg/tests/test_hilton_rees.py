from __future__ import annotations

import numpy as np
import pytest

from summands.fixtures import dual_numbers
from summands.generators import random_decomposable, random_endo, random_rep
from summands.hilton_rees import (
    connecting_class,
    hr_kernel_dim,
    induced_ext_map,
    is_stably_idempotent,
    stable_power_idempotent,
)
from summands.homological import ext1, factors_through_projective, projective, projective_cover, stable_hom, stably_equal
from summands.reps import RepError, RepMap, direct_sum, hom_space, identity, map_sum, power, random_hom, simple, zero_map

NAMES = ["dualnumbers", "truncated3", "A2", "A3", "square"]


def lam_plus_s():
    alg = dual_numbers()
    lam, s = projective(alg, "v"), simple(alg, "v")
    a, _, _ = direct_sum(lam, s)
    return alg, lam, s, a


def test_induced_map_of_identity():
    s = simple(dual_numbers(), "v")
    mat = induced_ext_map(identity(s), s).matrix
    assert np.array_equal(mat, [[1]])


@pytest.mark.parametrize("name", NAMES)
def test_induced_map_examples(name, algebras):
    alg = algebras[name]
    rng = np.random.default_rng(47)
    for _ in range(5):
        a, m = random_rep(alg, rng, 5), random_rep(alg, rng, 5)
        d = ext1(a, m).dim
        assert np.array_equal(induced_ext_map(identity(a), m).matrix, np.eye(d, dtype=np.int64))
        cov = projective_cover(a)
        f = cov.pi @ random_hom(a, cov.cover, rng)
        assert not induced_ext_map(f, m).matrix.any()


def test_connecting_class_of_identity_on_simple():
    s = simple(dual_numbers(), "v")
    cls = connecting_class(identity(s))
    assert cls.space.dim == 1
    assert not cls.is_zero()


def test_connecting_class_of_zero():
    s = simple(dual_numbers(), "v")
    assert connecting_class(zero_map(s, s)).is_zero()


@pytest.mark.parametrize("name", NAMES)
def test_connecting_class_detects_projective_factorisation(name, algebras):
    alg = algebras[name]
    rng = np.random.default_rng(53)
    for k in range(12):
        b, a = random_rep(alg, rng, 5), random_rep(alg, rng, 5)
        if k % 3 == 0:
            cov = projective_cover(a)
            f = cov.pi @ random_hom(b, cov.cover, rng)
        else:
            f = random_hom(b, a, rng)
        assert connecting_class(f).is_zero() == factors_through_projective(f)[0]
        assert stable_hom(b, a).dim == hr_kernel_dim(b, a)


def test_stably_idempotent_examples():
    alg, lam, s, a = lam_plus_s()
    assert is_stably_idempotent(RepMap(lam, lam, [lam.arrow("a")]))
    e = map_sum(identity(lam), zero_map(s, s))
    assert is_stably_idempotent(e)
    assert stably_equal(e, zero_map(a, a))
    assert is_stably_idempotent(map_sum(zero_map(lam, lam), identity(s)))
    assert not is_stably_idempotent(2 * identity(s))


def test_stably_idempotent_needs_endomorphism():
    alg, lam, s, a = lam_plus_s()
    with pytest.raises(RepError):
        is_stably_idempotent(zero_map(lam, s))


def test_power_of_noisy_projection():
    alg, lam, s, a = lam_plus_s()
    rng = np.random.default_rng(59)
    target = map_sum(zero_map(lam, lam), identity(s))
    for _ in range(5):
        noise = random_hom(lam, a, rng) @ random_hom(a, lam, rng)
        u = target + noise
        e, m = stable_power_idempotent(u)
        assert stably_equal(e, target)
        assert m == 1


def test_power_of_stable_idempotent_is_itself():
    alg, lam, s, a = lam_plus_s()
    u = map_sum(zero_map(lam, lam), identity(s))
    e, m = stable_power_idempotent(u)
    assert m == 1 and e == u


def test_stably_nilpotent_power_is_zero():
    alg, lam, s, a = lam_plus_s()
    u = map_sum(RepMap(lam, lam, [lam.arrow("a")]), zero_map(s, s))
    e, _ = stable_power_idempotent(u)
    assert stably_equal(e, zero_map(a, a))


def _brute_force_exponent(u, limit=4000):
    st = stable_hom(u.source, u.source)
    classes = [None]
    cur = u
    for k in range(1, 2 * limit):
        classes.append(st.class_of(cur))
        if k % 2 == 0 and np.array_equal(classes[k // 2], classes[k]):
            return k // 2
        cur = u @ cur
    raise AssertionError("no stably idempotent power found")


@pytest.mark.parametrize("name", NAMES)
def test_exponent_is_minimal(name, small_algebras):
    alg = small_algebras[name]
    rng = np.random.default_rng(61)
    for k in range(10):
        a = random_decomposable(alg, rng, 6)
        u = random_endo(a, rng, sparse=bool(k % 2))
        e, m = stable_power_idempotent(u)
        assert is_stably_idempotent(e)
        assert m == _brute_force_exponent(u)


def test_exponent_found_past_the_quick_search():
    # an automorphism of order 100 on S over F_101 needs m = 100
    s = simple(dual_numbers(), "v")
    u = 3 * identity(s)  # 3 generates F_101^*, order 100
    e, m = stable_power_idempotent(u, quick=4)
    assert m == 100 and e == identity(s)
