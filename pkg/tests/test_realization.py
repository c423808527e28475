from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from summands.algebra import opposite_algebra
from summands.fixtures import dual_numbers
from summands.generators import random_decomposable, random_endo
from summands.hilton_rees import stable_power_idempotent
from summands.homological import ext1, projective
from summands.realization import (
    BACKENDS,
    EXT1,
    STABLE_HOM,
    TOR1,
    BatteryPoint,
    PreconditionError,
    backend,
    certificate_battery,
    check_certificate_invariants,
    default_battery,
    realize_summand,
    verify_certificate,
)
from summands.reps import RepError, direct_sum, identity, map_sum, simple, zero_map

NAMES = ["dualnumbers", "truncated3", "A2", "A3", "square"]


def lam_plus_s(alg=None):
    alg = alg or dual_numbers()
    lam, s = projective(alg, "v"), simple(alg, "v")
    return lam, s, direct_sum(lam, s)[0]


def test_identity_gives_length_zero():
    _, _, a = lam_plus_s()
    cert = realize_summand(a, identity(a), EXT1)
    assert cert.length == 0 and cert.b == a
    assert cert.terminal == "f is an epimorphism of A"
    report = verify_certificate(cert, default_battery(a.algebra, n_random=2))
    assert report.passed
    assert all(r.rank_e == r.dim_g_a for r in report.rows)


def test_projection_onto_simple_realizes_ext_of_simple():
    lam, s, a = lam_plus_s()
    cert = realize_summand(a, map_sum(zero_map(lam, lam), identity(s)), EXT1)
    assert cert.length == 1 and cert.b == s
    report = verify_certificate(cert, [BatteryPoint("S", s)])
    (row,) = report.rows
    assert row.dim_g_a == 1 and row.rank_e == 1 and row.dim_g_b == ext1(s, s).dim == 1
    assert report.passed


def test_stably_zero_projection_realizes_zero_functor():
    lam, s, a = lam_plus_s()
    cert = realize_summand(a, map_sum(identity(lam), zero_map(s, s)), EXT1)
    assert cert.b == lam
    report = verify_certificate(cert, [BatteryPoint("S", s)])
    (row,) = report.rows
    assert row.rank_e == 0 == row.dim_g_b
    assert report.passed


def test_wrong_summand_fails_verification():
    lam, s, a = lam_plus_s()
    cert = realize_summand(a, map_sum(identity(lam), zero_map(s, s)), EXT1)
    forged = dataclasses.replace(cert, b=s)
    report = verify_certificate(forged, [BatteryPoint("S", s)], check_invariants=False)
    assert not report.passed


def test_not_stably_idempotent_rejected():
    _, s, _ = lam_plus_s()
    with pytest.raises(PreconditionError):
        realize_summand(s, 2 * identity(s), EXT1)


def test_non_endomorphism_rejected():
    lam, s, _ = lam_plus_s()
    with pytest.raises(RepError):
        realize_summand(lam, zero_map(lam, s), EXT1)


def test_empty_battery_rejected():
    _, _, a = lam_plus_s()
    cert = realize_summand(a, identity(a), EXT1)
    with pytest.raises(ValueError):
        verify_certificate(cert, [])


def test_backend_lookup():
    assert backend("ext1") is EXT1 and backend("stablehom") is STABLE_HOM and backend("tor1") is TOR1
    assert len(BACKENDS) == 3
    with pytest.raises(ValueError):
        backend("ext2")


def test_tor_backend_uses_opposite_battery():
    alg = dual_numbers()
    assert TOR1.battery_algebra(alg) == opposite_algebra(alg)
    assert EXT1.battery_algebra(alg) is alg


@pytest.mark.parametrize("name", NAMES)
def test_random_chains_verify(name, algebras):
    alg = algebras[name]
    rng = np.random.default_rng(103)
    for k in range(6):
        a = random_decomposable(alg, rng, 6)
        u = random_endo(a, rng, sparse=bool(k % 2))
        e, _ = stable_power_idempotent(u)
        c1 = realize_summand(a, e, EXT1)
        c2 = realize_summand(a, e, STABLE_HOM)
        # the chain only depends on f, not on the functor
        assert c1.b == c2.b and c1.length == c2.length
        assert check_certificate_invariants(c1) == []
        for cert in (c1, c2):
            assert verify_certificate(cert, certificate_battery(cert, seed=k, n_random=3)).passed


@pytest.mark.parametrize("name", NAMES)
def test_random_tor_chains_verify(name, algebras):
    op = opposite_algebra(algebras[name])
    rng = np.random.default_rng(107)
    for k in range(4):
        a = random_decomposable(op, rng, 6)
        e, _ = stable_power_idempotent(random_endo(a, rng, sparse=True))
        cert = realize_summand(a, e, TOR1)
        report = verify_certificate(cert, certificate_battery(cert, seed=k, n_random=3))
        assert report.passed
        assert report.rows[0].label.startswith("S(")
