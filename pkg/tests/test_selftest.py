from __future__ import annotations

import numpy as np

from summands.fixtures import fixture_algebra
from summands.reps import pushout
from summands.selftest import SUITES, random_pushout_instance, run_selftest, suite_examples, universal_map


def test_worked_examples_suite():
    res = suite_examples(0)
    assert res.passed
    assert len(res.lines) == 3 and all(line.endswith(": ok") for line in res.lines)


def test_report_is_deterministic_in_process():
    a = run_selftest(5, [6, 2])
    b = run_selftest(5, [2, 6])
    assert a == b and a[0]


def test_suite_registry():
    assert sorted(SUITES) == [1, 2, 3, 4, 5, 6]


def test_pushout_instances_are_universal():
    alg = fixture_algebra("A2")
    rng = np.random.default_rng(3)
    for _ in range(5):
        inst = random_pushout_instance(alg, rng)
        e, c, d = pushout(inst.a, inst.b)
        exists, unique = universal_map(e, c, d, inst.d, inst.c)
        assert exists and unique
