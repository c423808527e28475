from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from summands.fixtures import fixture_algebras  # noqa: E402

REPO = Path(__file__).resolve().parents[1]
FIXTURES = REPO / "fixtures"


@pytest.fixture(scope="session")
def algebras():
    return fixture_algebras()


@pytest.fixture(scope="session")
def small_algebras():
    """Fixture algebras over F_5, small enough for brute-force oracles."""
    return fixture_algebras(5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
