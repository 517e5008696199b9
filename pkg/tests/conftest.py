from pathlib import Path

import pytest

from grangergraph import read_mg
from grangergraph.crosscheck import random_suite
from strategies import trivariate_model

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def g5():
    return read_mg(FIXTURES / "g5.mg")


@pytest.fixture(scope="session")
def g3():
    return read_mg(FIXTURES / "g3.mg")


@pytest.fixture(scope="session")
def trivariate():
    return trivariate_model()


@pytest.fixture(scope="session")
def suite():
    """The shared random-graph suite: 200 graphs, 2..5 vertices, at most 10 edges."""
    return random_suite(200, seed=20240607)
