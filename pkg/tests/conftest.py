import os

import numpy as np
import pytest

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_path(name):
    return os.path.join(FIXTURES, name)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def fixtures_dir():
    return FIXTURES
