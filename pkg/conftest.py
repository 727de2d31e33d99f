"""
Shared fixtures: the 15-qubit triorthogonal code and its symmetric companion.
"""
import os
import sys

os.environ['TRIORTHO_ENV'] = 'testing'
os.environ.setdefault('TRIORTHO_WORKERS', '1')
sys.path.insert(0, os.path.dirname(__file__))

import pytest  # noqa: E402

from src.models.bitmatrix import BitMatrix  # noqa: E402
from src.services import csscodes  # noqa: E402

DATA_DIR = csscodes.DATA_DIR

G0_SUPPORTS = [
    (1, 2, 3, 4, 5, 6, 7, 8),
    (1, 2, 3, 4, 9, 10, 11, 12),
    (1, 2, 5, 6, 9, 10, 13, 14),
    (1, 3, 5, 7, 9, 11, 13, 15),
]
G1_SUPPORT = (1, 4, 6, 7, 10, 11, 13)
CANONICAL_B = [(1, 2, 3, 4), (1, 2, 5, 6), (1, 3, 5, 7)]


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: exhaustive sweeps and large Monte Carlo runs')


@pytest.fixture
def g0():
    return BitMatrix.from_supports(G0_SUPPORTS, 15)


@pytest.fixture
def g():
    return BitMatrix.from_supports(G0_SUPPORTS + [G1_SUPPORT], 15)


@pytest.fixture
def qt():
    return csscodes.example_15()


@pytest.fixture
def qsym():
    return csscodes.example_pair()[1]


@pytest.fixture
def data_path():
    def path(name):
        return os.path.join(DATA_DIR, name)
    return path
