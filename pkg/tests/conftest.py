import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import random_matrix, random_voltage_cover  # noqa: E402

from wgraph import matrix_norm_bound  # noqa: E402


@pytest.fixture(scope="session")
def matrix_suite():
    """200 seeded random complex matrices (n <= 30) with norm data."""
    rng = np.random.default_rng(20260814)
    suite = []
    for _ in range(200):
        m = random_matrix(rng, max_n=30)
        bound = matrix_norm_bound(m)
        suite.append((m, bound, 2.0 * max(bound, 1e-12)))
    return suite


@pytest.fixture(scope="session")
def voltage_suite():
    """100 seeded voltage covers (base n <= 12, degree <= 4)."""
    rng = np.random.default_rng(55)
    return [random_voltage_cover(rng) for _ in range(100)]
