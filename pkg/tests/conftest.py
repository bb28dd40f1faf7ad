import sys
from pathlib import Path

import numpy as np
import pytest

# Make the shared fixture-data module importable as plain `golden`.
sys.path.insert(0, str(Path(__file__).resolve().parent))

import golden  # noqa: E402


@pytest.fixture
def golden_instance():
    return golden.instance()


@pytest.fixture(scope="session")
def golden_clones():
    return golden.sequence_records(golden.CLONE_SEQUENCES)


@pytest.fixture(scope="session")
def golden_probes():
    return golden.sequence_records(golden.PROBE_SEQUENCES)


def random_instance(rng: np.random.Generator, max_m: int = 12, max_n: int = 8):
    """Small random instance for property tests (may contain zero rows)."""
    from balancedcover import Instance

    m = int(rng.integers(1, max_m + 1))
    n = int(rng.integers(1, max_n + 1))
    adjacency = (rng.random((m, n)) < rng.uniform(0.1, 0.9)).astype(np.int8)
    return Instance(adjacency)
