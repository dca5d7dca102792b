import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def permutation_sign(perm) -> int:
    """Sign from the determinant of the permutation matrix."""
    n = len(perm)
    P = np.zeros((n, n))
    P[np.arange(n), list(perm)] = 1.0
    return int(round(np.linalg.det(P)))


def antisym_tensor(modes, d: int) -> np.ndarray:
    """First-quantised vector of ``a†_{m1} ... a†_{mN}|0>`` in ``(C^d)^N``.

    Convention: the leftmost operator fills the first tensor slot.
    """
    n = len(modes)
    out = np.zeros(d**n, dtype=complex)
    for perm in itertools.permutations(range(n)):
        idx = 0
        for slot in range(n):
            idx = idx * d + modes[perm[slot]]
        out[idx] += permutation_sign(perm)
    return out / np.sqrt(float(np.prod(range(1, n + 1))))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
