import numpy as np
import pytest

SQRT_41_OVER_2 = np.sqrt(41 / 2)  # 4.527692569068709
SQRT_9_OVER_2 = np.sqrt(9 / 2)


def shift3() -> np.ndarray:
    """The 3x3 weighted shift behind the counterexample pair."""
    return np.array([[0, 3, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)


def unit_matrix(dim: int, i: int, j: int) -> np.ndarray:
    e = np.zeros((dim, dim), dtype=complex)
    e[i, j] = 1.0
    return e


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
