import numpy as np
import pytest

from cyclewalk import CoinParams, parrondo_schedule


def phase_aligned(u: np.ndarray, v: np.ndarray) -> float:
    """Frobenius distance after aligning a global phase."""
    overlap = np.trace(u.conj().T @ v)
    if abs(overlap) < 1e-14:
        return float(np.linalg.norm(u - v))
    return float(np.linalg.norm(u * np.exp(1j * np.angle(overlap)) - v))


@pytest.fixture
def coins_4cycle():
    return {"A": CoinParams(0.998489), "B": CoinParams(0.119545)}


@pytest.fixture
def coins_3cycle():
    return {"A": CoinParams(0.264734), "B": CoinParams(0.801571)}


@pytest.fixture
def schedule_4cycle(coins_4cycle):
    return parrondo_schedule("AABB", coins_4cycle, 25)


@pytest.fixture
def schedule_3cycle(coins_3cycle):
    return parrondo_schedule("AABB", coins_3cycle, 25)


def ground_state(width: int) -> np.ndarray:
    state = np.zeros(1 << width, dtype=complex)
    state[0] = 1.0
    return state
