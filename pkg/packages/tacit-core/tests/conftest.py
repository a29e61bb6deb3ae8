import numpy as np
import pytest

from tacit_core import DeterministicStrategy, QuantumStrategy, SolverConfig, make_chsh, make_hedge_or_not


def qubit_projectors(theta: float) -> np.ndarray:
    """(2, 2, 2) projectors onto cos(t)|0> + sin(t)|1> and its orthogonal complement."""
    up = np.array([np.cos(theta), np.sin(theta)])
    down = np.array([-np.sin(theta), np.cos(theta)])
    return np.stack([np.outer(up, up), np.outer(down, down)]).astype(complex)


def chsh_optimal_strategy() -> QuantumStrategy:
    """Tsirelson-optimal qubit strategy for make_chsh(0.5)."""
    alice = np.stack([qubit_projectors(0.0), qubit_projectors(np.pi / 4)])
    bob = np.stack([qubit_projectors(np.pi / 8), qubit_projectors(-np.pi / 8)])
    phi_plus = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    return QuantumStrategy((2, 2), (alice, bob), phi_plus)


@pytest.fixture
def hedge():
    return make_hedge_or_not(0.3, 0.3)


@pytest.fixture
def chsh():
    return make_chsh(0.5)


@pytest.fixture
def hedge_witness(hedge):
    """Party 1 always B; party 2 answers A on N and B on I."""
    return DeterministicStrategy.from_labels(hedge, [{"N": "B", "I": "B"}, {"N": "A", "I": "B"}])


@pytest.fixture
def chsh_strategy():
    return chsh_optimal_strategy()


@pytest.fixture
def fast_config():
    return SolverConfig(grid_size=9, refine_top=4)


@pytest.fixture
def worked_strategy():
    """Computational basis on N, a basis rotated by 0.590 rad on I, for both parties."""
    party = np.stack([qubit_projectors(0.0), qubit_projectors(0.590)])
    return QuantumStrategy((2, 2), (party, party.copy()))


@pytest.fixture
def worked_fallback(hedge):
    """Party 1 always asks first, party 2 always bids first."""
    return DeterministicStrategy.from_labels(hedge, [{"N": "A", "I": "A"}, {"N": "B", "I": "B"}])
