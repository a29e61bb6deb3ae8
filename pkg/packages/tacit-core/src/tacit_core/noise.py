"""Depolarizing noise on the shared state and the robustness it allows."""

from dataclasses import dataclass
import logging

import numpy as np

from .behaviors import expected_utility, product_behavior
from .errors import InputError, RangeError, UnsupportedError
from .models import Behavior, QuantumStrategy, TcProblem
from .quantum import behavior_of

logger = logging.getLogger(__name__)

GAP_TOL = 1e-9


@dataclass(frozen=True)
class NoiseModel:
    nu: float

    def __post_init__(self):
        if not 0.0 <= self.nu <= 1.0:
            raise RangeError(f"depolarizing weight must lie in [0, 1], got {self.nu}")


def _nu(noise) -> float:
    return noise.nu if isinstance(noise, NoiseModel) else NoiseModel(float(noise)).nu


def factorizable_rank_behavior(strategy: QuantumStrategy) -> Behavior:
    """Behavior on the maximally mixed state: prod_i rank(P_i(d_i|o_i)) / q_i."""
    local = []
    for q, ops in zip(strategy.dims, strategy.measurements):
        ranks = np.rint(np.einsum("odii->od", ops).real)
        local.append(ranks / q)
    return product_behavior(local)


def noisy_behavior(strategy: QuantumStrategy, noise) -> Behavior:
    nu = _nu(noise)
    return Behavior.mixture([1.0 - nu, nu], [behavior_of(strategy), factorizable_rank_behavior(strategy)])


def noisy_expected_utility(problem: TcProblem, strategy: QuantumStrategy, noise) -> float:
    nu = _nu(noise)
    clean = expected_utility(problem, behavior_of(strategy))
    mixed = expected_utility(problem, factorizable_rank_behavior(strategy))
    return (1.0 - nu) * clean + nu * mixed


def robustness(q_star: float, c_star: float, u_fact: float = 0.5) -> float:
    """
    Largest nu with (1 - nu) q* + nu u_fact >= c*, clamped to [0, 1].
    Gapless inputs give 0.
    """
    if q_star - c_star <= GAP_TOL:
        return 0.0
    if q_star <= u_fact:
        raise InputError(f"robustness is undefined when q* ({q_star}) does not exceed u_fact ({u_fact})")
    return float(min(max((q_star - c_star) / (q_star - u_fact), 0.0), 1.0))


def strategy_robustness(problem: TcProblem, strategy: QuantumStrategy, c_star: float) -> float:
    """Robustness of a specific strategy, using its own factorizable utility."""
    q = expected_utility(problem, behavior_of(strategy))
    u_fact = expected_utility(problem, factorizable_rank_behavior(strategy))
    return robustness(q, c_star, u_fact)


def ququart_lift(strategy: QuantumStrategy) -> QuantumStrategy:
    """
    Append a |0> ancilla to every party: decision 0 becomes P0 (x) |0><0| and
    decision 1 its complement. Noiseless statistics are unchanged while the
    factorizable rank behavior moves away from uniform.
    """
    if any(d != 2 for d in strategy.dec_sizes):
        raise UnsupportedError("the rank lift needs binary decisions")
    if strategy.state is None:
        raise InputError("strategy has no state")
    ancilla = np.diag([1.0, 0.0])
    measurements = []
    for q, ops in zip(strategy.dims, strategy.measurements):
        lifted = np.empty((ops.shape[0], 2, 2 * q, 2 * q), dtype=complex)
        for o in range(ops.shape[0]):
            lifted[o, 0] = np.kron(ops[o, 0], ancilla)
            lifted[o, 1] = np.eye(2 * q) - lifted[o, 0]
        measurements.append(lifted)

    n = strategy.n
    psi = np.asarray(strategy.state).reshape(strategy.dims)
    zero = np.array([1.0, 0.0])
    for _ in range(n):
        psi = np.multiply.outer(psi, zero)
    # interleave (q_1..q_n, a_1..a_n) into (q_1, a_1, ..., q_n, a_n)
    order = [axis for i in range(n) for axis in (i, n + i)]
    state = psi.transpose(order).reshape(-1)
    return QuantumStrategy(tuple(2 * q for q in strategy.dims), tuple(measurements), state)
