from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, UnsupportedError
from .models import Behavior, CorrelationMatrix, DeterministicStrategy, TcProblem


@dataclass(frozen=True)
class NoSignalingReport:
    ok: bool
    max_violation: float


@dataclass(frozen=True)
class LocalPolytopeReport:
    """`margin` is max |S| - 2 over the signed CHSH combinations."""

    inside: bool
    margin: float
    min_entry: float


def _check_shapes(problem: TcProblem, obs_sizes, dec_sizes) -> None:
    if tuple(obs_sizes) != problem.obs_sizes or tuple(dec_sizes) != problem.dec_sizes:
        raise DimensionError(
            f"shape {tuple(obs_sizes)}x{tuple(dec_sizes)} does not match problem "
            f"{problem.obs_sizes}x{problem.dec_sizes}"
        )


def expected_utility(problem: TcProblem, behavior: Behavior) -> float:
    _check_shapes(problem, behavior.obs_sizes, behavior.dec_sizes)
    return float(np.einsum("o,od,od->", problem.input_dist, problem.utility, behavior.p))


def product_behavior(local: Sequence[np.ndarray]) -> Behavior:
    """Behavior of independent parties; local[i] is an (|O_i|, |D_i|) stochastic matrix."""
    local = [np.asarray(m, dtype=float) for m in local]
    tensor = local[0]
    for matrix in local[1:]:
        tensor = np.multiply.outer(tensor, matrix)
    n = len(local)
    # axes come out as (o1, d1, o2, d2, ...)
    tensor = tensor.transpose(list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2)))
    obs_sizes = tuple(m.shape[0] for m in local)
    dec_sizes = tuple(m.shape[1] for m in local)
    return Behavior(tensor.reshape(int(np.prod(obs_sizes)), -1), obs_sizes, dec_sizes)


def deterministic_behavior(problem: TcProblem, strategy: DeterministicStrategy) -> Behavior:
    _check_shapes(problem, strategy.obs_sizes, strategy.dec_sizes)
    return product_behavior(strategy.local_matrices())


def check_no_signaling(behavior: Behavior, tol: float = 1e-9) -> NoSignalingReport:
    """
    For every party i, the distribution of the other parties' decisions must not
    depend on o_i.
    """
    tensor = behavior.tensor
    n = len(behavior.obs_sizes)
    worst = 0.0
    for i in range(n):
        marginal = tensor.sum(axis=n + i)
        worst = max(worst, float(np.max(np.ptp(marginal, axis=i))))
    return NoSignalingReport(ok=worst <= tol, max_violation=worst)


def _require_binary_pair(behavior: Behavior) -> None:
    if len(behavior.obs_sizes) != 2:
        raise UnsupportedError(f"need a two-party behavior, got {len(behavior.obs_sizes)} parties")
    if behavior.dec_sizes != (2, 2):
        raise UnsupportedError(f"need binary decisions, got {behavior.dec_sizes}")


def correlation_matrix(behavior: Behavior) -> CorrelationMatrix:
    _require_binary_pair(behavior)
    tensor = behavior.tensor
    same = tensor[..., 0, 0] + tensor[..., 1, 1]
    return CorrelationMatrix(2.0 * same - 1.0)


def chsh_combinations(c: np.ndarray) -> np.ndarray:
    """The 8 signed sums ±(c00 + c01 + c10 + c11) with exactly one term negated."""
    flat = np.asarray(c, dtype=float).reshape(-1)
    sums = [flat.sum() - 2.0 * flat[k] for k in range(4)]
    return np.array(sums + [-s for s in sums])


def check_local_polytope_222(behavior: Behavior, tol: float = 1e-9) -> LocalPolytopeReport:
    if behavior.obs_sizes != (2, 2) or behavior.dec_sizes != (2, 2):
        raise DimensionError(f"need a (2,2,2) behavior, got {behavior.obs_sizes}x{behavior.dec_sizes}")
    c = correlation_matrix(behavior).c
    margin = float(np.max(chsh_combinations(c))) - 2.0
    min_entry = float(behavior.p.min())
    return LocalPolytopeReport(inside=margin <= tol and min_entry >= -tol, margin=margin, min_entry=min_entry)


def uniform_behavior(obs_sizes: Sequence[int], dec_sizes: Sequence[int]) -> Behavior:
    return product_behavior([np.full((o, d), 1.0 / d) for o, d in zip(obs_sizes, dec_sizes)])
