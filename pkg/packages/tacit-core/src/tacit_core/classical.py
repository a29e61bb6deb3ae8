"""Exhaustive search over deterministic strategies."""

from dataclasses import dataclass
from functools import partial
import logging
from typing import Optional

import numpy as np

from .config import SolverConfig
from .errors import BudgetExceeded
from .models import DeterministicStrategy, TcProblem
from .parallel import parallel_map

logger = logging.getLogger(__name__)

CHUNK = 1 << 16


@dataclass(frozen=True)
class ClassicalReport:
    value: float
    strategy: DeterministicStrategy
    num_strategies_searched: int


def strategy_values(
    weights: np.ndarray,
    obs_sizes: tuple[int, ...],
    dec_sizes: tuple[int, ...],
    indices: np.ndarray,
) -> np.ndarray:
    """Expected utilities of the strategies with the given canonical indices."""
    digits = np.unravel_index(indices, DeterministicStrategy.radices(obs_sizes, dec_sizes))
    offsets = np.cumsum((0,) + obs_sizes[:-1])
    values = np.zeros(len(indices))
    for row, joint_obs in enumerate(np.ndindex(*obs_sizes)):
        decisions = [digits[offsets[i] + o] for i, o in enumerate(joint_obs)]
        columns = np.ravel_multi_index(decisions, dec_sizes)
        values += weights[row, columns]
    return values


def _search_range(
    weights: np.ndarray,
    obs_sizes: tuple[int, ...],
    dec_sizes: tuple[int, ...],
    bounds: tuple[int, int],
) -> tuple[float, int]:
    best_value, best_index = -np.inf, -1
    for start in range(bounds[0], bounds[1], CHUNK):
        indices = np.arange(start, min(start + CHUNK, bounds[1]))
        values = strategy_values(weights, obs_sizes, dec_sizes, indices)
        k = int(np.argmax(values))
        # strict comparison keeps the lowest index on ties
        if values[k] > best_value:
            best_value, best_index = float(values[k]), int(indices[k])
    return best_value, best_index


def classical_value(
    problem: TcProblem,
    config: Optional[SolverConfig] = None,
) -> ClassicalReport:
    """
    Classical value c* by enumerating every deterministic strategy.

    Ties go to the lowest canonical strategy index, so the report does not
    depend on `config.workers`.
    """
    config = config or SolverConfig()
    count = DeterministicStrategy.count(problem.obs_sizes, problem.dec_sizes)
    if count > config.classical_budget:
        raise BudgetExceeded("classical enumeration", count, config.classical_budget)

    parts = max(1, min(config.workers, count // CHUNK + 1))
    edges = np.linspace(0, count, parts + 1).astype(np.int64)
    ranges = [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    logger.debug("enumerating %d strategies in %d range(s)", count, len(ranges))

    search = partial(_search_range, problem.weights, problem.obs_sizes, problem.dec_sizes)
    results = parallel_map(search, ranges, config.workers)
    value, index = min(results, key=lambda r: (-r[0], r[1]))

    strategy = DeterministicStrategy.from_index(index, problem.obs_sizes, problem.dec_sizes)
    return ClassicalReport(value=value, strategy=strategy, num_strategies_searched=count)
