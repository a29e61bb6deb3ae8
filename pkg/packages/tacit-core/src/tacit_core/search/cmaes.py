import logging
import math
from typing import Optional, Sequence
import warnings

import cma
import numpy as np
from scipy.stats import norm

from ..errors import RangeError
from ..interfaces import Objective, SearchBackend, SearchOutcome, SearchSpace
from ..parallel import parallel_map
from .local import nelder_mead

logger = logging.getLogger(__name__)


def margin_std(alpha: float) -> float:
    """Standard deviation leaving a unit rounding cell with probability alpha from its center."""
    if not 0.0 < alpha < 1.0:
        raise RangeError(f"margin must lie in (0, 1), got {alpha}")
    return float(0.5 / norm.ppf(1.0 - alpha / 2.0))


class _Encoded:
    """Objective over the flat CMA-ES vector: continuous coordinates, then rounded choices."""

    def __init__(self, objective: Objective, space: SearchSpace):
        self.objective = objective
        self.space = space

    def split(self, y: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
        v = self.space.num_continuous
        raw = np.asarray(y[v : v + self.space.num_discrete])
        z = tuple(int(min(max(round(r), 0), k - 1)) for r, k in zip(raw, self.space.choices))
        return np.asarray(y[:v], dtype=float), z

    def __call__(self, y: np.ndarray) -> float:
        x, z = self.split(y)
        return float(self.objective(x, z))


class CmaesSearch(SearchBackend):
    """
    Mixed-variable CMA-ES (pycma) with independent restarts. Discrete variables
    are relaxed to [-0.5, k - 0.5] and rounded. Each one keeps a marginal standard
    deviation of at least margin_std(margin), so a sample lands in another choice
    with probability at least `margin` (default 1 / (dimension * popsize)). The
    floor goes through pycma's `minstd`: the step is widened, and the mean is
    never moved toward a cell edge as margin-corrected CMA-ES does.
    """

    name = "cmaes"

    def __init__(
        self,
        restarts: int = 5,
        popsize: Optional[int] = None,
        seed: int = 0,
        budget: int = 1_000_000,
        xtol: float = 1e-10,
        workers: int = 1,
        margin: Optional[float] = None,
    ):
        self.restarts = restarts
        self.popsize = popsize
        self.seed = seed
        self.budget = budget
        self.xtol = xtol
        self.workers = workers
        self.margin = margin

    def maximize(
        self,
        objective: Objective,
        space: SearchSpace,
        warm_starts: Sequence[tuple[np.ndarray, tuple[int, ...]]] = (),
    ) -> SearchOutcome:
        encoded = _Encoded(objective, space)
        lower = np.concatenate([space.lower, np.full(space.num_discrete, -0.5)])
        upper = np.concatenate([space.upper, np.array(space.choices, dtype=float) - 0.5])
        dim = lower.size
        if dim == 0:
            value = encoded(np.zeros(0))
            return SearchOutcome(value, np.zeros(0), (), self.name, evaluations=1, trace=[value])

        # pycma needs at least two coordinates
        padded = dim < 2
        if padded:
            lower, upper = np.append(lower, -1.0), np.append(upper, 1.0)
        stds = np.maximum((upper - lower) / 4, 1e-3)
        popsize = self.popsize or 4 + int(3 * math.log(dim))
        integer_variables = list(range(space.num_continuous, dim))
        minstd = np.zeros(lower.size)
        if integer_variables:
            minstd[integer_variables] = margin_std(self.margin or 1.0 / (dim * popsize))
        seeds = [int(s.generate_state(1)[0]) % (2**31 - 2) + 1 for s in np.random.SeedSequence(self.seed).spawn(self.restarts)]

        warm = [np.concatenate([np.asarray(x, dtype=float), np.asarray(z, dtype=float)]) for x, z in warm_starts]
        best_value, best_y = -np.inf, None
        evaluations, iterations, trace = 0, 0, []
        for restart, seed in enumerate(seeds):
            x0 = warm[restart] if restart < len(warm) else (lower + upper) / 2
            if padded and x0.size < lower.size:
                x0 = np.append(x0, 0.0)
            options = {
                "bounds": [lower.tolist(), upper.tolist()],
                "CMA_stds": stds.tolist(),
                "popsize": popsize,
                "seed": seed,
                "maxfevals": max(self.budget // self.restarts, popsize),
                "tolfun": 1e-12,
                "tolx": 1e-12,
                "verbose": -9,
            }
            if integer_variables:
                options["integer_variables"] = integer_variables
                options["minstd"] = minstd.tolist()
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                es = cma.CMAEvolutionStrategy(np.clip(x0, lower, upper).tolist(), 1.0, options)
                while not es.stop():
                    candidates = es.ask()
                    values = parallel_map(encoded, [np.asarray(c[:dim]) for c in candidates], self.workers)
                    es.tell(candidates, [-v for v in values])
                    for c, v in zip(candidates, values):
                        if v > best_value:
                            best_value, best_y = v, np.asarray(c[:dim])
            evaluations += es.countevals
            iterations += es.countiter
            trace.append(best_value)
            logger.debug("cmaes restart %d (seed %d): best %.12g", restart, seed, best_value)

        x, z = encoded.split(best_y)
        polished = nelder_mead(objective, (x, z), step=np.maximum(space.span / 40, 1e-3), xtol=self.xtol)
        evaluations += polished.evaluations
        if polished.value > best_value:
            best_value, x = polished.value, polished.x
        return SearchOutcome(
            value=float(best_value),
            x=np.asarray(x, dtype=float),
            z=z,
            method=self.name,
            evaluations=evaluations,
            iterations=iterations + polished.iterations,
            trace=trace,
        )
