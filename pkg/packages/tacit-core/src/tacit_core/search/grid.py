from functools import partial
import itertools
import logging
from typing import Optional, Sequence

import numpy as np

from ..errors import BudgetExceeded
from ..interfaces import Objective, SearchBackend, SearchOutcome, SearchSpace
from ..parallel import parallel_map
from .local import nelder_mead

logger = logging.getLogger(__name__)


def _evaluate_block(objective: Objective, points: np.ndarray, task: tuple[tuple[int, ...], int, int]) -> np.ndarray:
    z, start, stop = task
    return np.array([objective(points[k], z) for k in range(start, stop)])


class GridSearch(SearchBackend):
    """
    Uniform grid over the continuous box times every discrete combination,
    followed by Nelder-Mead refinement of the best `refine_top` grid points.
    """

    name = "grid"

    def __init__(
        self,
        grid_size: int = 20,
        refine_top: Optional[int] = 8,
        xtol: float = 1e-10,
        budget: int = 1_000_000,
        workers: int = 1,
    ):
        self.grid_size = grid_size
        self.refine_top = refine_top
        self.xtol = xtol
        self.budget = budget
        self.workers = workers

    def points(self, space: SearchSpace) -> np.ndarray:
        axes = [np.linspace(lo, hi, self.grid_size) for lo, hi in zip(space.lower, space.upper)]
        if not axes:
            return np.zeros((1, 0))
        return np.array(list(itertools.product(*axes)))

    def maximize(
        self,
        objective: Objective,
        space: SearchSpace,
        warm_starts: Sequence[tuple[np.ndarray, tuple[int, ...]]] = (),
    ) -> SearchOutcome:
        num_points = self.grid_size**space.num_continuous
        count = num_points * space.discrete_count
        if count > self.budget:
            raise BudgetExceeded("grid search", count, self.budget)

        points = self.points(space)
        combos = list(itertools.product(*(range(k) for k in space.choices)))
        pieces = max(1, self.workers // len(combos)) if self.workers > 1 else 1
        edges = np.linspace(0, num_points, pieces + 1).astype(int)
        tasks = [(z, int(a), int(b)) for z in combos for a, b in zip(edges[:-1], edges[1:]) if b > a]
        logger.debug("grid: %d points x %d discrete combinations", num_points, len(combos))

        blocks = parallel_map(partial(_evaluate_block, objective, points), tasks, self.workers)
        values = np.concatenate(blocks).reshape(len(combos), num_points)

        best_z = np.argmax(values, axis=0)
        best_values = values[best_z, np.arange(num_points)]
        order = np.argsort(-best_values, kind="stable")
        if self.refine_top is not None:
            order = order[: self.refine_top]

        starts = [(points[k], combos[best_z[k]]) for k in order]
        starts += [(np.asarray(x, dtype=float), tuple(z)) for x, z in warm_starts]

        if space.num_continuous == 0:
            k = int(order[0])
            candidates = [(float(best_values[k]), points[k], combos[best_z[k]], 0, 0)]
            candidates += [(float(objective(x, z)), x, z, 1, 0) for x, z in starts[len(order):]]
        else:
            spacing = space.span / max(self.grid_size - 1, 1)
            step = np.where(spacing > 0, spacing / 2, 0.1)
            refine = partial(nelder_mead, objective, step=step, xtol=self.xtol)
            candidates = [
                (r.value, r.x, r.z, r.evaluations, r.iterations)
                for r in parallel_map(refine, starts, self.workers)
            ]

        best = max(range(len(candidates)), key=lambda k: (candidates[k][0], -k))
        value, x, z, _, _ = candidates[best]
        return SearchOutcome(
            value=value,
            x=np.asarray(x, dtype=float),
            z=tuple(int(v) for v in z),
            method=self.name,
            evaluations=count + sum(c[3] for c in candidates),
            iterations=sum(c[4] for c in candidates),
            trace=[c[0] for c in candidates],
        )
