from abc import ABC, abstractmethod
from dataclasses import dataclass, field
import math
from typing import Callable, Sequence

import numpy as np

from .errors import DimensionError

# objective(x, z): continuous coordinates, discrete choice indices -> value to maximize
Objective = Callable[[np.ndarray, tuple[int, ...]], float]


@dataclass(frozen=True, eq=False)
class SearchSpace:
    """Box of continuous variables times a product of finite choice sets."""

    lower: np.ndarray
    upper: np.ndarray
    choices: tuple[int, ...] = ()

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float).reshape(-1)
        upper = np.asarray(self.upper, dtype=float).reshape(-1)
        if lower.shape != upper.shape or np.any(upper < lower):
            raise DimensionError("search bounds must pair up with lower <= upper")
        if any(k < 1 for k in self.choices):
            raise DimensionError(f"every discrete variable needs a choice, got {self.choices}")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "choices", tuple(int(k) for k in self.choices))

    @property
    def num_continuous(self) -> int:
        return self.lower.size

    @property
    def num_discrete(self) -> int:
        return len(self.choices)

    @property
    def discrete_count(self) -> int:
        return math.prod(self.choices)

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower


@dataclass
class SearchOutcome:
    value: float
    x: np.ndarray
    z: tuple[int, ...]
    method: str
    evaluations: int = 0
    iterations: int = 0
    trace: list[float] = field(default_factory=list)


class SearchBackend(ABC):
    """A maximizer over a mixed continuous/discrete SearchSpace."""

    name: str = "abstract"

    @abstractmethod
    def maximize(
        self,
        objective: Objective,
        space: SearchSpace,
        warm_starts: Sequence[tuple[np.ndarray, tuple[int, ...]]] = (),
    ) -> SearchOutcome:
        """Return the best point found. Values are lower bounds on the true maximum."""
        pass
