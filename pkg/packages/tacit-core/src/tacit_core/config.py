from dataclasses import dataclass, fields, replace
from typing import Optional

from .errors import InputError, RangeError

METHODS = ("grid", "cmaes", "both")


@dataclass(frozen=True)
class SolverConfig:
    """
    Knobs shared by the quantum, lossy and noisy solvers.

    `budget` caps objective evaluations of one optimization; `classical_budget`
    caps the number of deterministic strategies enumerated.
    """

    method: str = "grid"
    grid_size: int = 20
    refine_top: Optional[int] = 8
    xtol: float = 1e-10
    restarts: int = 5
    popsize: Optional[int] = None
    seed: int = 0
    budget: int = 1_000_000
    classical_budget: int = 100_000_000
    reduce: bool = True
    workers: int = 1
    eta_tol: float = 1e-3
    gap_epsilon: float = 1e-7

    def __post_init__(self):
        if self.method not in METHODS:
            raise InputError(f"unknown method {self.method!r}; choose one of {METHODS}")
        if self.grid_size < 1:
            raise RangeError(f"grid_size must be >= 1, got {self.grid_size}")
        if self.refine_top is not None and self.refine_top < 0:
            raise RangeError(f"refine_top must be >= 0, got {self.refine_top}")
        if self.restarts < 1:
            raise RangeError(f"restarts must be >= 1, got {self.restarts}")
        if self.popsize is not None and self.popsize < 2:
            raise RangeError(f"popsize must be >= 2, got {self.popsize}")
        if self.budget < 1 or self.classical_budget < 1:
            raise RangeError("budgets must be positive")
        if self.workers < 1:
            raise RangeError(f"workers must be >= 1, got {self.workers}")
        if not 0 < self.eta_tol < 1:
            raise RangeError(f"eta_tol must lie in (0, 1), got {self.eta_tol}")
        if self.gap_epsilon < 0 or self.xtol <= 0:
            raise RangeError("gap_epsilon must be >= 0 and xtol > 0")

    @classmethod
    def from_dict(cls, data: dict) -> "SolverConfig":
        """Factory that rejects keys it does not know."""
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InputError(f"unknown solver config keys: {unknown}")
        return cls(**data)

    def update(self, **overrides) -> "SolverConfig":
        """Copy with the non-None overrides applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})
