"""(p, beta) grid scans over the hedge-or-not family."""

from dataclasses import dataclass, field, replace
from functools import partial
import logging
import math
from typing import Optional, Sequence

from .behaviors import expected_utility
from .classical import classical_value
from .config import SolverConfig
from .errors import InputError, RangeError
from .lossy import threshold_efficiency
from .models import TcProblem
from .noise import factorizable_rank_behavior, robustness
from .parallel import parallel_map
from .problems import make_hedge_or_not
from .quantum import quantum_value

logger = logging.getLogger(__name__)

GAP_TOL = 1e-9
QUANTITIES = ("gap", "eta_star", "robustness", "noisy_gap")


@dataclass(frozen=True)
class GapReport:
    classical: float
    quantum: float
    u_fact: float

    @property
    def gap(self) -> float:
        return max(0.0, self.quantum - self.classical)

    @property
    def gapped(self) -> bool:
        return self.gap > GAP_TOL

    def noisy_gap(self, nu: float) -> float:
        """Advantage left under depolarizing weight nu; 0 when at most GAP_TOL."""
        advantage = (1.0 - nu) * self.quantum + nu * self.u_fact - self.classical
        return advantage if self.gapped and advantage > GAP_TOL else 0.0


def gap(problem: TcProblem, config: Optional[SolverConfig] = None) -> GapReport:
    """q* - c* together with the factorizable utility of the best quantum strategy."""
    config = config or SolverConfig()
    c_star = classical_value(problem, config).value
    report = quantum_value(problem, config=config)
    u_fact = expected_utility(problem, factorizable_rank_behavior(report.strategy))
    return GapReport(classical=c_star, quantum=report.value, u_fact=u_fact)


def grid_values(start: float, stop: float, step: float) -> list[float]:
    """start, start + step, ... up to stop inclusive, rounded to absorb float drift."""
    if step <= 0:
        raise RangeError(f"step must be > 0, got {step}")
    if not 0.0 <= start <= stop <= 1.0:
        raise RangeError(f"range [{start}, {stop}] must lie within [0, 1]")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 12) for k in range(count)]


@dataclass(frozen=True)
class ScanSpec:
    quantity: str
    p_range: tuple[float, float, float] = (0.0, 1.0, 0.1)
    beta_range: tuple[float, float, float] = (0.0, 1.0, 0.1)
    nu: float = 0.0
    config: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise InputError(f"unknown scan quantity {self.quantity!r}; choose one of {QUANTITIES}")
        if not 0.0 <= self.nu <= 1.0:
            raise RangeError(f"nu must lie in [0, 1], got {self.nu}")
        grid_values(*self.p_range)
        grid_values(*self.beta_range)

    @property
    def cells(self) -> list[tuple[float, float]]:
        """Row order: p outer, beta inner."""
        return [(p, b) for p in grid_values(*self.p_range) for b in grid_values(*self.beta_range)]


@dataclass(frozen=True)
class ScanRow:
    p: float
    beta: float
    value: float


def _cell_value(quantity: str, nu: float, config: SolverConfig, cell: tuple[float, float]) -> float:
    p, beta = cell
    problem = make_hedge_or_not(p, beta)
    report = gap(problem, config)
    if quantity == "gap":
        value = report.gap if report.gapped else 0.0
    elif quantity == "robustness":
        value = robustness(report.quantum, report.classical, report.u_fact) if report.gapped else 0.0
    elif quantity == "noisy_gap":
        value = report.noisy_gap(nu)
    else:
        value = threshold_efficiency(problem, config).eta_star if report.gapped else 1.0
    logger.debug("cell p=%g beta=%g: %s = %.9g", p, beta, quantity, value)
    return value


def scan(spec: ScanSpec) -> list[ScanRow]:
    """Evaluate one quantity per cell; cells run in parallel, rows stay in grid order."""
    cells = spec.cells
    inner = replace(spec.config, workers=1)
    work = partial(_cell_value, spec.quantity, spec.nu, inner)
    values = parallel_map(work, cells, spec.config.workers)
    return [ScanRow(p, b, v) for (p, b), v in zip(cells, values)]


def _cell_gap(config: SolverConfig, cell: tuple[float, float]) -> GapReport:
    return gap(make_hedge_or_not(*cell), config)


def noisy_gap_scan(
    p_values: Sequence[float],
    beta_values: Sequence[float],
    nus: Sequence[float],
    config: Optional[SolverConfig] = None,
) -> dict[float, list[ScanRow]]:
    """
    Noisy advantage grids for several noise levels. Each cell is solved once and
    shared by every level, so the gapped regions nest exactly.
    """
    config = config or SolverConfig()
    for nu in nus:
        if not 0.0 <= nu <= 1.0:
            raise RangeError(f"nu must lie in [0, 1], got {nu}")
    cells = [(p, b) for p in p_values for b in beta_values]
    reports = parallel_map(partial(_cell_gap, replace(config, workers=1)), cells, config.workers)
    return {
        nu: [ScanRow(p, b, r.noisy_gap(nu)) for (p, b), r in zip(cells, reports)]
        for nu in nus
    }
