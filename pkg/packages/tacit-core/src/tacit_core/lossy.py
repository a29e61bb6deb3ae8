"""Entanglement loss: parties that lose their particle fall back to a deterministic strategy."""

from dataclasses import dataclass, field
import itertools
import logging
from typing import Optional, Sequence, Union

import numpy as np

from .classical import classical_value
from .config import SolverConfig
from .errors import DimensionError, InputError, RangeError
from .models import Behavior, DeterministicStrategy, QuantumStrategy, TcProblem
from .parameterization import MeasurementParams, ParamSpace, blend_with_fallback, fallback_operators
from .quantum import (
    BellObjective,
    BellOperator,
    bell_operator,
    check_dims,
    default_dims,
    largest_eigenvalue,
    measurement_statistics,
    optimize,
)

logger = logging.getLogger(__name__)

MONOTONE_TOL = 1e-6
LOWER_BRACKET_222 = 2.0 / 3.0


@dataclass(frozen=True)
class LossModel:
    efficiencies: tuple[float, ...]
    fallback: Optional[DeterministicStrategy] = None

    def __post_init__(self):
        efficiencies = tuple(float(eta) for eta in self.efficiencies)
        for i, eta in enumerate(efficiencies):
            if not 0.0 <= eta <= 1.0:
                raise RangeError(f"party {i}: efficiency must lie in [0, 1], got {eta}")
        if self.fallback is not None and len(self.fallback.tables) != len(efficiencies):
            raise DimensionError("fallback strategy and efficiencies must cover the same parties")
        object.__setattr__(self, "efficiencies", efficiencies)

    @classmethod
    def uniform(cls, eta: float, n: int, fallback: Optional[DeterministicStrategy] = None) -> "LossModel":
        return cls((eta,) * n, fallback)

    def with_fallback(self, fallback: DeterministicStrategy) -> "LossModel":
        return LossModel(self.efficiencies, fallback)


def subset_weights(efficiencies: Sequence[float]) -> list[tuple[tuple[int, ...], float]]:
    """(S, prod_{i in S}(1 - eta_i) prod_{j not in S} eta_j) for every subset S of lost parties."""
    n = len(efficiencies)
    out = []
    for lost in itertools.product((False, True), repeat=n):
        subset = tuple(i for i in range(n) if lost[i])
        weight = 1.0
        for i, eta in enumerate(efficiencies):
            weight *= (1.0 - eta) if lost[i] else eta
        out.append((subset, weight))
    return out


def semiclassical_measurements(
    measurements: Sequence[np.ndarray], fallback: DeterministicStrategy, subset: Sequence[int]
) -> tuple[np.ndarray, ...]:
    """Parties in `subset` swap their projectors for the fallback's trivial ones."""
    if len(fallback.tables) != len(measurements):
        raise DimensionError("fallback strategy and measurements must cover the same parties")
    out = []
    for i, ops in enumerate(measurements):
        ops = np.asarray(ops, dtype=complex)
        if i in subset:
            ops = fallback_operators(fallback.tables[i], ops.shape[1], ops.shape[-1])
        out.append(ops)
    return tuple(out)


def _model(loss: Union[LossModel, float], n: int) -> LossModel:
    if isinstance(loss, LossModel):
        model = loss
    else:
        model = LossModel.uniform(loss, n)
    if len(model.efficiencies) != n:
        raise DimensionError(f"{len(model.efficiencies)} efficiencies for a {n}-party problem")
    return model


def lossy_bell_operator(
    problem: TcProblem,
    measurements: Sequence[np.ndarray],
    fallback: Optional[DeterministicStrategy],
    loss: Union[LossModel, float],
) -> BellOperator:
    """
    Subset-weighted sum of semiclassical Bell operators, assembled party by party.
    `fallback` defaults to the loss model's own.
    """
    model = _model(loss, problem.n)
    return bell_operator(problem, blend_with_fallback(measurements, fallback or model.fallback, model.efficiencies))


def lossy_behavior(
    strategy: QuantumStrategy, fallback: Optional[DeterministicStrategy], loss: Union[LossModel, float]
) -> Behavior:
    if strategy.state is None:
        raise InputError("strategy has no state")
    model = _model(loss, strategy.n)
    ops = blend_with_fallback(strategy.measurements, fallback or model.fallback, model.efficiencies)
    return Behavior(measurement_statistics(ops, strategy.state), strategy.obs_sizes, strategy.dec_sizes)


@dataclass
class LossyReport:
    value: float
    strategy: QuantumStrategy
    fallback: DeterministicStrategy
    efficiencies: tuple[float, ...]
    params: MeasurementParams
    method: str
    seed: int
    evaluations: int
    iterations: int
    method_values: dict[str, float] = field(default_factory=dict)
    trace: list[float] = field(default_factory=list)
    x: np.ndarray = field(default_factory=lambda: np.zeros(0))
    z: tuple[int, ...] = ()

    @property
    def warm_start(self) -> tuple[np.ndarray, tuple[int, ...]]:
        return self.x, self.z


def lossy_value(
    problem: TcProblem,
    loss: Union[LossModel, float],
    config: Optional[SolverConfig] = None,
    dims: Optional[Sequence[int]] = None,
    warm_starts: Sequence[tuple[np.ndarray, tuple[int, ...]]] = (),
) -> LossyReport:
    """
    Best lossy Bell-operator eigenvalue, optimizing measurements, partitions and
    the fallback tables jointly.
    """
    config = config or SolverConfig()
    model = _model(loss, problem.n)
    dims = check_dims(problem, dims or default_dims(problem))
    space = ParamSpace.for_problem(dims, problem.obs_sizes, problem.dec_sizes, config.reduce, with_fallback=True)
    objective = BellObjective.for_problem(problem, space, model.efficiencies)

    best, method_values = optimize(objective, config, warm_starts)
    params, fallback, ops = objective.local_operators(best.x, best.z)
    pair = largest_eigenvalue(bell_operator(problem, ops))
    strategy = QuantumStrategy(dims, params.measurements(), pair.vector)
    logger.info("lossy value %.10g at efficiencies %s", pair.value, model.efficiencies)
    return LossyReport(
        value=pair.value,
        strategy=strategy,
        fallback=fallback,
        efficiencies=model.efficiencies,
        params=params,
        method=best.method,
        seed=config.seed,
        evaluations=best.evaluations,
        iterations=best.iterations,
        method_values=method_values,
        trace=best.trace,
        x=best.x,
        z=best.z,
    )


@dataclass
class ThresholdReport:
    eta_star: float
    gapless: bool
    classical_value: float
    quantum_value: float
    bracket: tuple[float, float]
    bracket_valid: bool
    monotone: bool
    samples: list[tuple[float, float]] = field(default_factory=list)
    best: Optional[LossyReport] = None


def threshold_efficiency(
    problem: TcProblem,
    config: Optional[SolverConfig] = None,
    dims: Optional[Sequence[int]] = None,
) -> ThresholdReport:
    """
    Smallest uniform efficiency with a lossy advantage over the classical value,
    found by bisection to `config.eta_tol`. Gapless problems get eta* = 1.
    """
    config = config or SolverConfig()
    epsilon = config.gap_epsilon
    c_star = classical_value(problem, config).value

    samples: list[tuple[float, float]] = []

    def solve(eta: float, warm: Sequence = ()) -> LossyReport:
        report = lossy_value(problem, eta, config, dims, warm)
        samples.append((eta, report.value))
        return report

    top = solve(1.0)
    lower = LOWER_BRACKET_222 if problem.shape_tag == (2, 2, 2) else 0.0
    if top.value - c_star <= epsilon:
        return ThresholdReport(1.0, True, c_star, top.value, (lower, 1.0), True, True, samples, top)

    floor = solve(lower, [top.warm_start])
    if floor.value - c_star > epsilon:
        logger.warning(
            "advantage already at efficiency %.4g (value %.10g > %.10g); bisection bracket is invalid",
            lower,
            floor.value,
            c_star,
        )
        return ThresholdReport(lower, False, c_star, top.value, (lower, 1.0), False, True, samples, floor)

    lo, hi, best = lower, 1.0, top
    while hi - lo > config.eta_tol:
        mid = (lo + hi) / 2
        report = solve(mid, [best.warm_start])
        if report.value - c_star > epsilon:
            hi, best = mid, report
        else:
            lo = mid
        logger.debug("bisection bracket [%.6f, %.6f]", lo, hi)

    ordered = sorted(samples)
    monotone = all(b[1] >= a[1] - MONOTONE_TOL for a, b in zip(ordered, ordered[1:]))
    if not monotone:
        logger.warning("lossy values are not monotone in the efficiency: %s", ordered)
    return ThresholdReport(hi, False, c_star, top.value, (lower, 1.0), True, monotone, samples, best)
