"""Bell operators, their top eigenpairs, and the quantum value search."""

from dataclasses import dataclass, field
import logging
import math
import string
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from .config import SolverConfig
from .errors import DimensionError, InputError, NumericalError
from .interfaces import SearchBackend, SearchOutcome
from .models import Behavior, DeterministicStrategy, QuantumStrategy, TcProblem
from .parameterization import MeasurementParams, ParamSpace, blend_with_fallback
from .search import CmaesSearch, GridSearch

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-10
INPUT_HERMITIAN_TOL = 1e-8
RESIDUAL_TOL = 1e-8
DEGENERACY_GAP = 1e-9


def _magnitude(H: np.ndarray) -> float:
    """Scale for the relative tolerances below; never under 1."""
    return max(1.0, float(np.max(np.abs(H), initial=0.0)))


@dataclass(frozen=True, eq=False)
class BellOperator:
    H: np.ndarray

    def __post_init__(self):
        H = np.asarray(self.H, dtype=complex)
        if H.ndim != 2 or H.shape[0] != H.shape[1]:
            raise DimensionError(f"Bell operator must be square, got shape {H.shape}")
        if np.max(np.abs(H - H.conj().T), initial=0.0) > HERMITIAN_TOL * _magnitude(H):
            raise InputError("Bell operator is not Hermitian")
        object.__setattr__(self, "H", H)

    @property
    def dim(self) -> int:
        return self.H.shape[0]


class Eigenpair(NamedTuple):
    value: float
    vector: np.ndarray
    degenerate: bool


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """state = sum_k coefficients[k] * left[:, k] (x) right[:, k]"""

    coefficients: np.ndarray
    left: np.ndarray
    right: np.ndarray


def _operator_subscripts(n: int) -> str:
    if 4 * n > len(string.ascii_letters):
        raise DimensionError(f"too many parties for an operator contraction: {n}")
    letters = string.ascii_letters
    obs, dec, rows, cols = (letters[k * n : (k + 1) * n] for k in range(4))
    local = [obs[i] + dec[i] + rows[i] + cols[i] for i in range(n)]
    return ",".join([obs + dec] + local) + "->" + rows + cols


def operator_sum(weights: np.ndarray, local_ops: Sequence[np.ndarray]) -> np.ndarray:
    """sum_{o,d} weights[o, d] (x)_i local_ops[i][o_i, d_i], weights given as an (obs..., dec...) tensor."""
    dim = math.prod(ops.shape[-1] for ops in local_ops)
    return np.einsum(_operator_subscripts(len(local_ops)), weights, *local_ops).reshape(dim, dim)


def measurement_statistics(local_ops: Sequence[np.ndarray], state: np.ndarray) -> np.ndarray:
    """<psi| (x)_i local_ops[i][o_i, d_i] |psi> as an (|O|, |D|) array."""
    n = len(local_ops)
    dims = tuple(ops.shape[-1] for ops in local_ops)
    letters = string.ascii_letters
    obs, dec, rows, cols = (letters[k * n : (k + 1) * n] for k in range(4))
    local = [obs[i] + dec[i] + rows[i] + cols[i] for i in range(n)]
    subscripts = ",".join([rows] + local + [cols]) + "->" + obs + dec
    psi = np.asarray(state, dtype=complex).reshape(dims)
    stats = np.einsum(subscripts, psi.conj(), *local_ops, psi).real
    num_obs = math.prod(ops.shape[0] for ops in local_ops)
    return stats.reshape(num_obs, -1)


def _check_measurements(problem: TcProblem, measurements: Sequence[np.ndarray]) -> None:
    if len(measurements) != problem.n:
        raise DimensionError(f"{len(measurements)} measurement sets for a {problem.n}-party problem")
    for i, ops in enumerate(measurements):
        shape = np.shape(ops)
        if len(shape) != 4 or shape[:2] != (problem.obs_sizes[i], problem.dec_sizes[i]) or shape[2] != shape[3]:
            raise DimensionError(
                f"party {i}: measurement shape {shape} does not fit "
                f"{problem.obs_sizes[i]} observations x {problem.dec_sizes[i]} decisions"
            )


def bell_operator(problem: TcProblem, measurements: Sequence[np.ndarray]) -> BellOperator:
    """H = sum_o p(o) sum_d u(o, d) (x)_i P_i(d_i | o_i)."""
    _check_measurements(problem, measurements)
    weights = problem.weights.reshape(problem.obs_sizes + problem.dec_sizes)
    ops = [np.asarray(m, dtype=complex) for m in measurements]
    return BellOperator(operator_sum(weights, ops))


def largest_eigenvalue(H: Union[BellOperator, np.ndarray]) -> Eigenpair:
    """
    Top eigenvalue and a unit eigenvector of a Hermitian matrix. The vector's
    largest-magnitude component is made real and positive.
    """
    H = H.H if isinstance(H, BellOperator) else np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionError(f"need a square matrix, got shape {H.shape}")
    deviation = float(np.max(np.abs(H - H.conj().T), initial=0.0))
    if deviation > INPUT_HERMITIAN_TOL * _magnitude(H):
        raise InputError(f"matrix is not Hermitian (deviation {deviation:.3e})")
    H = (H + H.conj().T) / 2
    values, vectors = scipy.linalg.eigh(H)
    value, vector = float(values[-1]), vectors[:, -1]
    norm = max(1.0, abs(float(values[0])), abs(value))
    residual = float(np.linalg.norm(H @ vector - value * vector))
    if residual > RESIDUAL_TOL * norm:
        raise NumericalError(f"eigenvector residual {residual:.3e} exceeds {RESIDUAL_TOL * norm:.3e}")
    k = int(np.argmax(np.abs(vector)))
    vector = vector * (abs(vector[k]) / vector[k])
    degenerate = len(values) > 1 and values[-1] - values[-2] < DEGENERACY_GAP * norm
    if degenerate:
        logger.debug("top eigenvalue %.12g is degenerate", value)
    return Eigenpair(value, vector, bool(degenerate))


def behavior_of(strategy: QuantumStrategy) -> Behavior:
    if strategy.state is None:
        raise InputError("strategy has no state")
    stats = measurement_statistics(strategy.measurements, strategy.state)
    return Behavior(stats, strategy.obs_sizes, strategy.dec_sizes)


def is_degenerate(strategy: QuantumStrategy, tol: float = 1e-9) -> bool:
    """True when some party uses a zero (equivalently, an identity) projector."""
    for ops in strategy.measurements:
        traces = np.einsum("odii->od", ops).real
        if np.any(traces < tol):
            return True
    return False


def schmidt_decompose(state: np.ndarray, dims: Sequence[int]) -> SchmidtDecomposition:
    """Schmidt form of the normalized bipartite state, coefficients descending."""
    if len(dims) != 2:
        raise DimensionError(f"Schmidt decomposition needs two parties, got {len(dims)}")
    psi = np.asarray(state, dtype=complex).reshape(-1)
    if psi.size != dims[0] * dims[1]:
        raise DimensionError(f"state has dimension {psi.size}, expected {dims[0] * dims[1]}")
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise InputError("cannot decompose the zero vector")
    matrix = (psi / norm).reshape(dims[0], dims[1])
    u, s, vh = scipy.linalg.svd(matrix, full_matrices=False)
    error = float(np.max(np.abs((u * s) @ vh - matrix)))
    if error > 1e-9:
        raise NumericalError(f"Schmidt reconstruction error {error:.3e}")
    return SchmidtDecomposition(coefficients=s, left=u, right=vh.T)


@dataclass(frozen=True, eq=False)
class BellObjective:
    """
    Top eigenvalue of the (optionally lossy) Bell operator at a search point.
    Module-level and free of closures so process pools can pickle it.
    """

    weights: np.ndarray
    space: ParamSpace
    efficiencies: Optional[tuple[float, ...]] = None

    @classmethod
    def for_problem(
        cls, problem: TcProblem, space: ParamSpace, efficiencies: Optional[Sequence[float]] = None
    ) -> "BellObjective":
        weights = problem.weights.reshape(problem.obs_sizes + problem.dec_sizes)
        return cls(weights, space, None if efficiencies is None else tuple(efficiencies))

    def local_operators(self, x, z) -> tuple[MeasurementParams, Optional[DeterministicStrategy], list[np.ndarray]]:
        params, fallback = self.space.decode(x, z)
        ops = list(params.measurements())
        if self.efficiencies is not None:
            ops = blend_with_fallback(ops, fallback, self.efficiencies)
        return params, fallback, ops

    def __call__(self, x, z) -> float:
        _, _, ops = self.local_operators(x, z)
        return float(np.linalg.eigvalsh(operator_sum(self.weights, ops))[-1])


def make_backends(config: SolverConfig) -> list[SearchBackend]:
    backends: list[SearchBackend] = []
    if config.method in ("grid", "both"):
        backends.append(
            GridSearch(
                grid_size=config.grid_size,
                refine_top=config.refine_top,
                xtol=config.xtol,
                budget=config.budget,
                workers=config.workers,
            )
        )
    if config.method in ("cmaes", "both"):
        backends.append(
            CmaesSearch(
                restarts=config.restarts,
                popsize=config.popsize,
                seed=config.seed,
                budget=config.budget,
                xtol=config.xtol,
                workers=config.workers,
            )
        )
    return backends


def optimize(
    objective: BellObjective,
    config: SolverConfig,
    warm_starts: Sequence[tuple[np.ndarray, tuple[int, ...]]] = (),
) -> tuple[SearchOutcome, dict[str, float]]:
    """Run the configured backends; the first one wins ties."""
    space = objective.space.search_space()
    outcomes = [backend.maximize(objective, space, warm_starts) for backend in make_backends(config)]
    best = outcomes[0]
    for outcome in outcomes[1:]:
        if outcome.value > best.value:
            best = outcome
    for outcome in outcomes:
        logger.debug("%s: %.12g after %d evaluations", outcome.method, outcome.value, outcome.evaluations)
    return best, {o.method: o.value for o in outcomes}


def default_dims(problem: TcProblem) -> tuple[int, ...]:
    return problem.dec_sizes


def check_dims(problem: TcProblem, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(q) for q in dims)
    if len(dims) != problem.n:
        raise DimensionError(f"{len(dims)} dimensions for a {problem.n}-party problem")
    for i, (q, d) in enumerate(zip(dims, problem.dec_sizes)):
        if q < d:
            raise DimensionError(f"party {i}: dimension {q} is smaller than its {d} decisions")
    return dims


@dataclass
class QuantumReport:
    value: float
    strategy: QuantumStrategy
    params: MeasurementParams
    method: str
    seed: int
    evaluations: int
    iterations: int
    degenerate: bool
    method_values: dict[str, float] = field(default_factory=dict)
    trace: list[float] = field(default_factory=list)
    x: np.ndarray = field(default_factory=lambda: np.zeros(0))
    z: tuple[int, ...] = ()


def quantum_value(
    problem: TcProblem,
    dims: Optional[Sequence[int]] = None,
    config: Optional[SolverConfig] = None,
    space: Optional[ParamSpace] = None,
    warm_starts: Sequence[tuple[np.ndarray, tuple[int, ...]]] = (),
) -> QuantumReport:
    """
    Largest Bell-operator eigenvalue over parameterized projective measurements.
    The result is a lower bound on q*; the state is the top eigenvector.
    """
    config = config or SolverConfig()
    dims = check_dims(problem, dims or default_dims(problem))
    space = space or ParamSpace.for_problem(dims, problem.obs_sizes, problem.dec_sizes, config.reduce)
    objective = BellObjective.for_problem(problem, space)

    best, method_values = optimize(objective, config, warm_starts)
    params, _ = space.decode(best.x, best.z)
    measurements = params.measurements()
    pair = largest_eigenvalue(bell_operator(problem, measurements))
    strategy = QuantumStrategy(dims, measurements, pair.vector)
    logger.info("quantum value %.10g (%s)", pair.value, best.method)
    if pair.degenerate:
        logger.warning("top eigenvalue %.10g is degenerate; the reported state is one of several optima", pair.value)
    return QuantumReport(
        value=pair.value,
        strategy=strategy,
        params=params,
        method=best.method,
        seed=config.seed,
        evaluations=best.evaluations,
        iterations=best.iterations,
        degenerate=pair.degenerate,
        method_values=method_values,
        trace=best.trace,
        x=best.x,
        z=best.z,
    )
