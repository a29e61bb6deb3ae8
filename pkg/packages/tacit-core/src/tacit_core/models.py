from dataclasses import dataclass
import math
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, InputError, RangeError

# Validation tolerances
DIST_TOL = 1e-12
ENTRY_TOL = 1e-12
ROW_TOL = 1e-10
PROJECTOR_TOL = 1e-9
STATE_TOL = 1e-10
CORRELATION_TOL = 1e-10


def _readonly(values, dtype=float) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.flags.writeable = False
    return array


def _alphabets(raw, what: str) -> tuple[tuple[str, ...], ...]:
    if not isinstance(raw, (list, tuple)) or not raw:
        raise InputError(f"'{what}' must be a non-empty list of per-party label lists")
    parsed = []
    for i, labels in enumerate(raw):
        if not isinstance(labels, (list, tuple)) or not labels:
            raise InputError(f"party {i}: '{what}' needs at least one label")
        labels = tuple(str(label) for label in labels)
        if len(set(labels)) != len(labels):
            raise InputError(f"party {i}: duplicate labels in '{what}': {list(labels)}")
        parsed.append(labels)
    return tuple(parsed)


def bernoulli_product_distribution(p: float, n: int) -> np.ndarray:
    """Joint distribution of n independent Bernoulli(p) bits, canonical order."""
    if not 0.0 <= p <= 1.0:
        raise RangeError(f"Bernoulli parameter must lie in [0, 1], got {p}")
    local = np.array([1.0 - p, p])
    joint = np.ones(())
    for _ in range(n):
        joint = np.multiply.outer(joint, local)
    return joint.reshape(-1)


@dataclass(frozen=True, eq=False)
class TcProblem:
    """
    An n-party tacit coordination problem.

    `input_dist` is indexed by the joint observation (row-major over parties),
    `utility` by (joint observation, joint decision).
    """

    observations: tuple[tuple[str, ...], ...]
    decisions: tuple[tuple[str, ...], ...]
    input_dist: np.ndarray
    utility: np.ndarray

    def __post_init__(self):
        observations = _alphabets(self.observations, "observations")
        decisions = _alphabets(self.decisions, "decisions")
        if len(observations) != len(decisions):
            raise DimensionError(
                f"{len(observations)} observation alphabets but {len(decisions)} decision alphabets"
            )
        if len(observations) < 2:
            raise DimensionError(f"a TC problem needs at least 2 parties, got {len(observations)}")
        object.__setattr__(self, "observations", observations)
        object.__setattr__(self, "decisions", decisions)

        num_obs = math.prod(len(o) for o in observations)
        num_dec = math.prod(len(d) for d in decisions)

        dist = np.asarray(self.input_dist, dtype=float).reshape(-1)
        if dist.shape != (num_obs,):
            raise DimensionError(f"input distribution has {dist.size} entries, expected {num_obs}")
        if not np.all(np.isfinite(dist)) or np.any(dist < 0):
            raise InputError("input distribution entries must be finite and non-negative")
        if abs(dist.sum() - 1.0) > DIST_TOL:
            raise InputError(f"input distribution sums to {dist.sum()!r}, not 1")

        utility = np.asarray(self.utility, dtype=float)
        if utility.size != num_obs * num_dec:
            raise DimensionError(
                f"utility has {utility.size} entries, expected {num_obs} x {num_dec}"
            )
        utility = utility.reshape(num_obs, num_dec)
        if not np.all(np.isfinite(utility)):
            raise InputError("utility entries must be finite (no NaN or Inf)")

        object.__setattr__(self, "input_dist", _readonly(dist))
        object.__setattr__(self, "utility", _readonly(utility))

    def __eq__(self, other):
        if not isinstance(other, TcProblem):
            return NotImplemented
        return (
            self.observations == other.observations
            and self.decisions == other.decisions
            and np.array_equal(self.input_dist, other.input_dist)
            and np.array_equal(self.utility, other.utility)
        )

    __hash__ = None

    @property
    def n(self) -> int:
        return len(self.observations)

    @property
    def obs_sizes(self) -> tuple[int, ...]:
        return tuple(len(o) for o in self.observations)

    @property
    def dec_sizes(self) -> tuple[int, ...]:
        return tuple(len(d) for d in self.decisions)

    @property
    def num_obs(self) -> int:
        return self.utility.shape[0]

    @property
    def num_dec(self) -> int:
        return self.utility.shape[1]

    @property
    def shape_tag(self) -> Optional[tuple[int, int, int]]:
        """(n, m, Δ) when every party has m observations and Δ decisions."""
        if len(set(self.obs_sizes)) == 1 and len(set(self.dec_sizes)) == 1:
            return (self.n, self.obs_sizes[0], self.dec_sizes[0])
        return None

    @property
    def utility_tensor(self) -> np.ndarray:
        return self.utility.reshape(self.obs_sizes + self.dec_sizes)

    @property
    def weights(self) -> np.ndarray:
        return self.input_dist[:, None] * self.utility

    @classmethod
    def from_dict(cls, data: dict) -> "TcProblem":
        """Parse the problem JSON document (already decoded into a dict)."""
        if not isinstance(data, dict):
            raise InputError("problem document must be a JSON object")
        missing = [
            key
            for key in ("parties", "observations", "decisions", "input_distribution", "utility")
            if key not in data
        ]
        if missing:
            raise InputError(f"problem document is missing {missing}")

        observations = _alphabets(data["observations"], "observations")
        decisions = _alphabets(data["decisions"], "decisions")
        parties = data["parties"]
        if not isinstance(parties, int) or parties != len(observations):
            raise DimensionError(
                f"'parties' is {parties!r} but {len(observations)} observation alphabets were given"
            )

        spec = data["input_distribution"]
        kind = spec.get("type") if isinstance(spec, dict) else None
        if kind == "explicit":
            dist = spec.get("probs")
            if not isinstance(dist, list):
                raise InputError("explicit input distribution needs a 'probs' list")
        elif kind == "bernoulli_product":
            if any(len(o) != 2 for o in observations):
                raise InputError("bernoulli_product input needs binary observations for every party")
            try:
                p = float(spec["p"])
            except (KeyError, TypeError, ValueError) as e:
                raise InputError("bernoulli_product input needs a numeric 'p'") from e
            dist = bernoulli_product_distribution(p, parties)
        else:
            raise InputError(f"unknown input_distribution type: {kind!r}")

        try:
            utility = np.asarray(data["utility"], dtype=float)
            dist = np.asarray(dist, dtype=float)
        except (TypeError, ValueError) as e:
            raise InputError(f"non-numeric entry in problem arrays: {e}") from e

        return cls(
            observations=observations,
            decisions=decisions,
            input_dist=dist,
            utility=utility,
        )

    def to_dict(self) -> dict:
        return {
            "parties": self.n,
            "observations": [list(o) for o in self.observations],
            "decisions": [list(d) for d in self.decisions],
            "input_distribution": {"type": "explicit", "probs": self.input_dist.tolist()},
            "utility": self.utility.reshape(-1).tolist(),
        }


@dataclass(frozen=True, eq=False)
class WeightedUtilityArray:
    w: np.ndarray
    obs_sizes: tuple[int, ...]
    dec_sizes: tuple[int, ...]

    @property
    def tensor(self) -> np.ndarray:
        return self.w.reshape(self.obs_sizes + self.dec_sizes)


@dataclass(frozen=True, eq=False)
class Behavior:
    """Conditional probabilities p(d|o), rows indexed by joint observation."""

    p: np.ndarray
    obs_sizes: tuple[int, ...]
    dec_sizes: tuple[int, ...]

    def __post_init__(self):
        obs_sizes = tuple(int(s) for s in self.obs_sizes)
        dec_sizes = tuple(int(s) for s in self.dec_sizes)
        p = np.asarray(self.p, dtype=float)
        shape = (math.prod(obs_sizes), math.prod(dec_sizes))
        if p.size != shape[0] * shape[1]:
            raise DimensionError(f"behavior has {p.size} entries, expected {shape[0]} x {shape[1]}")
        p = p.reshape(shape)
        if np.any(p < -ENTRY_TOL) or np.any(p > 1 + ENTRY_TOL):
            raise InputError("behavior entries must lie in [0, 1]")
        worst = np.max(np.abs(p.sum(axis=1) - 1.0))
        if worst > ROW_TOL:
            raise InputError(f"behavior rows must sum to 1 (worst deviation {worst:.3e})")
        object.__setattr__(self, "obs_sizes", obs_sizes)
        object.__setattr__(self, "dec_sizes", dec_sizes)
        object.__setattr__(self, "p", _readonly(p))

    @property
    def tensor(self) -> np.ndarray:
        return self.p.reshape(self.obs_sizes + self.dec_sizes)

    @classmethod
    def mixture(cls, weights: Sequence[float], behaviors: Sequence["Behavior"]) -> "Behavior":
        """Convex combination of behaviors sharing one shape."""
        if not behaviors or len(weights) != len(behaviors):
            raise DimensionError("mixture needs one weight per behavior")
        first = behaviors[0]
        if any(b.p.shape != first.p.shape for b in behaviors):
            raise DimensionError("mixed behaviors must share a shape")
        p = sum(float(t) * b.p for t, b in zip(weights, behaviors))
        return cls(p, first.obs_sizes, first.dec_sizes)


@dataclass(frozen=True)
class DeterministicStrategy:
    """Per-party decision tables: tables[i][o_i] is the decision index."""

    tables: tuple[tuple[int, ...], ...]
    dec_sizes: tuple[int, ...]

    def __post_init__(self):
        tables = tuple(tuple(int(d) for d in table) for table in self.tables)
        dec_sizes = tuple(int(s) for s in self.dec_sizes)
        if len(tables) != len(dec_sizes):
            raise DimensionError(f"{len(tables)} decision tables for {len(dec_sizes)} parties")
        for i, (table, size) in enumerate(zip(tables, dec_sizes)):
            if not table:
                raise DimensionError(f"party {i}: empty decision table")
            if any(not 0 <= d < size for d in table):
                raise InputError(f"party {i}: decision index out of range in {table}")
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "dec_sizes", dec_sizes)

    @property
    def obs_sizes(self) -> tuple[int, ...]:
        return tuple(len(t) for t in self.tables)

    @staticmethod
    def radices(obs_sizes: Sequence[int], dec_sizes: Sequence[int]) -> tuple[int, ...]:
        return tuple(d for o, d in zip(obs_sizes, dec_sizes) for _ in range(o))

    @staticmethod
    def count(obs_sizes: Sequence[int], dec_sizes: Sequence[int]) -> int:
        return math.prod(d**o for o, d in zip(obs_sizes, dec_sizes))

    @classmethod
    def from_index(
        cls, index: int, obs_sizes: Sequence[int], dec_sizes: Sequence[int]
    ) -> "DeterministicStrategy":
        """Decode a canonical strategy index (mixed radix, party 1 most significant)."""
        digits = np.unravel_index(int(index), cls.radices(obs_sizes, dec_sizes))
        tables, k = [], 0
        for o in obs_sizes:
            tables.append(tuple(int(d) for d in digits[k : k + o]))
            k += o
        return cls(tuple(tables), tuple(dec_sizes))

    @property
    def index(self) -> int:
        digits = [d for table in self.tables for d in table]
        return int(np.ravel_multi_index(digits, self.radices(self.obs_sizes, self.dec_sizes)))

    @classmethod
    def from_labels(cls, problem: TcProblem, mapping: Sequence[dict]) -> "DeterministicStrategy":
        """Build from per-party {observation label: decision label} dicts."""
        if len(mapping) != problem.n:
            raise DimensionError(f"{len(mapping)} party maps for a {problem.n}-party problem")
        tables = []
        for i, table in enumerate(mapping):
            try:
                tables.append(
                    tuple(problem.decisions[i].index(table[o]) for o in problem.observations[i])
                )
            except (KeyError, ValueError) as e:
                raise InputError(f"party {i}: incomplete or unknown labels in {table}") from e
        return cls(tuple(tables), problem.dec_sizes)

    def labelled(self, problem: TcProblem) -> list[dict[str, str]]:
        return [
            {problem.observations[i][o]: problem.decisions[i][d] for o, d in enumerate(table)}
            for i, table in enumerate(self.tables)
        ]

    def local_matrices(self) -> list[np.ndarray]:
        """One-hot (|O_i|, |D_i|) matrices of the decision functions."""
        out = []
        for table, size in zip(self.tables, self.dec_sizes):
            local = np.zeros((len(table), size))
            local[np.arange(len(table)), table] = 1.0
            out.append(local)
        return out


@dataclass(frozen=True, eq=False)
class QuantumStrategy:
    """
    Projective-measurement strategy. measurements[i] has shape
    (|O_i|, |D_i|, q_i, q_i); state is a vector of dimension prod(q_i).
    """

    dims: tuple[int, ...]
    measurements: tuple[np.ndarray, ...]
    state: Optional[np.ndarray] = None

    def __post_init__(self):
        dims = tuple(int(q) for q in self.dims)
        if len(dims) != len(self.measurements):
            raise DimensionError(f"{len(self.measurements)} measurement sets for {len(dims)} parties")
        measurements = []
        for i, (q, ops) in enumerate(zip(dims, self.measurements)):
            ops = np.asarray(ops, dtype=complex)
            if ops.ndim != 4 or ops.shape[2:] != (q, q):
                raise DimensionError(f"party {i}: projectors must be {q}x{q}, got shape {ops.shape}")
            if ops.shape[1] > q:
                raise DimensionError(f"party {i}: {ops.shape[1]} decisions exceed dimension {q}")
            _check_projective(ops, i)
            measurements.append(_readonly(ops, complex))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "measurements", tuple(measurements))

        if self.state is not None:
            state = np.asarray(self.state, dtype=complex).reshape(-1)
            if state.size != math.prod(dims):
                raise DimensionError(f"state has dimension {state.size}, expected {math.prod(dims)}")
            norm = np.linalg.norm(state)
            if abs(norm - 1.0) > STATE_TOL:
                raise InputError(f"state must have unit norm, got {norm!r}")
            object.__setattr__(self, "state", _readonly(state, complex))

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def obs_sizes(self) -> tuple[int, ...]:
        return tuple(ops.shape[0] for ops in self.measurements)

    @property
    def dec_sizes(self) -> tuple[int, ...]:
        return tuple(ops.shape[1] for ops in self.measurements)

    def with_state(self, state: np.ndarray) -> "QuantumStrategy":
        return QuantumStrategy(self.dims, self.measurements, state)


def _check_projective(ops: np.ndarray, party: int) -> None:
    q = ops.shape[-1]
    identity = np.eye(q)
    for o, projectors in enumerate(ops):
        for d, proj in enumerate(projectors):
            if np.max(np.abs(proj - proj.conj().T), initial=0.0) > PROJECTOR_TOL:
                raise InputError(f"party {party}, observation {o}, decision {d}: not Hermitian")
            if np.max(np.abs(proj @ proj - proj), initial=0.0) > PROJECTOR_TOL:
                raise InputError(f"party {party}, observation {o}, decision {d}: not idempotent")
            for e in range(d + 1, len(projectors)):
                if np.max(np.abs(proj @ projectors[e]), initial=0.0) > PROJECTOR_TOL:
                    raise InputError(
                        f"party {party}, observation {o}: projectors {d} and {e} overlap"
                    )
        if np.max(np.abs(projectors.sum(axis=0) - identity)) > PROJECTOR_TOL:
            raise InputError(f"party {party}, observation {o}: projectors do not sum to identity")


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    """c[k, l] = 2 p(XOR = 0 | k, l) - 1 for two binary-decision parties."""

    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.ndim != 2:
            raise DimensionError(f"correlation matrix must be 2-D, got shape {c.shape}")
        if np.any(np.abs(c) > 1 + CORRELATION_TOL):
            raise InputError("correlations must lie in [-1, 1]")
        object.__setattr__(self, "c", _readonly(c))
