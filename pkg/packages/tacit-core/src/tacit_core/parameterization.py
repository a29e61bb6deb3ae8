"""
Projective measurements from angles.

A q x q unitary is built from q^2 angles lam[m, n]: for m < n a real rotation in
the (m, n) plane, for m > n a phase on basis vector m paired with that rotation,
and lam[l, l] a trailing diagonal phase. Dropping the diagonal phases leaves a
basis parameterized by the q^2 - q off-diagonal angles. Each basis vector is then
assigned to a decision by a partition map.
"""

from dataclasses import dataclass
import math
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, InputError, RangeError
from .interfaces import SearchSpace
from .models import DeterministicStrategy

TWO_PI = 2.0 * np.pi


def _wrap(angles) -> np.ndarray:
    angles = np.asarray(angles, dtype=float)
    if not np.all(np.isfinite(angles)):
        raise RangeError("angles must be finite")
    return np.mod(angles, TWO_PI)


def offdiagonal_pairs(q: int) -> list[tuple[int, int]]:
    """(m, n) with m != n in row-major order; the layout of basis angle vectors."""
    return [(m, n) for m in range(q) for n in range(q) if m != n]


def angle_bounds(q: int) -> tuple[np.ndarray, np.ndarray]:
    upper = np.array([np.pi / 2 if m < n else TWO_PI for m, n in offdiagonal_pairs(q)])
    return np.zeros_like(upper), upper


def _compose(q: int, lam: np.ndarray, with_diagonal: bool) -> np.ndarray:
    u = np.eye(q, dtype=complex)
    for m in range(q - 1):
        for n in range(m + 1, q):
            u[:, n] *= np.exp(1j * lam[n, m])
            c, s = np.cos(lam[m, n]), np.sin(lam[m, n])
            col_m, col_n = u[:, m].copy(), u[:, n].copy()
            u[:, m] = c * col_m - s * col_n
            u[:, n] = s * col_m + c * col_n
    if with_diagonal:
        u = u * np.exp(1j * np.diag(lam))[None, :]
    return u


def unitary_from_params(q: int, lam) -> np.ndarray:
    """Unitary from q^2 angles (a q x q array or its row-major flattening)."""
    lam = _wrap(lam)
    if lam.size != q * q:
        raise DimensionError(f"a {q}x{q} unitary takes {q * q} angles, got {lam.size}")
    return _compose(q, lam.reshape(q, q), with_diagonal=True)


def basis_from_params(q: int, lam_offdiag) -> np.ndarray:
    """Orthonormal basis (as columns) from the q^2 - q off-diagonal angles."""
    lam_offdiag = _wrap(lam_offdiag).reshape(-1)
    pairs = offdiagonal_pairs(q)
    if lam_offdiag.size != len(pairs):
        raise DimensionError(f"a {q}-dimensional basis takes {len(pairs)} angles, got {lam_offdiag.size}")
    lam = np.zeros((q, q))
    for (m, n), value in zip(pairs, lam_offdiag):
        lam[m, n] = value
    return _compose(q, lam, with_diagonal=False)


def _check_partition(partition: Sequence[int], q: int, num_decisions: int) -> tuple[int, ...]:
    partition = tuple(int(d) for d in partition)
    if len(partition) != q or any(not 0 <= d < num_decisions for d in partition):
        raise InputError(f"partition {list(partition)} must map {q} basis vectors into {num_decisions} decisions")
    return partition


def measurement_from_params(q: int, num_decisions: int, lam_offdiag, partition: Sequence[int]) -> np.ndarray:
    """(num_decisions, q, q) projectors; a decision with no basis vector gets the zero projector."""
    partition = _check_partition(partition, q, num_decisions)
    basis = basis_from_params(q, lam_offdiag)
    projectors = np.zeros((num_decisions, q, q), dtype=complex)
    for k, d in enumerate(partition):
        projectors[d] += np.outer(basis[:, k], basis[:, k].conj())
    return projectors


def default_partition(q: int, num_decisions: int) -> tuple[int, ...]:
    return tuple(min(k, num_decisions - 1) for k in range(q))


def fallback_operators(table: Sequence[int], num_decisions: int, q: int) -> np.ndarray:
    """Trivial projectors (I for the decision the table picks, 0 otherwise)."""
    ops = np.zeros((len(table), num_decisions, q, q), dtype=complex)
    for o, d in enumerate(table):
        ops[o, d] = np.eye(q)
    return ops


def blend_with_fallback(measurements, fallback: DeterministicStrategy, efficiencies) -> list[np.ndarray]:
    """
    Local operators eta_i P_i + (1 - eta_i) F_i, F_i the fallback's trivial projectors.
    Expanding the tensor product recovers the sum over lost-party subsets.
    """
    if fallback is None:
        raise InputError("a lossy operator needs a fallback strategy")
    if len(efficiencies) != len(measurements):
        raise DimensionError(f"{len(efficiencies)} efficiencies for {len(measurements)} parties")
    blended = []
    for ops, table, eta in zip(measurements, fallback.tables, efficiencies):
        ops = np.asarray(ops, dtype=complex)
        trivial = fallback_operators(table, ops.shape[1], ops.shape[-1])
        blended.append(eta * ops + (1.0 - eta) * trivial)
    return blended


@dataclass(frozen=True, eq=False)
class MeasurementParams:
    """
    Per-party measurement angles and partitions.

    angles[i] has shape (|O_i| - 1, q_i^2 - q_i): the first observation measures
    in the computational basis. partitions[i][o] maps basis vectors to decisions.
    """

    dims: tuple[int, ...]
    dec_sizes: tuple[int, ...]
    angles: tuple[np.ndarray, ...]
    partitions: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        dims = tuple(int(q) for q in self.dims)
        if not len(dims) == len(self.dec_sizes) == len(self.angles) == len(self.partitions):
            raise DimensionError("dims, decisions, angles and partitions must cover the same parties")
        angles, partitions = [], []
        for i, q in enumerate(dims):
            block = np.array(self.angles[i], dtype=float)
            rows = len(self.partitions[i]) - 1
            if block.size != rows * (q * q - q):
                raise DimensionError(f"party {i}: need {q * q - q} angles for each of {rows} observations")
            block = block.reshape(rows, q * q - q)
            block.flags.writeable = False
            angles.append(block)
            partitions.append(tuple(_check_partition(p, q, self.dec_sizes[i]) for p in self.partitions[i]))
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "dec_sizes", tuple(int(d) for d in self.dec_sizes))
        object.__setattr__(self, "angles", tuple(angles))
        object.__setattr__(self, "partitions", tuple(partitions))

    @property
    def obs_sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.partitions)

    @property
    def num_continuous(self) -> int:
        return sum((q * q - q) * (o - 1) for q, o in zip(self.dims, self.obs_sizes))

    @classmethod
    def computational(cls, dims, obs_sizes, dec_sizes) -> "MeasurementParams":
        """All angles zero, default partitions."""
        return cls(
            dims=tuple(dims),
            dec_sizes=tuple(dec_sizes),
            angles=tuple(np.zeros((o - 1, q * q - q)) for q, o in zip(dims, obs_sizes)),
            partitions=tuple((default_partition(q, d),) * o for q, o, d in zip(dims, obs_sizes, dec_sizes)),
        )

    def party_measurements(self, i: int) -> np.ndarray:
        q, num_decisions = self.dims[i], self.dec_sizes[i]
        zero = np.zeros(q * q - q)
        rows = [zero] + list(self.angles[i])
        return np.stack(
            [measurement_from_params(q, num_decisions, lam, part) for lam, part in zip(rows, self.partitions[i])]
        )

    def measurements(self) -> tuple[np.ndarray, ...]:
        return tuple(self.party_measurements(i) for i in range(len(self.dims)))

    def with_angles(self, angles) -> "MeasurementParams":
        return MeasurementParams(self.dims, self.dec_sizes, tuple(angles), self.partitions)

    def with_partitions(self, partitions) -> "MeasurementParams":
        return MeasurementParams(self.dims, self.dec_sizes, self.angles, tuple(partitions))

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "angles": [np.mod(a, TWO_PI).tolist() for a in self.angles],
            "partitions": [[list(p) for p in party] for party in self.partitions],
        }


def is_n22(dims, obs_sizes, dec_sizes) -> bool:
    return all(q == 2 for q in dims) and all(o == 2 for o in obs_sizes) and all(d == 2 for d in dec_sizes)


def reduce_phase_params_n22(params: MeasurementParams) -> MeasurementParams:
    """Pin every party's lam[2,1] phase to 0; n continuous variables remain."""
    if not is_n22(params.dims, params.obs_sizes, params.dec_sizes):
        raise DimensionError("phase reduction needs qubits with two observations and two decisions per party")
    return params.with_angles(a * np.array([1.0, 0.0]) for a in params.angles)


def fix_nondegenerate_222(params: MeasurementParams) -> MeasurementParams:
    """Pin every partition to one basis vector per decision."""
    if len(params.dims) != 2 or not is_n22(params.dims, params.obs_sizes, params.dec_sizes):
        raise DimensionError("rank-1 partition pinning needs a (2,2,2) qubit strategy")
    return params.with_partitions(((0, 1), (0, 1)) for _ in params.dims)


@dataclass(frozen=True)
class ParamSpace:
    """
    Encoding of measurement parameters (and optionally a fallback strategy) as a
    point (x, z) of a SearchSpace. Continuous coordinates run over the free angles
    party by party; discrete coordinates list the partition of every (party,
    observation) unless pinned, then the fallback decision of every (party,
    observation) when `with_fallback` is set.
    """

    dims: tuple[int, ...]
    obs_sizes: tuple[int, ...]
    dec_sizes: tuple[int, ...]
    reduce_phases: bool = False
    pin_partitions: bool = False
    with_fallback: bool = False

    def __post_init__(self):
        if not len(self.dims) == len(self.obs_sizes) == len(self.dec_sizes):
            raise DimensionError("dims must give one Hilbert dimension per party")
        for i, (q, d) in enumerate(zip(self.dims, self.dec_sizes)):
            if q < d:
                raise DimensionError(f"party {i}: dimension {q} is smaller than its {d} decisions")
        if self.reduce_phases and not is_n22(self.dims, self.obs_sizes, self.dec_sizes):
            raise DimensionError("phase reduction needs an (n,2,2) qubit problem")
        if self.pin_partitions and (len(self.dims) != 2 or not is_n22(self.dims, self.obs_sizes, self.dec_sizes)):
            raise DimensionError("partition pinning needs a (2,2,2) qubit problem")

    @classmethod
    def for_problem(cls, dims, obs_sizes, dec_sizes, reduce: bool, with_fallback: bool = False) -> "ParamSpace":
        """Apply every reduction the shape allows when `reduce` is set."""
        n22 = is_n22(dims, obs_sizes, dec_sizes)
        return cls(
            dims=tuple(dims),
            obs_sizes=tuple(obs_sizes),
            dec_sizes=tuple(dec_sizes),
            reduce_phases=reduce and n22,
            pin_partitions=reduce and n22 and len(dims) == 2,
            with_fallback=with_fallback,
        )

    def _free_slots(self, i: int) -> list[int]:
        return [0] if self.reduce_phases else list(range(self.dims[i] ** 2 - self.dims[i]))

    def search_space(self) -> SearchSpace:
        lower, upper, choices = [], [], []
        for i, (q, o) in enumerate(zip(self.dims, self.obs_sizes)):
            lo, hi = angle_bounds(q)
            slots = self._free_slots(i)
            for _ in range(o - 1):
                lower.extend(lo[slots])
                upper.extend(hi[slots])
        if not self.pin_partitions:
            for q, o, d in zip(self.dims, self.obs_sizes, self.dec_sizes):
                choices.extend([d**q] * o)
        if self.with_fallback:
            for o, d in zip(self.obs_sizes, self.dec_sizes):
                choices.extend([d] * o)
        return SearchSpace(np.array(lower), np.array(upper), tuple(choices))

    def decode(self, x, z) -> tuple[MeasurementParams, Optional[DeterministicStrategy]]:
        x = np.asarray(x, dtype=float)
        angles, k = [], 0
        for i, (q, o) in enumerate(zip(self.dims, self.obs_sizes)):
            slots = self._free_slots(i)
            block = np.zeros((o - 1, q * q - q))
            for row in range(o - 1):
                block[row, slots] = x[k : k + len(slots)]
                k += len(slots)
            angles.append(block)

        z = list(z)
        partitions = []
        for q, o, d in zip(self.dims, self.obs_sizes, self.dec_sizes):
            if self.pin_partitions:
                partitions.append(((0, 1),) * o)
                continue
            party = []
            for _ in range(o):
                digits = np.unravel_index(int(z.pop(0)), (d,) * q)
                party.append(tuple(int(v) for v in digits))
            partitions.append(tuple(party))

        params = MeasurementParams(self.dims, self.dec_sizes, tuple(angles), tuple(partitions))
        fallback = None
        if self.with_fallback:
            tables = []
            for o in self.obs_sizes:
                tables.append(tuple(int(z.pop(0)) for _ in range(o)))
            fallback = DeterministicStrategy(tuple(tables), self.dec_sizes)
        return params, fallback

    def encode(
        self, params: MeasurementParams, fallback: Optional[DeterministicStrategy] = None
    ) -> tuple[np.ndarray, tuple[int, ...]]:
        x = []
        for i, block in enumerate(params.angles):
            for row in block:
                x.extend(row[self._free_slots(i)])
        z = []
        if not self.pin_partitions:
            for q, d, party in zip(self.dims, self.dec_sizes, params.partitions):
                z.extend(int(np.ravel_multi_index(p, (d,) * q)) for p in party)
        if self.with_fallback:
            if fallback is None:
                raise InputError("this space also encodes a fallback strategy")
            z.extend(d for table in fallback.tables for d in table)
        return np.array(x, dtype=float), tuple(z)

