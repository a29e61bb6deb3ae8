"""Problem constructors and structural transforms."""

import itertools
import logging
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, InputError, RangeError, UnsupportedError
from .models import TcProblem, WeightedUtilityArray, bernoulli_product_distribution

logger = logging.getLogger(__name__)

HEDGE_OBSERVATIONS = ("N", "I")
HEDGE_DECISIONS = ("A", "B")


def _check_probability(value: float, name: str) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise RangeError(f"{name} must lie in [0, 1], got {value}")
    return value


def make_hedge_or_not(p: float, beta: float) -> TcProblem:
    """
    Two-party XOR problem with Bernoulli(p) inputs over {N, I}, P(I) = p.

    Mixed observations pay β for equal decisions and 1 - β for different ones;
    (N, N) rewards different decisions and (I, I) equal ones.
    """
    p = _check_probability(p, "p")
    beta = _check_probability(beta, "beta")
    mixed = [beta, 1.0 - beta, 1.0 - beta, beta]
    utility = np.array([[0.0, 1.0, 1.0, 0.0], mixed, mixed, [1.0, 0.0, 0.0, 1.0]])
    return TcProblem(
        observations=(HEDGE_OBSERVATIONS, HEDGE_OBSERVATIONS),
        decisions=(HEDGE_DECISIONS, HEDGE_DECISIONS),
        input_dist=bernoulli_product_distribution(p, 2),
        utility=utility,
    )


def make_chsh(p: float, anti: bool = False) -> TcProblem:
    """CHSH with Bernoulli(p) inputs: win iff (o1 AND o2) = d1 XOR d2 (anti: the opposite)."""
    p = _check_probability(p, "p")
    utility = np.zeros((4, 4))
    for (o1, o2), (d1, d2) in itertools.product(
        itertools.product((0, 1), repeat=2), itertools.product((0, 1), repeat=2)
    ):
        win = (o1 & o2) ^ d1 ^ d2 ^ (0 if anti else 1)
        utility[2 * o1 + o2, 2 * d1 + d2] = float(win)
    bits = ("0", "1")
    return TcProblem(
        observations=(bits, bits),
        decisions=(bits, bits),
        input_dist=bernoulli_product_distribution(p, 2),
        utility=utility,
    )


def weighted_utility(problem: TcProblem) -> WeightedUtilityArray:
    return WeightedUtilityArray(problem.weights, problem.obs_sizes, problem.dec_sizes)


def _check_permutation(perm: Sequence[int], size: int, what: str) -> tuple[int, ...]:
    perm = tuple(int(k) for k in perm)
    if sorted(perm) != list(range(size)):
        raise InputError(f"invalid permutation for {what}: {list(perm)}")
    return perm


def permute_problem(
    problem: TcProblem,
    obs_perms: Optional[Sequence[Optional[Sequence[int]]]] = None,
    dec_perms: Optional[Sequence] = None,
) -> TcProblem:
    """
    Relabel observations and decisions party by party.

    obs_perms[i][k] is the old observation shown as new observation k. dec_perms[i]
    is either one permutation for all of party i's observations or a list with one
    permutation per (old) observation. Decision labels follow a shared permutation
    and stay put for observation-dependent ones.
    """
    n = problem.n
    obs_perms = list(obs_perms) if obs_perms is not None else [None] * n
    dec_perms = list(dec_perms) if dec_perms is not None else [None] * n
    if len(obs_perms) != n or len(dec_perms) != n:
        raise DimensionError(f"need one permutation entry per party ({n})")

    sigma, tau, observations, decisions = [], [], [], []
    for i in range(n):
        o_size, d_size = problem.obs_sizes[i], problem.dec_sizes[i]
        perm = obs_perms[i] if obs_perms[i] is not None else range(o_size)
        perm = _check_permutation(perm, o_size, f"party {i} observations")
        sigma.append(perm)
        observations.append(tuple(problem.observations[i][k] for k in perm))

        raw = dec_perms[i] if dec_perms[i] is not None else range(d_size)
        raw = list(raw)
        if raw and isinstance(raw[0], (list, tuple, np.ndarray)):
            if len(raw) != o_size:
                raise DimensionError(f"party {i}: need one decision permutation per observation")
            per_obs = tuple(
                _check_permutation(r, d_size, f"party {i} decisions") for r in raw
            )
            decisions.append(problem.decisions[i])
        else:
            shared = _check_permutation(raw, d_size, f"party {i} decisions")
            per_obs = (shared,) * o_size
            decisions.append(tuple(problem.decisions[i][k] for k in shared))
        tau.append(per_obs)

    tensor = problem.utility_tensor
    dist = problem.input_dist.reshape(problem.obs_sizes)
    new_utility = np.empty_like(tensor)
    new_dist = np.empty_like(dist)
    for new_obs in itertools.product(*(range(s) for s in problem.obs_sizes)):
        old_obs = tuple(sigma[i][k] for i, k in enumerate(new_obs))
        columns = np.ix_(*(tau[i][old_obs[i]] for i in range(n)))
        new_utility[new_obs] = tensor[old_obs][columns]
        new_dist[new_obs] = dist[old_obs]

    return TcProblem(
        observations=tuple(observations),
        decisions=tuple(decisions),
        input_dist=new_dist.reshape(-1),
        utility=new_utility.reshape(problem.num_obs, problem.num_dec),
    )


def _parities(problem: TcProblem) -> np.ndarray:
    digits = np.unravel_index(np.arange(problem.num_dec), problem.dec_sizes)
    return np.bitwise_xor.reduce(np.stack(digits), axis=0)


def is_xor_array(problem: TcProblem) -> Optional[np.ndarray]:
    """
    The (|O|, 2) table f[o, parity] when the utility sees decisions only
    through their parity, else None. Entries are compared exactly.
    """
    if any(size != 2 for size in problem.dec_sizes):
        raise UnsupportedError(f"XOR arrays need binary decisions, got {problem.dec_sizes}")
    parity = _parities(problem)
    table = np.empty((problem.num_obs, 2))
    for bit in (0, 1):
        block = problem.utility[:, parity == bit]
        if np.any(block != block[:, :1]):
            return None
        table[:, bit] = block[:, 0]
    return table


def anti_array(problem: TcProblem) -> TcProblem:
    """Flip the parity argument of an XOR problem."""
    table = is_xor_array(problem)
    if table is None:
        raise UnsupportedError("anti-array is only defined for XOR problems")
    parity = _parities(problem)
    return TcProblem(
        observations=problem.observations,
        decisions=problem.decisions,
        input_dist=problem.input_dist,
        utility=table[:, 1 - parity],
    )


def add_problems(first: TcProblem, second: TcProblem) -> TcProblem:
    """Sum the utilities of two problems sharing alphabets and input distribution."""
    if first.obs_sizes != second.obs_sizes or first.dec_sizes != second.dec_sizes:
        raise DimensionError("added problems must share alphabet sizes")
    if not np.array_equal(first.input_dist, second.input_dist):
        raise InputError("added problems must share the input distribution")
    return TcProblem(
        observations=first.observations,
        decisions=first.decisions,
        input_dist=first.input_dist,
        utility=first.utility + second.utility,
    )


def transform_utility(problem: TcProblem, scale: float = 1.0, shift: float = 0.0) -> TcProblem:
    """Affine map u -> scale * u + shift applied to every utility entry."""
    return TcProblem(
        observations=problem.observations,
        decisions=problem.decisions,
        input_dist=problem.input_dist,
        utility=scale * problem.utility + shift,
    )
