"""Closed forms for CHSH with independent Bernoulli(p) inputs."""

from dataclasses import dataclass
import math
from typing import Optional

from .errors import RangeError

LOW = 1.0 - 1.0 / math.sqrt(2.0)
HIGH = 1.0 / math.sqrt(2.0)
ARCSIN_TOL = 1e-10


@dataclass(frozen=True)
class PiecewiseValue:
    p: float
    value: float
    branch: str  # "low", "middle" or "high"


def _check(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise RangeError(f"p must lie in [0, 1], got {p}")
    return p


def chsh_bernoulli_classical(p: float) -> float:
    p = _check(p)
    return 1.0 - p * p if p <= 0.5 else 2.0 * p - p * p


def _branch(p: float) -> str:
    if p <= LOW:
        return "low"
    if p >= HIGH:
        return "high"
    return "middle"


def chsh_bernoulli_piecewise(p: float) -> PiecewiseValue:
    """Quantum value with its branch; boundary points belong to the classical branches."""
    p = _check(p)
    branch = _branch(p)
    if branch == "low":
        value = 1.0 - p * p
    elif branch == "high":
        value = 2.0 * p - p * p
    else:
        value = (1.0 - 2.0 * p * (1.0 - p)) / math.sqrt(2.0) + 0.5
    return PiecewiseValue(p, value, branch)


def chsh_bernoulli_quantum(p: float) -> float:
    return chsh_bernoulli_piecewise(p).value


def gap_region(p: float) -> bool:
    """True iff p lies strictly between 1 - 1/sqrt(2) and 1/sqrt(2)."""
    return LOW < float(p) < HIGH


def lambda_star(p: float) -> Optional[float]:
    """Stationary multiplier (1 / (2 sqrt 2)) sqrt((2p^2 - 1)(2p^2 - 4p + 1)); None off the middle range."""
    p = _check(p)
    if not LOW <= p <= HIGH:
        return None
    product = (2 * p * p - 1) * (2 * p * p - 4 * p + 1)
    return math.sqrt(max(product, 0.0)) / (2.0 * math.sqrt(2.0))


def lambda_residual(lam: float, p: float) -> float:
    """(1 - A^2)(1 - D^2) - (1 - 3AD)^2 with A = lam / (1 - p)^2 and D = lam / p^2."""
    a = lam / (1.0 - p) ** 2
    d = lam / p**2
    return (1 - a * a) * (1 - d * d) - (1 - 3 * a * d) ** 2


def tsirelson_feasible(a: float, b: float, c: float, d: float) -> bool:
    """|asin a + asin b + asin c - asin d| <= pi for correlators of a 2x2 qubit strategy."""
    values = (a, b, c, d)
    if any(not -1.0 <= v <= 1.0 for v in values):
        raise RangeError(f"correlators must lie in [-1, 1], got {values}")
    total = math.asin(a) + math.asin(b) + math.asin(c) - math.asin(d)
    return abs(total) <= math.pi + ARCSIN_TOL


def tsirelson_feasible_all(c00: float, c01: float, c10: float, c11: float, tol: float = 1e-8) -> bool:
    """The arcsine condition with the minus sign placed on each of the four correlators."""
    values = [c00, c01, c10, c11]
    clipped = [math.asin(min(max(v, -1.0), 1.0)) for v in values]
    for minus in range(4):
        total = sum(-s if k == minus else s for k, s in enumerate(clipped))
        if abs(total) > math.pi + tol:
            return False
    return True
