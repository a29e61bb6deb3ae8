from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ..interfaces import Objective


@dataclass(frozen=True)
class Refined:
    value: float
    x: np.ndarray
    z: tuple[int, ...]
    evaluations: int
    iterations: int


def nelder_mead(
    objective: Objective,
    start: tuple[np.ndarray, tuple[int, ...]],
    step: np.ndarray,
    xtol: float,
) -> Refined:
    """
    Derivative-free local ascent from `start` with the discrete part held fixed.
    Unbounded: the objectives are periodic in every angle.
    """
    x0, z = np.asarray(start[0], dtype=float), tuple(start[1])
    if x0.size == 0:
        return Refined(float(objective(x0, z)), x0, z, 1, 0)

    simplex = np.vstack([x0, x0 + np.diag(step)])
    result = minimize(
        lambda x: -objective(x, z),
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "xatol": xtol,
            "fatol": 1e-14,
            "maxfev": 400 * x0.size,
        },
    )
    return Refined(float(-result.fun), np.asarray(result.x), z, int(result.nfev), int(result.nit))
