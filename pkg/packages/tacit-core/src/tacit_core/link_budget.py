"""
Photonic link budget: transmission from attenuation, attempt times and the
effective entanglement rate of a midpoint source.

Lengths are in km, speeds in m/s, times in s, rates in Hz.
"""

from dataclasses import dataclass
import math
from typing import Optional

from .errors import InputError, RangeError

SPEED_OF_LIGHT = 3.0e8


@dataclass(frozen=True)
class Medium:
    name: str
    attenuation: float  # dB/km
    speed: float  # m/s

    def __post_init__(self):
        if self.attenuation < 0:
            raise RangeError(f"{self.name}: attenuation must be >= 0 dB/km, got {self.attenuation}")
        if not 0 < self.speed <= SPEED_OF_LIGHT:
            raise RangeError(f"{self.name}: speed must lie in (0, 3e8] m/s, got {self.speed}")


MEDIA = {
    "fiber": Medium("fiber", 0.17, 2.0e8),
    "vacuum_guide": Medium("vacuum_guide", 5.0e-5, SPEED_OF_LIGHT),
    # 0.2 dB/cm
    "waveguide": Medium("waveguide", 2.0e4, 2.0e8),
    "free_space": Medium("free_space", 0.0, SPEED_OF_LIGHT),
}


def get_medium(name: str) -> Medium:
    try:
        return MEDIA[name]
    except KeyError:
        raise InputError(f"Unknown medium: {name!r}; choose one of {sorted(MEDIA)}") from None


@dataclass(frozen=True)
class LinkConfig:
    """
    Two parties `distance` km apart with the source at `source_position`
    (fraction of the distance from the first party). `coupling` is an extra
    per-arm efficiency for detector and coupling losses.
    """

    distance: float
    multiplicity: int = 1
    projection_prob: float = 0.5
    source_position: float = 0.5
    coupling: float = 1.0

    def __post_init__(self):
        if self.distance <= 0:
            raise RangeError(f"distance must be > 0 km, got {self.distance}")
        if self.multiplicity < 1:
            raise RangeError(f"multiplicity must be >= 1, got {self.multiplicity}")
        for name in ("projection_prob", "source_position", "coupling"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise RangeError(f"{name} must lie in [0, 1], got {value}")

    @property
    def arms(self) -> tuple[float, float]:
        first = self.distance * self.source_position
        return first, self.distance - first


def efficiency(medium: Medium, length: float, extra: float = 1.0) -> float:
    """Transmission 10^(-0.1 alpha l) over `length` km, times an optional extra factor."""
    if length < 0:
        raise RangeError(f"length must be >= 0 km, got {length}")
    return extra * 10.0 ** (-0.1 * medium.attenuation * length)


def max_arm_length(medium: Medium, eta_target: float) -> float:
    """Longest arm keeping the transmission at eta_target; inf for a lossless medium."""
    if not 0.0 < eta_target <= 1.0:
        raise RangeError(f"target efficiency must lie in (0, 1], got {eta_target}")
    if medium.attenuation == 0:
        return math.inf
    return -10.0 * math.log10(eta_target) / medium.attenuation


def light_delay(distance: float, speed: float = SPEED_OF_LIGHT) -> float:
    """One-way time of flight over `distance` km."""
    return distance * 1e3 / speed


def attempt_time(
    distance: float,
    fiber_speed: float,
    herald_speed: float,
    source_position: float = 0.5,
) -> float:
    """Photon out along the longer arm plus the heralding signal back."""
    if distance <= 0:
        raise RangeError(f"distance must be > 0 km, got {distance}")
    arm = max(source_position, 1.0 - source_position) * distance
    return light_delay(arm, fiber_speed) + light_delay(arm, herald_speed)


def success_probability(
    medium: Medium,
    distance: float,
    projection_prob: float = 0.5,
    source_position: float = 0.5,
    coupling: float = 1.0,
) -> float:
    """
    Heralding success: projection times both arm transmissions. For a midpoint
    source the squared half-distance transmission equals the full-path one.
    """
    first = distance * source_position
    return (
        projection_prob
        * efficiency(medium, first, coupling)
        * efficiency(medium, distance - first, coupling)
    )


def rate_per_copy(link: LinkConfig, medium: Medium, herald: Medium) -> float:
    p_s = success_probability(medium, link.distance, link.projection_prob, link.source_position, link.coupling)
    return p_s / attempt_time(link.distance, medium.speed, herald.speed, link.source_position)


def effective_rate(link: LinkConfig, medium: Medium, herald: Medium) -> float:
    """M p_s / t_a."""
    return link.multiplicity * rate_per_copy(link, medium, herald)


def required_multiplicity(target_rate: float, link: LinkConfig, medium: Medium, herald: Medium) -> int:
    if target_rate <= 0:
        raise RangeError(f"target rate must be > 0 Hz, got {target_rate}")
    per_copy = rate_per_copy(link, medium, herald)
    if per_copy == 0:
        raise RangeError("the link never heralds; no multiplicity reaches the target")
    return max(1, math.ceil(target_rate / per_copy))


@dataclass(frozen=True)
class LinkBudgetReport:
    medium: str
    herald: str
    distance: float
    arm_lengths: tuple[float, float]
    arm_efficiency: float
    arm_loss: float
    path_efficiency: float
    attempt_time: float
    success_probability: float
    rate_per_copy: float
    rate: float
    multiplicity: int
    required_multiplicity: Optional[int] = None


def link_budget(
    link: LinkConfig,
    medium: Medium,
    herald: Medium,
    target_rate: Optional[float] = None,
) -> LinkBudgetReport:
    """Every quantity of the link at once; arm figures refer to the longer arm."""
    arms = link.arms
    arm_eta = efficiency(medium, max(arms), link.coupling)
    per_copy = rate_per_copy(link, medium, herald)
    return LinkBudgetReport(
        medium=medium.name,
        herald=herald.name,
        distance=link.distance,
        arm_lengths=arms,
        arm_efficiency=arm_eta,
        arm_loss=1.0 - arm_eta,
        path_efficiency=efficiency(medium, link.distance),
        attempt_time=attempt_time(link.distance, medium.speed, herald.speed, link.source_position),
        success_probability=success_probability(
            medium, link.distance, link.projection_prob, link.source_position, link.coupling
        ),
        rate_per_copy=per_copy,
        rate=link.multiplicity * per_copy,
        multiplicity=link.multiplicity,
        required_multiplicity=(
            None if target_rate is None else required_multiplicity(target_rate, link, medium, herald)
        ),
    )
