from .behaviors import (
    check_local_polytope_222,
    check_no_signaling,
    correlation_matrix,
    deterministic_behavior,
    expected_utility,
    product_behavior,
)
from .classical import ClassicalReport, classical_value
from .config import SolverConfig
from .errors import (
    BudgetExceeded,
    DimensionError,
    InputError,
    NumericalError,
    RangeError,
    TcError,
    UnsupportedError,
)
from .interfaces import SearchBackend, SearchOutcome, SearchSpace
from .link_budget import MEDIA, LinkConfig, Medium, link_budget
from .lossy import LossModel, LossyReport, ThresholdReport, lossy_value, threshold_efficiency
from .models import (
    Behavior,
    CorrelationMatrix,
    DeterministicStrategy,
    QuantumStrategy,
    TcProblem,
    WeightedUtilityArray,
)
from .noise import NoiseModel, noisy_expected_utility, robustness, strategy_robustness
from .parameterization import MeasurementParams, ParamSpace
from .problems import anti_array, is_xor_array, make_chsh, make_hedge_or_not, permute_problem
from .quantum import QuantumReport, behavior_of, bell_operator, largest_eigenvalue, quantum_value
from .scans import ScanSpec, gap, noisy_gap_scan, scan
from .search import CmaesSearch, GridSearch

__all__ = [
    "Behavior",
    "BudgetExceeded",
    "ClassicalReport",
    "CmaesSearch",
    "CorrelationMatrix",
    "DeterministicStrategy",
    "DimensionError",
    "GridSearch",
    "InputError",
    "LinkConfig",
    "LossModel",
    "LossyReport",
    "MEDIA",
    "MeasurementParams",
    "Medium",
    "NoiseModel",
    "NumericalError",
    "ParamSpace",
    "QuantumReport",
    "QuantumStrategy",
    "RangeError",
    "ScanSpec",
    "SearchBackend",
    "SearchOutcome",
    "SearchSpace",
    "SolverConfig",
    "TcError",
    "TcProblem",
    "ThresholdReport",
    "UnsupportedError",
    "WeightedUtilityArray",
    "anti_array",
    "behavior_of",
    "bell_operator",
    "check_local_polytope_222",
    "check_no_signaling",
    "classical_value",
    "correlation_matrix",
    "deterministic_behavior",
    "expected_utility",
    "gap",
    "is_xor_array",
    "largest_eigenvalue",
    "link_budget",
    "lossy_value",
    "make_chsh",
    "make_hedge_or_not",
    "noisy_expected_utility",
    "noisy_gap_scan",
    "permute_problem",
    "product_behavior",
    "quantum_value",
    "robustness",
    "scan",
    "strategy_robustness",
    "threshold_efficiency",
]
