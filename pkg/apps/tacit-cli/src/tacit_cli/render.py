"""Report payloads, JSON/CSV encoding and tables."""

from dataclasses import asdict
import math
from typing import Any, Iterable, Optional

import numpy as np
import orjson
from rich.table import Table
from tacit_core import ClassicalReport, LossyReport, QuantumReport, QuantumStrategy, TcProblem, ThresholdReport
from tacit_core.link_budget import LinkBudgetReport
from tacit_core.quantum import schmidt_decompose
from tacit_core.scans import ScanRow

SIG_DIGITS = 9


def _round(x: float) -> Optional[float]:
    if not math.isfinite(x):
        return None
    return float(f"{x:.{SIG_DIGITS}g}")


def clean(obj: Any) -> Any:
    """Round floats to 9 significant digits and turn arrays and complex numbers into JSON types."""
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _round(obj.real), "im": _round(obj.imag)}
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(payload: dict) -> str:
    return orjson.dumps(clean(payload)).decode()


def _state_payload(strategy: QuantumStrategy) -> dict:
    state = np.asarray(strategy.state)
    out = {"dims": list(strategy.dims), "state": {"re": state.real, "im": state.imag}}
    if strategy.n == 2:
        out["schmidt"] = schmidt_decompose(state, strategy.dims).coefficients
    return out


def _trace(report) -> dict:
    return {
        "method": report.method,
        "seed": report.seed,
        "evaluations": report.evaluations,
        "iterations": report.iterations,
        "method_values": report.method_values,
    }


def classical_payload(problem: TcProblem, report: ClassicalReport) -> dict:
    return {
        "value": report.value,
        "strategy": report.strategy.labelled(problem),
        "searched": report.num_strategies_searched,
    }


def quantum_payload(report: QuantumReport) -> dict:
    return {
        "value": report.value,
        **report.params.to_dict(),
        **_state_payload(report.strategy),
        "degenerate": report.degenerate,
        "trace": _trace(report),
    }


def lossy_payload(problem: TcProblem, report: LossyReport) -> dict:
    return {
        "value": report.value,
        "efficiencies": report.efficiencies,
        **report.params.to_dict(),
        **_state_payload(report.strategy),
        "fallback": report.fallback.labelled(problem),
        "trace": _trace(report),
    }


def threshold_payload(report: ThresholdReport) -> dict:
    return {
        "eta_star": report.eta_star,
        "gapless": report.gapless,
        "classical_value": report.classical_value,
        "quantum_value": report.quantum_value,
        "bracket": report.bracket,
        "bracket_valid": report.bracket_valid,
        "monotone": report.monotone,
        "samples": report.samples,
    }


def link_payload(report: LinkBudgetReport, max_arm: Optional[float] = None) -> dict:
    out = asdict(report)
    if max_arm is not None:
        out["max_arm_length"] = max_arm
    return out


def scan_csv(rows: Iterable[ScanRow]) -> str:
    lines = ["p,beta,value"]
    lines += [f"{r.p:.{SIG_DIGITS}g},{r.beta:.{SIG_DIGITS}g},{r.value:.{SIG_DIGITS}g}" for r in rows]
    return "\n".join(lines) + "\n"


def value_table(title: str, payload: dict) -> Table:
    """Two-column table of the scalar entries of a payload."""
    table = Table(title=title)
    table.add_column("Quantity", style="blue")
    table.add_column("Value", justify="right", style="green")
    for key, value in clean(payload).items():
        if isinstance(value, (int, float, str, bool)) or value is None:
            table.add_row(key, str(value))
    return table
