from pathlib import Path
from typing import Optional

import orjson
from tacit_core import InputError, TcProblem, make_chsh, make_hedge_or_not

PROBLEMS = ("hedge-or-not", "chsh")


def get_problem(
    problem_file: Optional[Path] = None,
    name: Optional[str] = None,
    p: Optional[float] = None,
    beta: Optional[float] = None,
    anti: bool = False,
) -> TcProblem:
    """
    Builds the problem from a JSON file or a built-in generator.
    Raises InputError if neither (or both) is given or the input is invalid.
    """
    if (problem_file is None) == (name is None):
        raise InputError("Give either a problem file or --problem (hedge-or-not, chsh).")

    if problem_file is not None:
        try:
            data = orjson.loads(problem_file.read_bytes())
        except OSError as e:
            raise InputError(f"Cannot read {problem_file}: {e}") from e
        except orjson.JSONDecodeError as e:
            raise InputError(f"{problem_file} is not valid JSON: {e}") from e
        return TcProblem.from_dict(data)

    if name == "hedge-or-not":
        if p is None or beta is None:
            raise InputError("hedge-or-not needs --p and --beta.")
        return make_hedge_or_not(p, beta)

    if name == "chsh":
        return make_chsh(0.5 if p is None else p, anti=anti)

    raise InputError(f"Unknown problem type: {name}")


def parse_floats(text: Optional[str], what: str) -> Optional[tuple[float, ...]]:
    """'0.9,0.95' -> (0.9, 0.95)."""
    if text is None:
        return None
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as e:
        raise InputError(f"{what} must be comma-separated numbers, got {text!r}") from e


def parse_dims(text: Optional[str]) -> Optional[tuple[int, ...]]:
    if text is None:
        return None
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as e:
        raise InputError(f"--dims must be comma-separated integers, got {text!r}") from e


def parse_range(text: str, what: str) -> tuple[float, float, float]:
    """'start,stop,step'."""
    values = parse_floats(text, what)
    if len(values) != 3:
        raise InputError(f"{what} must be start,stop,step, got {text!r}")
    return values
