from contextlib import contextmanager
import logging
from pathlib import Path
from typing import Optional

from numpy.linalg import LinAlgError
import typer
from rich.console import Console
from rich.logging import RichHandler
from tacit_core import (
    BudgetExceeded,
    InputError,
    LinkConfig,
    LossModel,
    NumericalError,
    ScanSpec,
    classical_value,
    link_budget,
    lossy_value,
    quantum_value,
    scan as run_scan,
    threshold_efficiency,
)
from tacit_core.link_budget import get_medium, max_arm_length

from . import config, factory, render

app = typer.Typer(help="Tacit coordination (Bell game) solver")
console = Console()
err_console = Console(stderr=True)

# --- Shared options ---

PROBLEM_FILE = typer.Argument(None, help="Problem JSON file")
PROBLEM = typer.Option(None, "--problem", help="Built-in problem: hedge-or-not or chsh")
P = typer.Option(None, "--p", help="Input probability of the built-in problem")
BETA = typer.Option(None, "--beta", help="Partial preference of hedge-or-not")
ANTI = typer.Option(False, "--anti", help="Use anti-CHSH")
DIMS = typer.Option(None, "--dims", help="Hilbert dimension per party, e.g. 2,2")
METHOD = typer.Option(None, "--method", help="grid, cmaes or both")
GRID_SIZE = typer.Option(None, "--grid-size", help="Grid points per continuous axis")
SEED = typer.Option(None, "--seed", help="Seed for CMA-ES restarts")
BUDGET = typer.Option(None, "--budget", help="Objective evaluations per optimization")
WORKERS = typer.Option(None, "--workers", "-w", help="Worker processes")
NO_REDUCE = typer.Option(False, "--no-reduce", help="Search the full parameter space")
TABLE = typer.Option(False, "--table", help="Print a table instead of JSON")


@app.callback()
def main(verbose: int = typer.Option(0, "--verbose", "-v", count=True)):
    """Solve and scan tacit coordination problems."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


@contextmanager
def _errors():
    """Map library errors to the exit-code contract."""
    try:
        yield
    except BudgetExceeded as e:
        err_console.print(f"[bold red]Budget Exceeded:[/bold red] {e}")
        raise typer.Exit(3)
    except (NumericalError, LinAlgError, ArithmeticError) as e:
        err_console.print(f"[bold red]Numerical Failure:[/bold red] {e}")
        raise typer.Exit(4)
    except (InputError, ValueError) as e:
        err_console.print(f"[bold red]Input Error:[/bold red] {e}")
        raise typer.Exit(2)


def _emit(title: str, payload: dict, table: bool):
    if table:
        console.print(render.value_table(title, payload))
    else:
        print(render.dumps(payload))


def _solver(method, grid_size, seed, budget, workers, no_reduce, **extra):
    return config.solver_config(
        method=method,
        grid_size=grid_size,
        seed=seed,
        budget=budget,
        workers=workers,
        reduce=False if no_reduce else None,
        **extra,
    )


# --- Commands ---


@app.command()
def classical(
    problem_file: Optional[Path] = PROBLEM_FILE,
    problem: Optional[str] = PROBLEM,
    p: Optional[float] = P,
    beta: Optional[float] = BETA,
    anti: bool = ANTI,
    budget: Optional[int] = typer.Option(None, "--budget", help="Deterministic strategies to enumerate at most"),
    workers: Optional[int] = WORKERS,
    table: bool = TABLE,
):
    """Classical value by exhaustive search."""
    with _errors():
        tc = factory.get_problem(problem_file, problem, p, beta, anti)
        solver = config.solver_config(workers=workers, classical_budget=budget)
        with err_console.status("[green]Enumerating deterministic strategies..."):
            report = classical_value(tc, solver)
        _emit("Classical value", render.classical_payload(tc, report), table)


@app.command()
def quantum(
    problem_file: Optional[Path] = PROBLEM_FILE,
    problem: Optional[str] = PROBLEM,
    p: Optional[float] = P,
    beta: Optional[float] = BETA,
    anti: bool = ANTI,
    dims: Optional[str] = DIMS,
    method: Optional[str] = METHOD,
    grid_size: Optional[int] = GRID_SIZE,
    seed: Optional[int] = SEED,
    budget: Optional[int] = BUDGET,
    workers: Optional[int] = WORKERS,
    no_reduce: bool = NO_REDUCE,
    table: bool = TABLE,
):
    """Quantum value by optimizing projective measurements."""
    with _errors():
        tc = factory.get_problem(problem_file, problem, p, beta, anti)
        solver = _solver(method, grid_size, seed, budget, workers, no_reduce)
        with err_console.status("[green]Optimizing measurements..."):
            report = quantum_value(tc, factory.parse_dims(dims), solver)
        _emit("Quantum value", render.quantum_payload(report), table)


@app.command()
def lossy(
    problem_file: Optional[Path] = PROBLEM_FILE,
    problem: Optional[str] = PROBLEM,
    p: Optional[float] = P,
    beta: Optional[float] = BETA,
    anti: bool = ANTI,
    eta: str = typer.Option(..., "--eta", help="Efficiency, or one per party: 0.9,0.95"),
    dims: Optional[str] = DIMS,
    method: Optional[str] = METHOD,
    grid_size: Optional[int] = GRID_SIZE,
    seed: Optional[int] = SEED,
    budget: Optional[int] = BUDGET,
    workers: Optional[int] = WORKERS,
    no_reduce: bool = NO_REDUCE,
    table: bool = TABLE,
):
    """Lossy value with a jointly optimized fallback strategy."""
    with _errors():
        tc = factory.get_problem(problem_file, problem, p, beta, anti)
        etas = factory.parse_floats(eta, "--eta")
        loss = LossModel.uniform(etas[0], tc.n) if len(etas) == 1 else LossModel(etas)
        solver = _solver(method, grid_size, seed, budget, workers, no_reduce)
        with err_console.status("[green]Optimizing lossy strategy..."):
            report = lossy_value(tc, loss, solver, factory.parse_dims(dims))
        _emit("Lossy value", render.lossy_payload(tc, report), table)


@app.command()
def threshold(
    problem_file: Optional[Path] = PROBLEM_FILE,
    problem: Optional[str] = PROBLEM,
    p: Optional[float] = P,
    beta: Optional[float] = BETA,
    anti: bool = ANTI,
    tol: Optional[float] = typer.Option(None, "--tol", help="Bisection tolerance on eta"),
    epsilon: Optional[float] = typer.Option(None, "--epsilon", help="Smallest advantage that counts"),
    dims: Optional[str] = DIMS,
    method: Optional[str] = METHOD,
    grid_size: Optional[int] = GRID_SIZE,
    seed: Optional[int] = SEED,
    budget: Optional[int] = BUDGET,
    workers: Optional[int] = WORKERS,
    no_reduce: bool = NO_REDUCE,
    table: bool = TABLE,
):
    """Threshold efficiency eta*."""
    with _errors():
        tc = factory.get_problem(problem_file, problem, p, beta, anti)
        solver = _solver(method, grid_size, seed, budget, workers, no_reduce, eta_tol=tol, gap_epsilon=epsilon)
        with err_console.status("[green]Bisecting on efficiency..."):
            report = threshold_efficiency(tc, solver, factory.parse_dims(dims))
        _emit("Threshold efficiency", render.threshold_payload(report), table)


@app.command()
def scan(
    quantity: str = typer.Argument(..., help="gap, eta_star, robustness or noisy_gap"),
    p_range: str = typer.Option("0,1,0.1", "--p-range", help="start,stop,step"),
    beta_range: str = typer.Option("0,1,0.1", "--beta-range", help="start,stop,step"),
    nu: float = typer.Option(0.0, "--nu", help="Depolarizing weight for noisy_gap"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="CSV file (default: stdout)"),
    method: Optional[str] = METHOD,
    grid_size: Optional[int] = GRID_SIZE,
    seed: Optional[int] = SEED,
    budget: Optional[int] = BUDGET,
    workers: Optional[int] = WORKERS,
    no_reduce: bool = NO_REDUCE,
):
    """Hedge-or-not (p, beta) grid as CSV."""
    with _errors():
        spec = ScanSpec(
            quantity=quantity,
            p_range=factory.parse_range(p_range, "--p-range"),
            beta_range=factory.parse_range(beta_range, "--beta-range"),
            nu=nu,
            config=_solver(method, grid_size, seed, budget, workers, no_reduce),
        )
        with err_console.status(f"[green]Scanning {len(spec.cells)} cells..."):
            text = render.scan_csv(run_scan(spec))
        if output is None:
            print(text, end="")
        else:
            output.write_text(text, newline="\n")
            err_console.print(f"[bold green]Wrote[/bold green] {output}")


@app.command()
def linkbudget(
    medium: str = typer.Option("fiber", "--medium", help="fiber, vacuum_guide, waveguide, free_space"),
    herald: str = typer.Option("free_space", "--herald", help="Medium of the heralding signal"),
    distance: float = typer.Option(..., "--distance", help="Separation of the parties in km"),
    multiplicity: int = typer.Option(1, "--multiplicity", "-m"),
    target_rate: Optional[float] = typer.Option(None, "--target-rate", help="Hz"),
    projection: float = typer.Option(0.5, "--projection", help="Heralding projection probability"),
    source_position: float = typer.Option(0.5, "--source-position", help="Fraction of the distance"),
    coupling: float = typer.Option(1.0, "--coupling", help="Extra per-arm efficiency"),
    eta_target: Optional[float] = typer.Option(None, "--eta-target", help="Also report the max arm length"),
    table: bool = TABLE,
):
    """Efficiencies, heralding rates and required multiplexing of a photonic link."""
    with _errors():
        link = LinkConfig(distance, multiplicity, projection, source_position, coupling)
        main_medium = get_medium(medium)
        report = link_budget(link, main_medium, get_medium(herald), target_rate)
        max_arm = None if eta_target is None else max_arm_length(main_medium, eta_target)
        _emit("Link budget", render.link_payload(report, max_arm), table)


@app.command()
def configure(
    method: Optional[str] = METHOD,
    grid_size: Optional[int] = GRID_SIZE,
    seed: Optional[int] = SEED,
    budget: Optional[int] = BUDGET,
    workers: Optional[int] = WORKERS,
):
    """Save solver defaults to the user config file."""
    values = {
        k: v
        for k, v in {
            "method": method,
            "grid_size": grid_size,
            "seed": seed,
            "budget": budget,
            "workers": workers,
        }.items()
        if v is not None
    }
    with _errors():
        config.save_config(values)
    err_console.print(f"[bold green]Saved[/bold green] {sorted(values)} to {config.CONFIG_FILE}")


if __name__ == "__main__":
    app()
