"""End-to-end tests of the tacit command line."""

import math

import numpy as np
import orjson
import pytest
from typer.testing import CliRunner

from tacit_cli import config
from tacit_cli.main import app

runner = CliRunner()

FAST = ["--grid-size", "9"]


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    monkeypatch.setattr(config, "CONFIG_DIR", tmp_path / "tacit-cli")
    monkeypatch.setattr(config, "CONFIG_FILE", tmp_path / "tacit-cli" / "config.json")
    monkeypatch.delenv(config.SEED_ENV, raising=False)


def _json(result) -> dict:
    """The JSON document printed on stdout (stderr may be mixed into the output)."""
    for line in result.output.splitlines():
        if line.startswith("{"):
            return orjson.loads(line)
    raise AssertionError(f"no JSON in output: {result.output!r}")


def test_classical_builtin() -> None:
    result = runner.invoke(app, ["classical", "--problem", "hedge-or-not", "--p", "0.3", "--beta", "0.3"])
    assert result.exit_code == 0, result.output
    payload = _json(result)
    assert payload["value"] == pytest.approx(0.79)
    assert payload["searched"] == 16
    assert set(payload["strategy"][0]) == {"N", "I"}


def test_classical_from_file(tmp_path) -> None:
    document = {
        "parties": 2,
        "observations": [["0", "1"], ["0", "1"]],
        "decisions": [["0", "1"], ["0", "1"]],
        "input_distribution": {"type": "bernoulli_product", "p": 0.5},
        "utility": [[1, 0, 0, 1], [1, 0, 0, 1], [1, 0, 0, 1], [0, 1, 1, 0]],
    }
    path = tmp_path / "chsh.json"
    path.write_bytes(orjson.dumps(document))
    result = runner.invoke(app, ["classical", str(path)])
    assert result.exit_code == 0, result.output
    assert _json(result)["value"] == pytest.approx(0.75)


def test_quantum_chsh() -> None:
    result = runner.invoke(app, ["quantum", "--problem", "chsh", *FAST])
    assert result.exit_code == 0, result.output
    payload = _json(result)
    assert payload["value"] == pytest.approx(math.cos(math.pi / 8) ** 2, abs=1e-6)
    assert payload["dims"] == [2, 2]
    assert payload["trace"]["method"] == "grid"
    assert payload["schmidt"][0] == pytest.approx(1 / math.sqrt(2), abs=1e-4)


def test_lossy_worked_example() -> None:
    result = runner.invoke(
        app, ["lossy", "--problem", "hedge-or-not", "--p", "0.3", "--beta", "0.3", "--eta", "0.95", *FAST]
    )
    assert result.exit_code == 0, result.output
    payload = _json(result)
    assert payload["value"] == pytest.approx(0.792, abs=2e-3)
    assert payload["efficiencies"] == [0.95, 0.95]
    assert len(payload["fallback"]) == 2


def test_lossy_per_party_efficiencies() -> None:
    result = runner.invoke(app, ["lossy", "--problem", "chsh", "--eta", "1,0", *FAST])
    assert result.exit_code == 0, result.output
    assert _json(result)["value"] == pytest.approx(0.75, abs=1e-9)


def test_threshold_gapless() -> None:
    result = runner.invoke(app, ["threshold", "--problem", "chsh", "--p", "0.1", *FAST])
    assert result.exit_code == 0, result.output
    payload = _json(result)
    assert payload["gapless"] is True
    assert payload["eta_star"] == 1.0


def test_table_output() -> None:
    result = runner.invoke(app, ["classical", "--problem", "chsh", "--table"])
    assert result.exit_code == 0, result.output
    assert "Classical value" in result.output
    assert "0.75" in result.output


def test_scan_csv(tmp_path) -> None:
    out = tmp_path / "gap.csv"
    result = runner.invoke(
        app, ["scan", "gap", "--p-range", "0.5,0.5,0.1", "--beta-range", "0,0.5,0.5", *FAST, "--output", str(out)]
    )
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert lines[0] == "p,beta,value"
    assert len(lines) == 3
    p, beta, value = lines[1].split(",")
    assert (p, beta) == ("0.5", "0")
    assert float(value) == pytest.approx(math.cos(math.pi / 8) ** 2 - 0.75, abs=1e-6)


def test_linkbudget() -> None:
    result = runner.invoke(app, ["linkbudget", "--distance", "56.3", "--target-rate", "1e6", "--eta-target", "0.6667"])
    assert result.exit_code == 0, result.output
    payload = _json(result)
    assert payload["rate"] == pytest.approx(240, rel=0.05)
    assert payload["required_multiplicity"] == pytest.approx(4300, rel=0.05)
    assert payload["max_arm_length"] == pytest.approx(10.358, abs=0.01)


def test_infinite_arm_is_null() -> None:
    result = runner.invoke(app, ["linkbudget", "--medium", "free_space", "--distance", "10", "--eta-target", "0.5"])
    assert result.exit_code == 0, result.output
    assert _json(result)["max_arm_length"] is None


@pytest.mark.parametrize(
    "args",
    [
        ["classical"],
        ["classical", "--problem", "hedge-or-not", "--p", "0.3"],
        ["classical", "--problem", "poker"],
        ["quantum", "--problem", "chsh", "--dims", "2,x"],
        ["lossy", "--problem", "chsh", "--eta", "1.5"],
        ["linkbudget", "--medium", "copper", "--distance", "10"],
        ["scan", "volume"],
    ],
)
def test_input_errors_exit_2(args) -> None:
    result = runner.invoke(app, args)
    assert result.exit_code == 2, result.output


def test_missing_file_exits_2(tmp_path) -> None:
    result = runner.invoke(app, ["classical", str(tmp_path / "missing.json")])
    assert result.exit_code == 2


def test_budget_exceeded_exits_3() -> None:
    result = runner.invoke(app, ["quantum", "--problem", "chsh", "--budget", "10"])
    assert result.exit_code == 3
    assert "Budget" in result.output


def test_classical_budget_exits_3() -> None:
    args = ["classical", "--problem", "hedge-or-not", "--p", "0.3", "--beta", "0.3", "--budget", "10"]
    result = runner.invoke(app, args)
    assert result.exit_code == 3
    assert "Budget" in result.output


@pytest.mark.parametrize("error", [np.linalg.LinAlgError("SVD did not converge"), FloatingPointError("overflow")])
def test_numerical_errors_exit_4(monkeypatch, error) -> None:
    def failing(*args, **kwargs):
        raise error

    monkeypatch.setattr("tacit_cli.main.classical_value", failing)
    result = runner.invoke(app, ["classical", "--problem", "chsh"])
    assert result.exit_code == 4
    assert "Numerical Failure" in result.output


def test_configure_then_use(tmp_path) -> None:
    result = runner.invoke(app, ["configure", "--grid-size", "9", "--seed", "7"])
    assert result.exit_code == 0, result.output
    saved = orjson.loads(config.CONFIG_FILE.read_bytes())
    assert saved == {"grid_size": 9, "seed": 7}
    assert config.solver_config().grid_size == 9
    assert config.solver_config(grid_size=5).grid_size == 5


def test_seed_from_environment(monkeypatch) -> None:
    monkeypatch.setenv(config.SEED_ENV, "123")
    assert config.solver_config().seed == 123
    assert config.solver_config(seed=4).seed == 4


def test_unreadable_config_is_ignored() -> None:
    config.CONFIG_DIR.mkdir(parents=True)
    config.CONFIG_FILE.write_text("{not json")
    assert config.get_config() == {}
    assert config.solver_config().grid_size == 20


def test_configure_rejects_bad_values() -> None:
    result = runner.invoke(app, ["configure", "--method", "annealing"])
    assert result.exit_code == 2
    assert not config.CONFIG_FILE.exists()
