"""Tests for the grid and CMA-ES backends on toy objectives."""

import cma
import numpy as np
import pytest
from scipy.stats import norm

from tacit_core import BudgetExceeded, CmaesSearch, GridSearch, RangeError, SearchSpace
from tacit_core.parallel import parallel_map
from tacit_core.search.cmaes import margin_std


def bump(x, z) -> float:
    """Peak 1 + z[0] at x = (1, 2)."""
    return float(z[0] - (x[0] - 1.0) ** 2 - (x[1] - 2.0) ** 2) + 1.0


def plateau(x, z) -> float:
    return 0.0


SPACE = SearchSpace(lower=np.array([0.0, 0.0]), upper=np.array([3.0, 3.0]), choices=(3,))


def test_space_properties() -> None:
    assert SPACE.num_continuous == 2
    assert SPACE.num_discrete == 1
    assert SPACE.discrete_count == 3
    np.testing.assert_allclose(SPACE.span, [3.0, 3.0])


def test_grid_finds_peak() -> None:
    outcome = GridSearch(grid_size=7, refine_top=2).maximize(bump, SPACE)
    assert outcome.value == pytest.approx(3.0, abs=1e-8)
    np.testing.assert_allclose(outcome.x, [1.0, 2.0], atol=1e-4)
    assert outcome.z == (2,)
    assert outcome.method == "grid"
    assert outcome.evaluations >= 7 * 7 * 3


def test_grid_budget() -> None:
    with pytest.raises(BudgetExceeded):
        GridSearch(grid_size=20, budget=100).maximize(bump, SPACE)


def test_grid_ties_keep_first_candidate() -> None:
    outcome = GridSearch(grid_size=3, refine_top=1).maximize(plateau, SPACE)
    assert outcome.value == 0.0
    assert outcome.z == (0,)


def test_grid_uses_warm_start() -> None:
    """A warm start beats a coarse grid without refinement room."""
    outcome = GridSearch(grid_size=2, refine_top=0).maximize(bump, SPACE, warm_starts=[(np.array([1.0, 2.0]), (2,))])
    assert outcome.value == pytest.approx(3.0, abs=1e-10)


def test_grid_without_continuous_variables() -> None:
    space = SearchSpace(lower=np.zeros(0), upper=np.zeros(0), choices=(2, 3))
    outcome = GridSearch().maximize(lambda x, z: float(z[0] + z[1]), space)
    assert outcome.value == 3.0
    assert outcome.z == (1, 2)


def test_cmaes_finds_peak() -> None:
    outcome = CmaesSearch(restarts=2, seed=1, budget=4000).maximize(bump, SPACE)
    assert outcome.value == pytest.approx(3.0, abs=1e-6)
    assert outcome.z == (2,)
    assert len(outcome.trace) == 2


def test_cmaes_is_reproducible() -> None:
    first = CmaesSearch(restarts=2, seed=42, budget=2000).maximize(bump, SPACE)
    second = CmaesSearch(restarts=2, seed=42, budget=2000).maximize(bump, SPACE)
    assert first.value == second.value
    np.testing.assert_array_equal(first.x, second.x)


def test_cmaes_single_variable() -> None:
    """One coordinate is padded to the two pycma needs."""
    space = SearchSpace(lower=np.array([0.0]), upper=np.array([2.0]))
    outcome = CmaesSearch(restarts=1, budget=1000).maximize(lambda x, z: -float((x[0] - 0.5) ** 2), space)
    assert outcome.value == pytest.approx(0.0, abs=1e-8)
    np.testing.assert_allclose(outcome.x, [0.5], atol=1e-4)


@pytest.mark.parametrize("alpha", [1e-3, 1 / 12, 0.3])
def test_margin_std(alpha) -> None:
    """From a cell center, the two tails past the half-integer edges hold alpha."""
    assert 2 * norm.sf(0.5 / margin_std(alpha)) == pytest.approx(alpha, rel=1e-9)


def test_margin_range() -> None:
    for alpha in (0.0, 1.0):
        with pytest.raises(RangeError):
            margin_std(alpha)


def test_cmaes_floors_discrete_steps(monkeypatch) -> None:
    seen = []
    original = cma.CMAEvolutionStrategy

    def recording(x0, sigma0, options):
        seen.append(options)
        return original(x0, sigma0, options)

    monkeypatch.setattr(cma, "CMAEvolutionStrategy", recording)
    CmaesSearch(restarts=1, popsize=6, budget=600).maximize(bump, SPACE)
    assert seen[0]["minstd"] == pytest.approx([0.0, 0.0, margin_std(1 / 18)])
    seen.clear()
    CmaesSearch(restarts=1, popsize=6, budget=600, margin=0.05).maximize(bump, SPACE)
    assert seen[0]["minstd"][2] == pytest.approx(margin_std(0.05))


def test_cmaes_reaches_an_unfavored_choice() -> None:
    """Choices 0 to 2 score alike; only the last one pays."""
    space = SearchSpace(lower=np.array([0.0, 0.0]), upper=np.array([3.0, 3.0]), choices=(4,))

    def jackpot(x, z) -> float:
        return 3.0 * (z[0] == 3) - (x[0] - 1.0) ** 2 - (x[1] - 2.0) ** 2

    outcome = CmaesSearch(restarts=2, seed=3, budget=4000).maximize(jackpot, space)
    assert outcome.z == (3,)
    assert outcome.value == pytest.approx(3.0, abs=1e-6)


def test_parallel_map_keeps_order() -> None:
    assert parallel_map(abs, [-3, -2, -1, 0, 1, 2], workers=2) == [3, 2, 1, 0, 1, 2]
    assert parallel_map(abs, [], workers=3) == []
