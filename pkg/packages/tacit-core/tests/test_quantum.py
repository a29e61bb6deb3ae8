"""Tests for Bell operators, eigenpairs and the quantum value search."""

import numpy as np
import pytest

from tacit_core import (
    DimensionError,
    InputError,
    ParamSpace,
    QuantumStrategy,
    SolverConfig,
    behavior_of,
    bell_operator,
    check_local_polytope_222,
    classical_value,
    correlation_matrix,
    expected_utility,
    largest_eigenvalue,
    make_chsh,
    make_hedge_or_not,
    quantum_value,
)
from tacit_core.oracles import chsh_bernoulli_classical, chsh_bernoulli_quantum, gap_region, tsirelson_feasible_all
from tacit_core.parameterization import (
    MeasurementParams,
    fix_nondegenerate_222,
    reduce_phase_params_n22,
    unitary_from_params,
)
from tacit_core.problems import transform_utility
from tacit_core.quantum import BellOperator, is_degenerate, schmidt_decompose

COS2_PI_8 = np.cos(np.pi / 8) ** 2


def test_optimal_chsh_bell_operator(chsh, chsh_strategy) -> None:
    pair = largest_eigenvalue(bell_operator(chsh, chsh_strategy.measurements))
    assert pair.value == pytest.approx(COS2_PI_8, abs=1e-12)
    assert not pair.degenerate


def test_bell_operator_matches_behavior(chsh, chsh_strategy) -> None:
    """<psi|H|psi> equals the expected utility of the induced behavior for any state."""
    H = bell_operator(chsh, chsh_strategy.measurements).H
    rng = np.random.default_rng(0)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    direct = float(np.real(psi.conj() @ H @ psi))
    behavior = behavior_of(chsh_strategy.with_state(psi))
    assert direct == pytest.approx(expected_utility(chsh, behavior), abs=1e-10)


def test_eigenvector_phase_is_normalized() -> None:
    H = np.diag([0.1, 0.9]).astype(complex)
    pair = largest_eigenvalue(H)
    assert pair.value == pytest.approx(0.9)
    np.testing.assert_allclose(pair.vector, [0.0, 1.0], atol=1e-15)


def test_degenerate_top_eigenvalue() -> None:
    assert largest_eigenvalue(np.eye(3)).degenerate


def test_non_hermitian_rejected() -> None:
    with pytest.raises(InputError):
        largest_eigenvalue(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(InputError):
        BellOperator(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(DimensionError):
        largest_eigenvalue(np.zeros((2, 3)))


def test_schmidt_decomposition() -> None:
    phi = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    decomposition = schmidt_decompose(phi, (2, 2))
    np.testing.assert_allclose(decomposition.coefficients, [1 / np.sqrt(2)] * 2, atol=1e-12)
    product = np.kron([0.6, 0.8], [1.0, 0.0])
    np.testing.assert_allclose(schmidt_decompose(product, (2, 2)).coefficients, [1.0, 0.0], atol=1e-12)
    rebuilt = sum(
        c * np.kron(decomposition.left[:, k], decomposition.right[:, k])
        for k, c in enumerate(decomposition.coefficients)
    )
    np.testing.assert_allclose(rebuilt, phi, atol=1e-12)


def test_schmidt_needs_two_parties() -> None:
    with pytest.raises(DimensionError):
        schmidt_decompose(np.ones(8) / np.sqrt(8), (2, 2, 2))


def test_degenerate_strategy_detection(chsh_strategy) -> None:
    assert not is_degenerate(chsh_strategy)


def test_chsh_quantum_value(chsh, fast_config) -> None:
    report = quantum_value(chsh, config=fast_config)
    assert report.value == pytest.approx(COS2_PI_8, abs=1e-6)
    assert report.method == "grid"
    assert report.strategy.dims == (2, 2)


@pytest.mark.parametrize("p", [0.3, 0.6])
def test_chsh_bernoulli_quantum_value(p, fast_config) -> None:
    report = quantum_value(make_chsh(p), config=fast_config)
    assert report.value == pytest.approx(chsh_bernoulli_quantum(p), abs=1e-5)


def test_hedge_or_not_quantum_advantage(hedge, fast_config) -> None:
    """q* exceeds c* = 0.79 and the reported state attains the value."""
    report = quantum_value(hedge, config=fast_config)
    assert report.value > 0.792
    assert report.value > classical_value(hedge).value
    attained = expected_utility(hedge, behavior_of(report.strategy))
    assert attained == pytest.approx(report.value, abs=1e-10)


def test_quantum_never_below_classical() -> None:
    """A gapless CHSH instance still reaches c*."""
    problem = make_chsh(0.1)
    report = quantum_value(problem, config=SolverConfig(grid_size=5, refine_top=2))
    assert report.value >= classical_value(problem).value - 1e-9


def test_both_methods_recorded(chsh) -> None:
    config = SolverConfig(method="both", grid_size=5, refine_top=2, restarts=2, budget=3000)
    report = quantum_value(chsh, config=config)
    assert set(report.method_values) == {"grid", "cmaes"}
    assert report.value == pytest.approx(max(report.method_values.values()), abs=1e-9)


@pytest.mark.slow
def test_full_space_matches_reduced(chsh) -> None:
    """Dropping the reductions does not change the optimum."""
    config = SolverConfig(grid_size=5, refine_top=4, reduce=False, budget=200_000)
    report = quantum_value(chsh, config=config)
    assert report.value == pytest.approx(COS2_PI_8, abs=1e-6)


def test_dimension_checks(chsh) -> None:
    with pytest.raises(DimensionError):
        quantum_value(chsh, dims=(1, 2))
    with pytest.raises(DimensionError):
        quantum_value(chsh, dims=(2, 2, 2))


@pytest.mark.parametrize("scale", [1e-3, 1e3, 1e6, 1e9])
def test_value_scales_with_utility(hedge, fast_config, scale) -> None:
    """Eigenpair checks are relative to the operator, so large utilities are accepted."""
    base = quantum_value(hedge, config=fast_config).value
    scaled = quantum_value(transform_utility(hedge, scale=scale), config=fast_config)
    assert scaled.value == pytest.approx(scale * base, rel=1e-6)


def test_large_operator_is_accepted(chsh, chsh_strategy) -> None:
    H = 1e12 * bell_operator(chsh, chsh_strategy.measurements).H
    assert BellOperator(H).dim == 4
    assert largest_eigenvalue(H).value == pytest.approx(1e12 * COS2_PI_8, rel=1e-12)


def test_schmidt_of_hedge_state() -> None:
    phi = np.array([0.0401, -0.902, -0.428, -0.0401])
    coefficients = schmidt_decompose(phi, (2, 2)).coefficients
    np.testing.assert_allclose(coefficients, [0.903, 0.429], atol=5e-3)


@pytest.mark.parametrize("problem", [make_chsh(0.5), make_hedge_or_not(0.3, 0.3)], ids=["chsh", "hedge"])
def test_phase_reduction_keeps_spectrum(problem) -> None:
    rng = np.random.default_rng(3)
    for _ in range(5):
        params = MeasurementParams(
            dims=(2, 2),
            dec_sizes=(2, 2),
            angles=tuple(rng.uniform(0.0, 2 * np.pi, size=(1, 2)) for _ in range(2)),
            partitions=(((0, 1), (0, 1)), ((0, 1), (1, 0))),
        )
        full = np.linalg.eigvalsh(bell_operator(problem, params.measurements()).H)
        reduced = np.linalg.eigvalsh(bell_operator(problem, reduce_phase_params_n22(params).measurements()).H)
        np.testing.assert_allclose(full, reduced, atol=1e-10)


def test_local_unitaries_keep_value(chsh, chsh_strategy) -> None:
    rng = np.random.default_rng(5)
    for _ in range(5):
        rotated = []
        for ops in chsh_strategy.measurements:
            u = unitary_from_params(2, rng.uniform(0.0, 2 * np.pi, size=4))
            rotated.append(u @ ops @ u.conj().T)
        value = largest_eigenvalue(bell_operator(chsh, rotated)).value
        assert value == pytest.approx(COS2_PI_8, abs=1e-10)


def test_degenerate_strategies_are_local() -> None:
    """A party with a trivial measurement never leaves the local polytope."""
    rng = np.random.default_rng(11)
    trivial = np.stack([np.eye(2), np.zeros((2, 2))]).astype(complex)
    computational = np.stack([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]).astype(complex)

    def rotated() -> np.ndarray:
        u = unitary_from_params(2, rng.uniform(0.0, 2 * np.pi, size=4))
        return u @ computational @ u.conj().T

    for _ in range(10):
        state = rng.normal(size=4) + 1j * rng.normal(size=4)
        state /= np.linalg.norm(state)
        alice = np.stack([trivial, rotated()])
        bob = np.stack([rotated(), rotated()])
        strategy = QuantumStrategy((2, 2), (alice, bob), state)
        assert is_degenerate(strategy)
        assert check_local_polytope_222(behavior_of(strategy)).inside


@pytest.mark.parametrize(
    "problem", [make_chsh(0.5), make_chsh(0.3), make_hedge_or_not(0.3, 0.3)], ids=["chsh", "chsh-0.3", "hedge"]
)
def test_optimal_correlations_meet_arcsin_bound(problem, fast_config) -> None:
    report = quantum_value(problem, config=fast_config)
    c = correlation_matrix(behavior_of(report.strategy)).c
    assert tsirelson_feasible_all(c[0, 0], c[0, 1], c[1, 0], c[1, 1])


def test_partition_pinning_keeps_value(hedge, fast_config) -> None:
    """Searching every partition finds nothing the pinned nondegenerate one misses."""
    pinned = quantum_value(hedge, config=fast_config)
    free = ParamSpace((2, 2), (2, 2), (2, 2), reduce_phases=True, pin_partitions=False)
    unpinned = quantum_value(hedge, config=fast_config, space=free)
    assert unpinned.value == pytest.approx(pinned.value, abs=1e-6)
    assert fix_nondegenerate_222(pinned.params).partitions == pinned.params.partitions


def test_balanced_hedge_has_no_gap(fast_config) -> None:
    problem = make_hedge_or_not(0.5, 0.5)
    q = quantum_value(problem, config=fast_config).value
    assert q == pytest.approx(classical_value(problem).value, abs=1e-9)


@pytest.mark.slow
def test_cmaes_alone_reaches_chsh_optimum(chsh) -> None:
    report = quantum_value(chsh, config=SolverConfig(method="cmaes"))
    assert report.method == "cmaes"
    assert report.value == pytest.approx(COS2_PI_8, abs=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("p", [round(0.05 * k, 2) for k in range(21)])
def test_chsh_bernoulli_sweep(p, fast_config) -> None:
    problem = make_chsh(p)
    c = classical_value(problem).value
    assert c == pytest.approx(chsh_bernoulli_classical(p), abs=1e-12)
    q = quantum_value(problem, config=fast_config).value
    assert q == pytest.approx(chsh_bernoulli_quantum(p), abs=1e-5)
    if gap_region(p):
        assert q - c > 1e-6
    else:
        assert q - c <= 1e-9
