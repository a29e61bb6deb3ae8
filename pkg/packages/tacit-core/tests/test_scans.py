"""Tests for (p, beta) scans of hedge-or-not."""

import math

import pytest

from tacit_core import InputError, RangeError, ScanSpec, SolverConfig, gap, make_hedge_or_not, noisy_gap_scan, scan
from tacit_core.scans import grid_values

FAST = SolverConfig(grid_size=9, refine_top=4)
FULL = SolverConfig(grid_size=9, refine_top=4, workers=4)
GRID = grid_values(0.0, 1.0, 0.1)
COS2_PI_8 = math.cos(math.pi / 8) ** 2


def test_grid_values() -> None:
    values = grid_values(0.0, 1.0, 0.1)
    assert len(values) == 11
    assert values[3] == 0.3
    assert values[-1] == 1.0
    assert grid_values(0.3, 0.3, 0.1) == [0.3]
    with pytest.raises(RangeError):
        grid_values(0.0, 1.0, 0.0)


def test_gap_worked_example() -> None:
    report = gap(make_hedge_or_not(0.3, 0.3), FAST)
    assert report.classical == pytest.approx(0.79)
    assert report.gapped
    assert report.u_fact == pytest.approx(0.5, abs=1e-9)


def test_anti_chsh_gap() -> None:
    """beta = 0, p = 1/2 is anti-CHSH with the Tsirelson gap."""
    report = gap(make_hedge_or_not(0.5, 0.0), FAST)
    assert report.gap == pytest.approx(COS2_PI_8 - 0.75, abs=1e-6)


def test_beta_mirror_symmetry() -> None:
    low = gap(make_hedge_or_not(0.4, 0.2), FAST)
    high = gap(make_hedge_or_not(0.4, 0.8), FAST)
    assert low.classical == pytest.approx(high.classical, abs=1e-12)
    assert low.quantum == pytest.approx(high.quantum, abs=1e-6)


def test_noisy_gap_vanishes_with_noise() -> None:
    report = gap(make_hedge_or_not(0.5, 0.0), FAST)
    assert report.noisy_gap(0.0) == pytest.approx(report.gap)
    assert report.noisy_gap(0.2) > 0
    assert report.noisy_gap(0.3) == 0.0


def test_scan_rows_in_grid_order() -> None:
    spec = ScanSpec("gap", p_range=(0.3, 0.5, 0.2), beta_range=(0.0, 0.3, 0.3), config=FAST)
    rows = scan(spec)
    assert [(r.p, r.beta) for r in rows] == [(0.3, 0.0), (0.3, 0.3), (0.5, 0.0), (0.5, 0.3)]
    assert all(r.value >= 0 for r in rows)
    assert rows[2].value == pytest.approx(COS2_PI_8 - 0.75, abs=1e-6)


def test_robustness_scan_cell() -> None:
    spec = ScanSpec("robustness", p_range=(0.5, 0.5, 0.1), beta_range=(0.0, 0.0, 0.1), config=FAST)
    (row,) = scan(spec)
    assert row.value == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-5)


def test_scan_spec_validation() -> None:
    with pytest.raises(InputError):
        ScanSpec("volume")
    with pytest.raises(RangeError):
        ScanSpec("noisy_gap", nu=1.5)
    with pytest.raises(RangeError):
        ScanSpec("gap", p_range=(0.0, 1.5, 0.1))


def test_noisy_regions_nest() -> None:
    """A cell gapped under more noise is gapped under less."""
    grids = noisy_gap_scan([0.3, 0.5], [0.0, 0.5], [0.0, 0.1, 0.25], FAST)
    for less, more in [(0.0, 0.1), (0.1, 0.25)]:
        for a, b in zip(grids[less], grids[more]):
            assert (a.p, a.beta) == (b.p, b.beta)
            if b.value > 0:
                assert a.value > 0


@pytest.fixture(scope="module")
def gap_table():
    """The 11 x 11 gap grid, keyed by (p, beta)."""
    return {(r.p, r.beta): r.value for r in scan(ScanSpec("gap", config=FULL))}


@pytest.mark.slow
def test_full_gap_scan(gap_table) -> None:
    """Non-negative gaps, mirror symmetric in beta and in p."""
    assert len(gap_table) == 121
    assert all(v >= 0 for v in gap_table.values())
    for (p, beta), value in gap_table.items():
        assert value == pytest.approx(gap_table[(p, round(1 - beta, 12))], abs=1e-5)
        assert value == pytest.approx(gap_table[(round(1 - p, 12), beta)], abs=1e-5)
    assert gap_table[(0.5, 0.0)] > 0


@pytest.mark.slow
def test_gap_grid_regions(gap_table) -> None:
    """beta = 1/2 is gapless everywhere; at beta = 0 the gap spans p in [0.3, 0.7]."""
    assert all(gap_table[(p, 0.5)] == 0.0 for p in GRID)
    gapped = {p for p in GRID if gap_table[(p, 0.0)] > 0}
    assert gapped == {0.3, 0.4, 0.5, 0.6, 0.7}


@pytest.mark.slow
def test_eta_star_grid(gap_table) -> None:
    rows = scan(ScanSpec("eta_star", config=FULL))
    for row in rows:
        assert 2 / 3 - 1e-9 <= row.value <= 1.0
        if gap_table[(row.p, row.beta)] == 0.0:
            assert row.value == 1.0


@pytest.mark.slow
def test_robustness_grid() -> None:
    table = {(r.p, r.beta): r.value for r in scan(ScanSpec("robustness", config=FULL))}
    assert max(table.values()) <= 1 - 1 / math.sqrt(2) + 1e-3
    assert table[(0.5, 0.0)] == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-3)


@pytest.mark.slow
def test_noisy_regions_nest_on_full_grid() -> None:
    nus = [0.0, 0.05, 0.1, 0.2]
    grids = noisy_gap_scan(GRID, GRID, nus, FULL)
    for less, more in zip(nus, nus[1:]):
        for a, b in zip(grids[less], grids[more]):
            assert (a.p, a.beta) == (b.p, b.beta)
            if b.value > 0:
                assert a.value > 0
                assert a.value > b.value


@pytest.mark.slow
def test_eta_star_cell() -> None:
    (row,) = scan(ScanSpec("eta_star", p_range=(0.3, 0.3, 0.1), beta_range=(0.3, 0.3, 0.1), config=FAST))
    assert row.value == pytest.approx(0.941, abs=2e-3)
