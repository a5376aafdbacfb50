"""Reward shaping: spread/lines/height terms, cost deduction, overflow."""

import math

import numpy as np
import pytest

from loadshift.env import DEFAULT_MAX_HEIGHT, HOURS, LoadBlock, SettleReport
from loadshift.rewards import (
    RewardConfig,
    complete_lines,
    compute_reward,
    spread_term,
)
from loadshift.scenario import Tariff, TariffBand

TOU = Tariff(
    bands=(
        TariffBand(0, 6, 6),
        TariffBand(6, 15, 9),
        TariffBand(15, 22, 15),
        TariffBand(22, 24, 6),
    )
)


def make_report(heights, block=None, overflow=False, cap=DEFAULT_MAX_HEIGHT):
    if block is None:
        block = LoadBlock("b", (1,), position=0)
    return SettleReport(
        block=block,
        heights_after=tuple(heights),
        max_height_cells=max(heights),
        complete_lines=min(heights),
        overflow=overflow,
        grid_cap=cap,
    )


def test_spread_term_alternating_grid():
    """Alternating 3/2 columns: variance 0.25 and stddev 0.5 exactly."""
    heights = [3, 2] * (HOURS // 2)
    assert spread_term(heights, "variance") == pytest.approx(1 / 1.25)
    assert spread_term(heights, "stddev") == pytest.approx(1 / 1.5)


def test_spread_term_reference_values():
    """A single column of 2 on an empty grid: 0.8623 (var) and 0.7145 (std)."""
    heights = [2] + [0] * (HOURS - 1)
    mean = sum(heights) / HOURS
    var = sum((h - mean) ** 2 for h in heights) / HOURS
    assert var == pytest.approx(0.1597222, abs=1e-7)
    assert spread_term(heights, "variance") == pytest.approx(1 / (1 + var))
    assert spread_term(heights, "variance") == pytest.approx(0.8623, abs=1e-4)
    assert spread_term(heights, "stddev") == pytest.approx(1 / (1 + math.sqrt(var)))
    assert spread_term(heights, "stddev") == pytest.approx(0.7145, abs=1e-4)


def test_spread_term_uniform_grid_is_one():
    assert spread_term([4] * HOURS, "variance") == 1.0
    assert spread_term([4] * HOURS, "stddev") == 1.0


def test_spread_term_validates_inputs():
    with pytest.raises(ValueError):
        spread_term([1] * 23)
    with pytest.raises(ValueError):
        spread_term([1] * HOURS, "mad")


def test_complete_lines_is_minimum_height():
    assert complete_lines([2] * HOURS) == 2
    heights = [3] * HOURS
    heights[17] = 1
    assert complete_lines(heights) == 1
    assert complete_lines([0] + [5] * (HOURS - 1)) == 0


def test_uniform_grid_reward_value():
    """Flat one-cell grid: 10*1 + 0.76*1 - 0.5*1 = 10.26 exactly."""
    reward = compute_reward(make_report([1] * HOURS), RewardConfig())
    assert reward.spread_term == pytest.approx(10.0)
    assert reward.lines_term == pytest.approx(0.76)
    assert reward.height_term == pytest.approx(-0.5)
    assert reward.cost_term == 0.0
    assert reward.total == pytest.approx(10.26)


def test_uniform_grid_reward_with_cost_deduction():
    """Same settle priced at 3 cents: 10.26 - 0.2*3 = 9.66."""
    block = LoadBlock("b", (1,), position=0)  # one cell in the 6 cent band: 3.0 cents
    out = compute_reward(make_report([1] * HOURS, block), RewardConfig(objective="peak_cost"), TOU)
    assert out.cost_term == pytest.approx(-0.2 * 3.0)
    assert out.total == pytest.approx(9.66)


def test_reward_breakdown_sums_to_total():
    rng = np.random.default_rng(11)
    for _ in range(50):
        heights = [int(c) for c in rng.integers(0, 7, size=HOURS)]
        report = make_report(heights)
        out = compute_reward(report, RewardConfig())
        assert out.total == pytest.approx(
            out.spread_term + out.lines_term + out.height_term + out.cost_term
        )


def test_peak_cost_objective_deducts_weighted_cost():
    block = LoadBlock("b", (2,), position=16)  # two cells in the 15 cent band
    heights = [1] * HOURS
    config = RewardConfig(objective="peak_cost")
    plain = compute_reward(make_report(heights, block), RewardConfig(), TOU)
    priced = compute_reward(make_report(heights, block), config, TOU)
    assert priced.cost_term == pytest.approx(-0.2 * 15.0)
    assert priced.total == pytest.approx(plain.total - 0.2 * 15.0)


def test_peak_cost_objective_requires_tariff():
    with pytest.raises(ValueError):
        compute_reward(make_report([1] * HOURS), RewardConfig(objective="peak_cost"))


def test_peak_objective_ignores_tariff():
    report = make_report([1] * HOURS)
    assert compute_reward(report, RewardConfig(), TOU) == compute_reward(
        report, RewardConfig()
    )


def test_overflow_reward_is_cap_penalty():
    report = make_report([3] * HOURS, overflow=True, cap=DEFAULT_MAX_HEIGHT)
    out = compute_reward(report, RewardConfig())
    assert out.total == pytest.approx(-0.5 * DEFAULT_MAX_HEIGHT)
    assert out.total == pytest.approx(-25.0)
    assert out.spread_term == 0.0 and out.lines_term == 0.0 and out.cost_term == 0.0


def test_overflow_reward_scales_with_cap():
    report = make_report([3] * HOURS, overflow=True, cap=10)
    assert compute_reward(report, RewardConfig()).total == pytest.approx(-5.0)


def test_stddev_spread_changes_only_first_term():
    heights = [1] * 12 + [3] * 12
    var_cfg = RewardConfig(spread_kind="variance")
    std_cfg = RewardConfig(spread_kind="stddev")
    report = make_report(heights)
    out_var = compute_reward(report, var_cfg)
    out_std = compute_reward(report, std_cfg)
    assert out_var.lines_term == out_std.lines_term
    assert out_var.height_term == out_std.height_term
    assert out_var.spread_term == pytest.approx(10.0 / 2.0)  # variance 1
    assert out_std.spread_term == pytest.approx(10.0 / 2.0)  # stddev also 1
    heights = [0] * 12 + [4] * 12  # variance 4, stddev 2
    report = make_report(heights)
    assert compute_reward(report, var_cfg).spread_term == pytest.approx(2.0)
    assert compute_reward(report, std_cfg).spread_term == pytest.approx(10.0 / 3.0)


def test_reward_config_validation():
    with pytest.raises(ValueError):
        RewardConfig(spread_kind="median")
    with pytest.raises(ValueError):
        RewardConfig(objective="cost_only")
