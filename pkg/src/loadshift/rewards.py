"""Reward shaping for settle events.

Each settle is scored from the resulting column heights:

    reward = a1 * 1/(1 + spread(heights))        # flatness
           + a2 * complete_lines(heights)        # fully covered rows
           - a3 * max(heights)                   # peak
           - a4 * cost_of_block                  # only for the peak_cost goal

``spread`` is the population variance of the 24 heights, or the standard
deviation when configured.  An overflowing settle ends the episode and is
scored ``-a3 * grid_cap`` instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .billing import incremental_cost
from .env import HOURS, SettleReport
from .scenario import Tariff

SPREAD_KINDS = ("variance", "stddev")
OBJECTIVES = ("peak", "peak_cost")


@dataclass(frozen=True)
class RewardConfig:
    alpha1: float = 10.0
    alpha2: float = 0.76
    alpha3: float = 0.5
    alpha4: float = 0.2
    spread_kind: str = "variance"
    objective: str = "peak"

    def __post_init__(self) -> None:
        if self.spread_kind not in SPREAD_KINDS:
            raise ValueError(f"spread_kind must be one of {SPREAD_KINDS}")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")


@dataclass(frozen=True)
class RewardBreakdown:
    """Weighted, signed contributions; ``total`` is their sum."""

    spread_term: float
    lines_term: float
    height_term: float
    cost_term: float
    total: float


def spread_term(heights: list[int] | tuple[int, ...], kind: str = "variance") -> float:
    """1 / (1 + spread) where spread is population variance or stddev."""
    if len(heights) != HOURS:
        raise ValueError(f"need {HOURS} columns, got {len(heights)}")
    if kind not in SPREAD_KINDS:
        raise ValueError(f"kind must be one of {SPREAD_KINDS}")
    mean = sum(heights) / len(heights)
    var = sum((h - mean) ** 2 for h in heights) / len(heights)
    spread = var if kind == "variance" else math.sqrt(var)
    return 1.0 / (1.0 + spread)


def complete_lines(heights: list[int] | tuple[int, ...]) -> int:
    """Rows fully covered across all 24 hours, i.e. the minimum height."""
    if len(heights) != HOURS:
        raise ValueError(f"need {HOURS} columns, got {len(heights)}")
    return min(int(h) for h in heights)


def compute_reward(
    report: SettleReport,
    config: RewardConfig = RewardConfig(),
    tariff: Tariff | None = None,
) -> RewardBreakdown:
    """Score one settle.  The peak_cost objective needs a tariff."""
    if report.overflow:
        height = -config.alpha3 * report.grid_cap
        return RewardBreakdown(0.0, 0.0, height, 0.0, height)
    spread = config.alpha1 * spread_term(report.heights_after, config.spread_kind)
    lines = config.alpha2 * complete_lines(report.heights_after)
    height = -config.alpha3 * report.max_height_cells
    cost = 0.0
    if config.objective == "peak_cost":
        if tariff is None:
            raise ValueError("peak_cost rewards need a tariff")
        cost = -config.alpha4 * incremental_cost(report.block, report.placed_at, tariff)
    return RewardBreakdown(spread, lines, height, cost, spread + lines + height + cost)
