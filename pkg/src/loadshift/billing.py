"""Time-of-use billing over quantized load profiles.

All costs are computed in integer half-cents before conversion to float
cents: one cell is 0.5 kWh, so a cell at ``p`` cents/kWh costs exactly ``p``
half-cents.  This keeps daily costs exact for any integer-cent tariff.
"""

from __future__ import annotations

from dataclasses import dataclass

from .env import HOURS, LoadBlock
from .scenario import CELL_KW, Tariff

DAYS_PER_MONTH = 30


@dataclass(frozen=True)
class BillReport:
    """Daily cost in cents, the 30-day monthly bill in dollars, per-hour costs."""

    daily_cost_cents: float
    monthly_cost_dollars: float
    per_hour_cents: tuple[float, ...]


def price_at_hour(tariff: Tariff, hour: int) -> int:
    """Price in cents/kWh for the band covering [hour, hour+1)."""
    if not isinstance(hour, int) or isinstance(hour, bool) or not 0 <= hour < HOURS:
        raise ValueError(f"hour must be an integer in [0, {HOURS}), got {hour!r}")
    for band in tariff.bands:
        if band.start_hour <= hour < band.end_hour:
            return band.cents_per_kwh
    raise ValueError(f"tariff does not cover hour {hour}")


def _hour_halfcents(cells: int, price_cents: int) -> int:
    # cells * 0.5 kWh * price; exact in half-cent units.
    return cells * price_cents


def daily_cost_halfcents(profile_cells: list[int] | tuple[int, ...], tariff: Tariff) -> int:
    if len(profile_cells) != HOURS:
        raise ValueError(f"profile needs {HOURS} hours, got {len(profile_cells)}")
    total = 0
    for hour, cells in enumerate(profile_cells):
        cells = int(cells)
        if cells < 0:
            raise ValueError(f"profile[{hour}]: negative load")
        total += _hour_halfcents(cells, price_at_hour(tariff, hour))
    return total


def daily_cost(profile_cells: list[int] | tuple[int, ...], tariff: Tariff) -> float:
    """Cost of one day's profile in cents (exact: derived from half-cents)."""
    return daily_cost_halfcents(profile_cells, tariff) / 2


def incremental_cost_halfcents(block: LoadBlock, placed_at: int, tariff: Tariff) -> int:
    if block.width and not 0 <= placed_at <= HOURS - block.width:
        raise ValueError(
            f"block {block.name!r} at hour {placed_at} runs past hour {HOURS}"
        )
    return sum(
        _hour_halfcents(cells, price_at_hour(tariff, placed_at + i))
        for i, cells in enumerate(block.column_cells)
    )


def incremental_cost(block: LoadBlock, placed_at: int, tariff: Tariff) -> float:
    """Added cost in cents of settling one block at the given start hour."""
    return incremental_cost_halfcents(block, placed_at, tariff) / 2


def bill_report(profile_cells: list[int] | tuple[int, ...], tariff: Tariff) -> BillReport:
    """Daily and monthly bill for a profile, with the per-hour breakdown."""
    per_hour = tuple(
        _hour_halfcents(int(cells), price_at_hour(tariff, hour)) / 2
        for hour, cells in enumerate(profile_cells)
    )
    daily_hc = daily_cost_halfcents(profile_cells, tariff)
    return BillReport(
        daily_cost_cents=daily_hc / 2,
        monthly_cost_dollars=daily_hc * DAYS_PER_MONTH / 200,
        per_hour_cents=per_hour,
    )


def profile_kw(profile_cells: list[int] | tuple[int, ...]) -> tuple[float, ...]:
    """Convert a cell profile to kW per hour."""
    return tuple(int(c) * CELL_KW for c in profile_cells)
