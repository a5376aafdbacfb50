"""Exact baseline scheduler via branch and bound over block start hours.

Instances up to ``exhaustive_limit`` blocks are solved exactly with pruning
bounds that never cut off an optimal assignment; larger instances fall back
to a deterministic beam search and are flagged ``heuristic``.  Ties between
optimal assignments break deterministically: lowest total start-hour sum,
then lexicographically by start hours in appliance-name order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .billing import daily_cost, incremental_cost_halfcents
from .env import DEFAULT_MAX_HEIGHT, HOURS, LoadBlock
from .scenario import CELL_KW, Tariff

OBJECTIVES = ("min_peak", "min_cost", "peak_then_cost")
EXHAUSTIVE_LIMIT = 12
BEAM_WIDTH = 512


class InfeasibleError(ValueError):
    """No assignment keeps every hour at or under the grid cap."""


@dataclass(frozen=True)
class Schedule:
    """Start hours for every shiftable appliance plus the resulting totals.

    ``quality`` is "exact" for proven-optimal search results, "heuristic" for
    beam-search results, and "policy" for schedules rolled out by an agent.
    """

    assignments: dict[str, int] = field(default_factory=dict)
    resulting_profile: tuple[int, ...] = ()
    peak_kw: float = 0.0
    daily_cost_cents: float = 0.0
    quality: str = "exact"


def profile_with_blocks(
    base_profile: list[int] | tuple[int, ...],
    blocks: list[LoadBlock] | tuple[LoadBlock, ...],
    assignments: dict[str, int],
) -> tuple[int, ...]:
    """Apply every block at its assigned start hour to the base profile."""
    heights = [int(h) for h in base_profile]
    by_name = {b.name: b for b in blocks}
    if set(assignments) != set(by_name):
        missing = sorted(set(by_name) - set(assignments))
        extra = sorted(set(assignments) - set(by_name))
        raise ValueError(f"assignments mismatch: missing {missing}, unknown {extra}")
    for name, start in assignments.items():
        block = by_name[name]
        if not 0 <= start <= HOURS - block.width:
            raise ValueError(f"{name}: start {start} pushes the block past hour {HOURS}")
        for i, cells in enumerate(block.column_cells):
            heights[start + i] += cells
    return tuple(heights)


def schedule_from_assignments(
    base_profile,
    blocks,
    assignments: dict[str, int],
    tariff: Tariff,
    quality: str,
) -> Schedule:
    profile = profile_with_blocks(base_profile, blocks, assignments)
    return Schedule(
        assignments=dict(sorted(assignments.items())),
        resulting_profile=profile,
        peak_kw=max(profile) * CELL_KW,
        daily_cost_cents=daily_cost(profile, tariff),
        quality=quality,
    )


def _starts_by_name(names: list[str], assignments: dict[str, int]) -> tuple[int, ...]:
    return tuple(assignments[name] for name in sorted(names))


def _solve_exhaustive(base, blocks, objective, tariff, max_height):
    names = [b.name for b in blocks]
    order = sorted(range(len(blocks)), key=lambda i: (-blocks[i].total_cells, blocks[i].name))
    ordered = [blocks[i] for i in order]
    heights = list(base)
    energy_bound = math.ceil((sum(base) + sum(b.total_cells for b in blocks)) / HOURS)

    min_costs = [0] * len(ordered)
    if objective != "min_peak":
        min_costs = [
            min(
                incremental_cost_halfcents(b, s, tariff)
                for s in range(HOURS - b.width + 1)
            )
            for b in ordered
        ]
    # remaining[i]: cheapest possible cost of blocks i.. in search order
    remaining = [0] * (len(ordered) + 1)
    for i in range(len(ordered) - 1, -1, -1):
        remaining[i] = remaining[i + 1] + min_costs[i]

    def objective_value(peak: int, cost: int):
        if objective == "min_peak":
            return peak
        if objective == "min_cost":
            return cost
        return (peak, cost)

    def lower_bound(peak: int, cost: int, depth: int):
        peak_lb = max(peak, energy_bound)
        if objective == "min_peak":
            return peak_lb
        if objective == "min_cost":
            return cost + remaining[depth]
        return (peak_lb, cost + remaining[depth])

    best: dict = {"key": None, "assignments": None}
    starts: list[int] = []

    def dfs(depth: int, peak: int, cost: int) -> None:
        if best["key"] is not None:
            lb = lower_bound(peak, cost, depth)
            inc_obj, inc_sum, _ = best["key"]
            partial_sum = sum(starts)
            # Descendants can only raise the objective and the start sum, so
            # this never prunes a branch that could still win a tie-break.
            if lb > inc_obj or (lb == inc_obj and partial_sum > inc_sum):
                return
        if depth == len(ordered):
            assignments = {ordered[i].name: starts[i] for i in range(len(starts))}
            key = (
                objective_value(peak, cost),
                sum(starts),
                _starts_by_name(names, assignments),
            )
            if best["key"] is None or key < best["key"]:
                best["key"] = key
                best["assignments"] = assignments
            return
        block = ordered[depth]
        for start in range(HOURS - block.width + 1):
            new_peak = peak
            ok = True
            for i, cells in enumerate(block.column_cells):
                h = heights[start + i] + cells
                if h > max_height:
                    ok = False
                    break
                if h > new_peak:
                    new_peak = h
            if not ok:
                continue
            for i, cells in enumerate(block.column_cells):
                heights[start + i] += cells
            starts.append(start)
            extra = 0 if objective == "min_peak" else incremental_cost_halfcents(
                block, start, tariff
            )
            dfs(depth + 1, new_peak, cost + extra)
            starts.pop()
            for i, cells in enumerate(block.column_cells):
                heights[start + i] -= cells

    dfs(0, max(heights), 0)
    if best["assignments"] is None:
        raise InfeasibleError("no assignment fits under the grid cap")
    return best["assignments"]


def _solve_beam(base, blocks, objective, tariff, max_height, beam_width):
    order = sorted(range(len(blocks)), key=lambda i: (-blocks[i].total_cells, blocks[i].name))

    def rank(peak: int, cost: int, assignments: dict[str, int]):
        placed = sorted(assignments.items())
        sum_starts = sum(s for _, s in placed)
        tie = tuple(s for _, s in placed)
        if objective == "min_peak":
            return (peak, sum_starts, tie)
        if objective == "min_cost":
            return (cost, sum_starts, tie)
        return ((peak, cost), sum_starts, tie)

    beam: dict[tuple[int, ...], tuple[int, dict[str, int]]] = {tuple(base): (0, {})}
    for idx in order:
        block = blocks[idx]
        candidates: dict[tuple[int, ...], tuple[int, dict[str, int]]] = {}
        for heights, (cost, assignments) in beam.items():
            for start in range(HOURS - block.width + 1):
                new = list(heights)
                ok = True
                for i, cells in enumerate(block.column_cells):
                    new[start + i] += cells
                    if new[start + i] > max_height:
                        ok = False
                        break
                if not ok:
                    continue
                key = tuple(new)
                ncost = cost + incremental_cost_halfcents(block, start, tariff)
                nassign = dict(assignments)
                nassign[block.name] = start
                peak = max(key)
                if key not in candidates or rank(peak, ncost, nassign) < rank(
                    peak, candidates[key][0], candidates[key][1]
                ):
                    candidates[key] = (ncost, nassign)
        if not candidates:
            raise InfeasibleError("beam search found no assignment under the grid cap")
        ranked = sorted(
            candidates.items(),
            key=lambda item: rank(max(item[0]), item[1][0], item[1][1]),
        )
        beam = dict(ranked[:beam_width])
    _, (_, best_assignments) = min(
        beam.items(), key=lambda item: rank(max(item[0]), item[1][0], item[1][1])
    )
    return best_assignments


def solve(
    base_profile: list[int] | tuple[int, ...],
    blocks: list[LoadBlock] | tuple[LoadBlock, ...],
    objective: str,
    tariff: Tariff | None = None,
    max_height: int = DEFAULT_MAX_HEIGHT,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    beam_width: int = BEAM_WIDTH,
) -> Schedule:
    """Optimal (or, beyond the exhaustive limit, beam-searched) schedule."""
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}")
    if objective != "min_peak" and tariff is None:
        raise ValueError(f"objective {objective} needs a tariff")
    if tariff is None:
        raise ValueError("a tariff is required to price the resulting schedule")
    names = [b.name for b in blocks]
    if len(set(names)) != len(names):
        raise ValueError("block names must be unique")
    base = [int(h) for h in base_profile]
    if max(base, default=0) > max_height:
        raise InfeasibleError("base profile already exceeds the grid cap")
    for block in blocks:
        fits = any(
            all(base[s + i] + c <= max_height for i, c in enumerate(block.column_cells))
            for s in range(HOURS - block.width + 1)
        )
        if not fits:
            raise InfeasibleError(f"block {block.name!r} cannot fit under the grid cap")
    if not blocks:
        return schedule_from_assignments(base, [], {}, tariff, "exact")
    if len(blocks) <= exhaustive_limit:
        assignments = _solve_exhaustive(base, list(blocks), objective, tariff, max_height)
        quality = "exact"
    else:
        assignments = _solve_beam(base, list(blocks), objective, tariff, max_height, beam_width)
        quality = "heuristic"
    return schedule_from_assignments(base, blocks, assignments, tariff, quality)


def verify(
    schedule: Schedule,
    base_profile: list[int] | tuple[int, ...],
    blocks: list[LoadBlock] | tuple[LoadBlock, ...],
    tariff: Tariff,
    max_height: int = DEFAULT_MAX_HEIGHT,
) -> tuple[bool, dict]:
    """Recompute a schedule's profile, peak, and cost; flag any mismatch."""
    metrics: dict = {"mismatches": []}
    try:
        profile = profile_with_blocks(base_profile, blocks, schedule.assignments)
    except ValueError as err:
        metrics["mismatches"].append(str(err))
        return False, metrics
    peak_kw = max(profile) * CELL_KW
    cost = daily_cost(profile, tariff)
    metrics.update(
        {
            "profile": profile,
            "peak_kw": peak_kw,
            "daily_cost_cents": cost,
            "overflowed": max(profile) > max_height,
        }
    )
    if profile != tuple(schedule.resulting_profile):
        metrics["mismatches"].append("resulting_profile does not match the assignments")
    if peak_kw != schedule.peak_kw:
        metrics["mismatches"].append(
            f"peak_kw recorded {schedule.peak_kw}, recomputed {peak_kw}"
        )
    if cost != schedule.daily_cost_cents:
        metrics["mismatches"].append(
            f"daily_cost_cents recorded {schedule.daily_cost_cents}, recomputed {cost}"
        )
    if max(profile) > max_height:
        metrics["mismatches"].append("profile exceeds the grid cap")
    return not metrics["mismatches"], metrics
