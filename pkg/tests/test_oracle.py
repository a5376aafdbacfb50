"""Scheduler checks: exhaustive search agrees with independent enumeration
(including tie-breaks), bounds and validation behave, beam search stays
feasible and honestly labeled, and verify() catches tampering."""

import numpy as np
import pytest

from loadshift.billing import daily_cost, incremental_cost_halfcents
from loadshift.env import HOURS, LoadBlock
from loadshift.oracle import (
    BEAM_WIDTH,
    EXHAUSTIVE_LIMIT,
    InfeasibleError,
    Schedule,
    profile_with_blocks,
    schedule_from_assignments,
    solve,
    verify,
)
from loadshift.scenario import CELL_KW, load_scenario, packaged_scenario_path, to_blocks

from helpers import enumerate_best, min_peak_bruteforce, random_base, random_blocks


def test_profile_with_blocks_adds_columns():
    base = [1] * 24
    blocks = [LoadBlock("a", (2, 1)), LoadBlock("b", (3,))]
    profile = profile_with_blocks(base, blocks, {"a": 0, "b": 1})
    assert profile[0] == 3 and profile[1] == 5
    assert all(h == 1 for h in profile[2:])


def test_profile_with_blocks_validates_names_and_bounds():
    base = [0] * 24
    blocks = [LoadBlock("a", (1, 1))]
    with pytest.raises(ValueError):
        profile_with_blocks(base, blocks, {})
    with pytest.raises(ValueError):
        profile_with_blocks(base, blocks, {"a": 0, "ghost": 3})
    with pytest.raises(ValueError):
        profile_with_blocks(base, blocks, {"a": 23})  # width 2 cannot start at 23


def test_solve_validates_inputs(five_consumers):
    _, tariff = five_consumers
    base = [0] * 24
    with pytest.raises(ValueError):
        solve(base, [], "min_everything", tariff)
    with pytest.raises(ValueError):
        solve(base, [], "min_cost", None)
    with pytest.raises(ValueError):
        solve(base, [], "min_peak", None)  # pricing always needs a tariff
    with pytest.raises(ValueError):
        solve(base, [LoadBlock("a", (1,)), LoadBlock("a", (2,))], "min_peak", tariff)


def test_solve_empty_blocks_prices_the_base(five_consumers):
    _, tariff = five_consumers
    base = [2] * 24
    schedule = solve(base, [], "min_peak", tariff)
    assert schedule.assignments == {}
    assert schedule.resulting_profile == tuple(base)
    assert schedule.peak_kw == 1.0
    assert schedule.daily_cost_cents == daily_cost(base, tariff)
    assert schedule.quality == "exact"


def test_solve_infeasible_base_raises(five_consumers):
    _, tariff = five_consumers
    base = [0] * 24
    base[3] = 9
    with pytest.raises(InfeasibleError):
        solve(base, [], "min_peak", tariff, max_height=8)


def test_solve_infeasible_block_raises(five_consumers):
    _, tariff = five_consumers
    base = [7] * 24
    with pytest.raises(InfeasibleError):
        solve(base, [LoadBlock("big", (2,))], "min_peak", tariff, max_height=8)


def test_min_peak_flattens_two_spikes(five_consumers):
    """Two 2-cell towers on a flat base must land in different hours."""
    _, tariff = five_consumers
    base = [0] * 24
    schedule = solve(base, [LoadBlock("a", (2,)), LoadBlock("b", (2,))], "min_peak", tariff)
    starts = sorted(schedule.assignments.values())
    assert starts[0] != starts[1]
    assert max(schedule.resulting_profile) == 2


def test_min_cost_picks_cheapest_band(five_consumers):
    """A single block lands in the cheapest tariff band (6 cents/kWh)."""
    _, tariff = five_consumers
    base = [0] * 24
    schedule = solve(base, [LoadBlock("a", (2, 2))], "min_cost", tariff)
    start = schedule.assignments["a"]
    assert start in range(0, 5) or start == 22, "both hours must sit in a 6-cent band"
    assert schedule.daily_cost_cents == 2 * 0.5 * 6 + 2 * 0.5 * 6


def test_peak_then_cost_breaks_peak_ties_by_cost(five_consumers):
    """Flat base: any single hour gives the same peak, so cost decides."""
    _, tariff = five_consumers
    base = [1] * 24
    schedule = solve(base, [LoadBlock("a", (1,))], "peak_then_cost", tariff)
    peak_only = solve(base, [LoadBlock("a", (1,))], "min_peak", tariff)
    assert max(schedule.resulting_profile) == max(peak_only.resulting_profile) == 2
    # the cheapest 6-cent hours start at 0; tie-breaks prefer the smallest start
    assert schedule.assignments["a"] == 0


def test_exhaustive_matches_enumeration_all_objectives(five_consumers):
    """Randomized cross-check against an independent brute-force enumerator,
    including the deterministic tie-break (sum of starts, then per-name)."""
    _, tariff = five_consumers
    rng = np.random.default_rng(17)
    checked = 0
    for trial in range(40):
        base = random_base(rng)
        blocks = random_blocks(rng, n_blocks=int(rng.integers(1, 4)))
        for objective in ("min_peak", "min_cost", "peak_then_cost"):
            want = enumerate_best(base, blocks, objective, tariff, max_height=50)
            got = solve(base, blocks, objective, tariff, max_height=50)
            assert got.quality == "exact"
            assert got.assignments == want, (
                f"trial {trial} objective {objective}: solver {got.assignments}, "
                f"enumeration {want}"
            )
            checked += 1
    assert checked == 120


def test_peak_then_cost_never_sacrifices_peak(five_consumers):
    _, tariff = five_consumers
    rng = np.random.default_rng(23)
    for _ in range(15):
        base = random_base(rng)
        blocks = random_blocks(rng, n_blocks=int(rng.integers(1, 4)))
        best_peak = solve(base, blocks, "min_peak", tariff)
        combined = solve(base, blocks, "peak_then_cost", tariff)
        assert max(combined.resulting_profile) == max(best_peak.resulting_profile)
        cost_first = solve(base, blocks, "min_cost", tariff)
        assert combined.daily_cost_cents >= cost_first.daily_cost_cents


def test_packaged_consumers_min_peak_matches_bruteforce(five_consumers):
    """The five shipped consumers, solver vs meet-in-the-middle enumeration."""
    consumers, tariff = five_consumers
    for consumer in consumers:
        base, blocks = to_blocks(consumer)
        schedule = solve(base, blocks, "min_peak", tariff)
        brute_peak = min_peak_bruteforce(base, blocks)
        assert max(schedule.resulting_profile) == brute_peak, consumer.consumer_id
        assert schedule.quality == "exact"
        ok, metrics = verify(schedule, base, blocks, tariff)
        assert ok, metrics["mismatches"]


def test_cost_is_incremental_sum(five_consumers):
    """Total cost equals base cost plus each block's incremental cost."""
    consumers, tariff = five_consumers
    base, blocks = to_blocks(consumers[0])
    schedule = solve(base, blocks, "min_cost", tariff)
    total = daily_cost(base, tariff) + sum(
        incremental_cost_halfcents(b, schedule.assignments[b.name], tariff) / 2
        for b in blocks
    )
    assert schedule.daily_cost_cents == total


def test_large_scenario_uses_beam_and_verifies():
    consumers, tariff = load_scenario(packaged_scenario_path("scalability.json"))
    assert len(consumers) == 1
    base, blocks = to_blocks(consumers[0])
    assert len(blocks) > EXHAUSTIVE_LIMIT
    schedule = solve(base, blocks, "min_peak", tariff)
    assert schedule.quality == "heuristic"
    ok, metrics = verify(schedule, base, blocks, tariff)
    assert ok, metrics["mismatches"]
    assert not metrics["overflowed"]
    # energy lower bound: peak cannot undercut total cells spread over 24 hours
    total_cells = sum(base) + sum(b.total_cells for b in blocks)
    assert max(schedule.resulting_profile) >= -(-total_cells // HOURS)


def test_beam_matches_exhaustive_on_small_instances(five_consumers):
    """Forcing the beam path on small cases should still find the optimum
    (wide beam, few blocks)."""
    _, tariff = five_consumers
    rng = np.random.default_rng(5)
    for _ in range(10):
        base = random_base(rng)
        blocks = random_blocks(rng, n_blocks=2)
        exact = solve(base, blocks, "min_peak", tariff)
        beamed = solve(base, blocks, "min_peak", tariff, exhaustive_limit=0, beam_width=BEAM_WIDTH)
        assert beamed.quality == "heuristic"
        assert max(beamed.resulting_profile) == max(exact.resulting_profile)


def test_verify_catches_corruption(five_consumers):
    consumers, tariff = five_consumers
    base, blocks = to_blocks(consumers[0])
    schedule = solve(base, blocks, "min_peak", tariff)

    wrong_cost = Schedule(
        assignments=schedule.assignments,
        resulting_profile=schedule.resulting_profile,
        peak_kw=schedule.peak_kw,
        daily_cost_cents=schedule.daily_cost_cents + 1,
        quality=schedule.quality,
    )
    ok, metrics = verify(wrong_cost, base, blocks, tariff)
    assert not ok and any("daily_cost_cents" in m for m in metrics["mismatches"])

    shifted = dict(schedule.assignments)
    name = next(iter(shifted))
    shifted[name] = (shifted[name] + 1) % 20
    wrong_profile = Schedule(
        assignments=shifted,
        resulting_profile=schedule.resulting_profile,
        peak_kw=schedule.peak_kw,
        daily_cost_cents=schedule.daily_cost_cents,
        quality=schedule.quality,
    )
    ok, metrics = verify(wrong_profile, base, blocks, tariff)
    assert not ok

    missing = dict(schedule.assignments)
    missing.pop(name)
    ok, metrics = verify(
        Schedule(assignments=missing, resulting_profile=schedule.resulting_profile),
        base,
        blocks,
        tariff,
    )
    assert not ok and metrics["mismatches"]


def test_verify_flags_overflow(five_consumers):
    _, tariff = five_consumers
    base = [0] * 24
    blocks = [LoadBlock("tall", (6,))]
    schedule = schedule_from_assignments(base, blocks, {"tall": 0}, tariff, "exact")
    ok, metrics = verify(schedule, base, blocks, tariff, max_height=4)
    assert not ok and metrics["overflowed"]


def test_schedule_from_assignments_prices_profile(five_consumers):
    _, tariff = five_consumers
    base = [1] * 24
    blocks = [LoadBlock("a", (2,))]
    schedule = schedule_from_assignments(base, blocks, {"a": 7}, tariff, "policy")
    assert schedule.quality == "policy"
    assert schedule.resulting_profile[7] == 3
    assert schedule.peak_kw == 3 * CELL_KW
    assert schedule.daily_cost_cents == daily_cost(schedule.resulting_profile, tariff)
