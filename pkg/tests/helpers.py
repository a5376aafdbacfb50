"""Shared test utilities: reference schedulers, gradient checks, generators.

Everything here is deliberately independent of the library's search and
backprop code paths so tests compare two implementations, not one against
itself: scheduling answers come from plain enumeration, gradients from
central finite differences.
"""

from __future__ import annotations

import itertools

import numpy as np

from loadshift.billing import incremental_cost_halfcents
from loadshift.env import HOURS, LoadBlock


def enumerate_best(base, blocks, objective, tariff, max_height=50):
    """Reference scheduler: full enumeration with the documented tie-break.

    Returns the winning assignments dict, choosing by (objective value,
    start-hour sum, starts in name-sorted order); None when nothing fits
    under the cap.  Exponential in the block count - keep it at <= 3 blocks.
    """
    names = sorted(b.name for b in blocks)
    best_key = None
    best_assignments = None
    ranges = [range(HOURS - b.width + 1) for b in blocks]
    for starts in itertools.product(*ranges):
        heights = list(base)
        for block, start in zip(blocks, starts):
            for i, cells in enumerate(block.column_cells):
                heights[start + i] += cells
        peak = max(heights)
        if peak > max_height:
            continue
        cost = sum(
            incremental_cost_halfcents(block, start, tariff)
            for block, start in zip(blocks, starts)
        )
        if objective == "min_peak":
            value = peak
        elif objective == "min_cost":
            value = cost
        else:
            value = (peak, cost)
        assignments = {block.name: start for block, start in zip(blocks, starts)}
        key = (value, sum(starts), tuple(assignments[n] for n in names))
        if best_key is None or key < best_key:
            best_key = key
            best_assignments = assignments
    return best_assignments


def _expand_profiles(blocks):
    """All achievable combined profiles for a list of blocks, as (n, 24) int16."""
    profiles = np.zeros((1, HOURS), dtype=np.int16)
    for block in blocks:
        starts = HOURS - block.width + 1
        adds = np.zeros((starts, HOURS), dtype=np.int16)
        for s in range(starts):
            for i, cells in enumerate(block.column_cells):
                adds[s, s + i] = cells
        profiles = (profiles[:, None, :] + adds[None, :, :]).reshape(-1, HOURS)
    return profiles


def min_peak_bruteforce(base, blocks, max_height=50):
    """Minimum achievable peak (cells): exhaustive but vectorized enumeration.

    Splits the blocks into two halves and broadcasts their combined profiles
    in chunks, so five-block instances finish in seconds.
    """
    base_arr = np.asarray(base, dtype=np.int16)
    if not blocks:
        return int(base_arr.max())
    half = len(blocks) // 2
    first = _expand_profiles(blocks[:half])
    second = _expand_profiles(blocks[half:])
    best = np.iinfo(np.int16).max
    chunk = max(1, 2_000_000 // (len(second) * HOURS))
    for lo in range(0, len(first), chunk):
        combined = first[lo : lo + chunk, None, :] + second[None, :, :] + base_arr
        peaks = combined.max(axis=2)
        feasible = peaks[peaks <= max_height]
        if feasible.size:
            best = min(best, int(feasible.min()))
    if best == np.iinfo(np.int16).max:
        raise AssertionError("no feasible placement found by brute force")
    return best


def central_diff_grad(f, arr, eps=1e-6):
    """Central finite-difference gradient of scalar f() w.r.t. arr, in place."""
    grad = np.zeros_like(arr)
    it = np.nditer(arr, flags=["multi_index"])
    while not it.finished:
        idx = it.multi_index
        old = arr[idx]
        arr[idx] = old + eps
        f_plus = f()
        arr[idx] = old - eps
        f_minus = f()
        arr[idx] = old
        grad[idx] = (f_plus - f_minus) / (2 * eps)
        it.iternext()
    return grad


def max_rel_err(analytic, numeric, floor=1e-6):
    """Worst elementwise error, relative to the numeric gradient's scale."""
    analytic = np.asarray(analytic)
    numeric = np.asarray(numeric)
    scale = max(float(np.max(np.abs(numeric))), floor)
    return float(np.max(np.abs(analytic - numeric))) / scale


def random_blocks(rng, n_blocks, max_width=3, max_cells=3, prefix="b"):
    """Small random shiftable blocks for property tests."""
    blocks = []
    for i in range(n_blocks):
        width = int(rng.integers(1, max_width + 1))
        cells = tuple(int(rng.integers(1, max_cells + 1)) for _ in range(width))
        blocks.append(LoadBlock(f"{prefix}{i}", cells))
    return blocks


def random_base(rng, max_cells=3):
    """Random low base profile that leaves room under the default cap."""
    return [int(rng.integers(0, max_cells + 1)) for _ in range(HOURS)]
