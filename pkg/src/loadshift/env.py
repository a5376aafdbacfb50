"""Deterministic Tetris-like 24-hour load grid.

Shiftable appliance loads ("blocks") are placed one at a time onto a grid of
24 columns, one per hour of day.  Column heights count cells of 0.5 kW each,
so the default cap of 50 cells corresponds to a 25 kW aggregate limit.  The
active block moves laterally until a drop settles it column-wise onto the
current heights; an episode ends when every queued block has settled, or
immediately when a settle pushes any hour strictly above the cap.

State objects are immutable snapshots and ``reset``/``step``/``settle_block``
are pure functions, so episodes can be replayed or branched freely.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import IntEnum

import numpy as np

HOURS = 24
DEFAULT_MAX_HEIGHT = 50
# A block is forced to drop after this many lateral moves, which bounds every
# episode to len(blocks) * (LATERAL_MOVE_CAP + 1) steps.
LATERAL_MOVE_CAP = 24


class Action(IntEnum):
    LEFT = 0
    RIGHT = 1
    DROP = 2


@dataclass(frozen=True)
class LoadBlock:
    """A contiguous run of per-hour cell counts with a leftmost hour position.

    Simulation blocks need at least one column and every column at least one
    cell; billing helpers also accept zero-width blocks.
    """

    name: str
    column_cells: tuple[int, ...]
    position: int = 0

    def __post_init__(self) -> None:
        cells = tuple(int(c) for c in self.column_cells)
        object.__setattr__(self, "column_cells", cells)
        if any(c < 1 for c in cells):
            raise ValueError(f"block {self.name!r}: every column needs at least one cell")
        if self.width > HOURS:
            raise ValueError(f"block {self.name!r}: wider than the {HOURS}-hour grid")
        if self.width and not 0 <= self.position <= HOURS - self.width:
            raise ValueError(
                f"block {self.name!r}: position {self.position} puts it outside hours 0..{HOURS}"
            )

    @property
    def width(self) -> int:
        return len(self.column_cells)

    @property
    def total_cells(self) -> int:
        return sum(self.column_cells)

    def at(self, position: int) -> "LoadBlock":
        return replace(self, position=position)


@dataclass(frozen=True)
class GridState:
    """Column heights in cells plus the overflow cap."""

    heights: tuple[int, ...]
    max_height: int = DEFAULT_MAX_HEIGHT

    def __post_init__(self) -> None:
        heights = tuple(int(h) for h in self.heights)
        object.__setattr__(self, "heights", heights)
        if len(heights) != HOURS:
            raise ValueError(f"grid needs {HOURS} columns, got {len(heights)}")
        if any(h < 0 for h in heights):
            raise ValueError("column heights cannot be negative")
        if self.max_height < 1:
            raise ValueError("max_height must be positive")

    @property
    def peak(self) -> int:
        return max(self.heights)

    @property
    def overflowed(self) -> bool:
        return self.peak > self.max_height


@dataclass(frozen=True)
class SettleReport:
    """Everything the reward function needs to know about one settle."""

    block: LoadBlock
    heights_after: tuple[int, ...]
    max_height_cells: int
    complete_lines: int
    overflow: bool
    grid_cap: int

    @property
    def placed_at(self) -> int:
        return self.block.position


@dataclass(frozen=True)
class EnvState:
    """Immutable episode snapshot: grid, active block, queue, move counter."""

    grid: GridState
    active: LoadBlock | None
    queue: tuple[LoadBlock, ...]
    steps_for_block: int
    terminal: bool
    overflowed: bool

    @property
    def blocks_remaining(self) -> int:
        return (self.active is not None) + len(self.queue)


def center_position(width: int) -> int:
    """Spawn column for a new block: centered, rounding left."""
    return (HOURS - width) // 2


def settle_block(grid: GridState, block: LoadBlock) -> GridState:
    """Add the block's cells column-wise onto the grid.

    Loads are flexible solids: each column of the block compacts onto the
    existing column height, so no holes or overhangs form.  The result may
    exceed ``max_height``; callers decide whether that ends the episode.
    """
    if block.width == 0:
        raise ValueError("cannot settle an empty block")
    heights = list(grid.heights)
    for i, cells in enumerate(block.column_cells):
        heights[block.position + i] += cells
    return GridState(tuple(heights), grid.max_height)


def reset(
    base_profile: list[int] | tuple[int, ...],
    blocks: list[LoadBlock] | tuple[LoadBlock, ...],
    order_policy: str = "fixed",
    rng: np.random.Generator | None = None,
    max_height: int = DEFAULT_MAX_HEIGHT,
) -> EnvState:
    """Start an episode with the base profile pre-filled and blocks queued.

    ``order_policy`` is ``"fixed"`` (scenario order, used for evaluation) or
    ``"shuffle"`` (seeded permutation, used during training; requires ``rng``).
    """
    base = tuple(int(h) for h in base_profile)
    grid = GridState(base, max_height)
    if grid.overflowed:
        raise ValueError("base profile already exceeds the grid cap")
    for block in blocks:
        if block.width == 0:
            raise ValueError(f"block {block.name!r} is empty")
    ordered = list(blocks)
    if order_policy == "shuffle":
        if rng is None:
            raise ValueError("order_policy='shuffle' needs an rng")
        ordered = [ordered[i] for i in rng.permutation(len(ordered))]
    elif order_policy != "fixed":
        raise ValueError(f"unknown order_policy {order_policy!r}")

    if not ordered:
        return EnvState(grid, None, (), 0, terminal=True, overflowed=False)
    first = ordered[0].at(center_position(ordered[0].width))
    return EnvState(grid, first, tuple(ordered[1:]), 0, terminal=False, overflowed=False)


def step(
    state: EnvState,
    action: Action | int,
    lateral_move_cap: int = LATERAL_MOVE_CAP,
) -> tuple[EnvState, SettleReport | None, bool]:
    """Apply one action; returns (next state, settle report or None, terminal).

    Lateral moves clamp at the grid edges and count toward the per-block cap;
    once the cap is reached any action settles the block.  Transitions are
    fully deterministic.
    """
    if state.terminal:
        raise ValueError("cannot step a terminal state")
    assert state.active is not None
    action = Action(action)
    if action != Action.DROP and state.steps_for_block >= lateral_move_cap:
        action = Action.DROP

    if action != Action.DROP:
        delta = -1 if action == Action.LEFT else 1
        low, high = 0, HOURS - state.active.width
        pos = min(max(state.active.position + delta, low), high)
        next_state = replace(
            state,
            active=state.active.at(pos),
            steps_for_block=state.steps_for_block + 1,
        )
        return next_state, None, False

    grid = settle_block(state.grid, state.active)
    overflow = grid.overflowed
    report = SettleReport(
        block=state.active,
        heights_after=grid.heights,
        max_height_cells=grid.peak,
        complete_lines=min(grid.heights),
        overflow=overflow,
        grid_cap=grid.max_height,
    )
    if overflow:
        next_state = EnvState(grid, None, state.queue, 0, terminal=True, overflowed=True)
    elif state.queue:
        nxt = state.queue[0]
        next_state = EnvState(
            grid,
            nxt.at(center_position(nxt.width)),
            state.queue[1:],
            0,
            terminal=False,
            overflowed=False,
        )
    else:
        next_state = EnvState(grid, None, (), 0, terminal=True, overflowed=False)
    return next_state, report, next_state.terminal


def render(state: EnvState) -> np.ndarray:
    """Two binary planes (2, max_height, 24): settled occupancy and the active block.

    Row 0 is the bottom of the grid.  The active block is drawn hanging from
    the top edge over the columns it currently covers.
    """
    cap = state.grid.max_height
    img = np.zeros((2, cap, HOURS), dtype=np.uint8)
    heights = np.minimum(np.asarray(state.grid.heights), cap)
    # occupancy: row r is filled while r < height
    img[0] = np.arange(cap)[:, None] < heights[None, :]
    if state.active is not None:
        for i, cells in enumerate(state.active.column_cells):
            col = state.active.position + i
            img[1, cap - min(cells, cap) :, col] = 1
    return img
