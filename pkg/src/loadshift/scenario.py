"""Consumer scenarios, tariffs, and quantization of appliances into grid cells.

Scenario files are JSON with two top-level keys::

    {
      "tariff": [
        {"start": 0, "end": 6, "cents_per_kwh": 6},
        ...
      ],
      "consumers": [
        {
          "id": "consumer1",
          "appliances": [
            {"name": "refrigerator", "powers_kw": [0.5, ...], "shiftable": false,
             "preferred_start": 0},
            {"name": "washing_machine", "powers_kw": [1.0, 0.5], "shiftable": true}
          ]
        },
        ...
      ]
    }

``powers_kw`` lists one entry per operating hour.  Non-shiftable appliances
run at their ``preferred_start``; shiftable ones may start at any hour that
keeps the whole run inside the day.  Every power must be a positive multiple
of the 0.5 kW cell size so loads quantize exactly onto the grid.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .env import HOURS, LoadBlock

CELL_KW = 0.5


@dataclass(frozen=True)
class CellQuantum:
    """Grid resolution: kW per cell and hours per column."""

    kw_per_cell: float = CELL_KW
    hours_per_column: int = 1


class ScenarioError(ValueError):
    """Scenario data violated the schema; the message names the field path."""


@dataclass(frozen=True)
class TariffBand:
    start_hour: int
    end_hour: int
    cents_per_kwh: int


@dataclass(frozen=True)
class Tariff:
    """Time-of-use price bands that together cover hours 0..24 exactly once."""

    bands: tuple[TariffBand, ...]


@dataclass(frozen=True)
class AppliancePowerProfile:
    """One appliance: hourly power draws plus shiftability."""

    name: str
    hourly_powers_kw: tuple[float, ...]
    shiftable: bool
    preferred_start: int | None = None

    @property
    def duration(self) -> int:
        return len(self.hourly_powers_kw)

    @property
    def daily_kwh(self) -> float:
        return sum(self.hourly_powers_kw)


@dataclass(frozen=True)
class ConsumerScenario:
    consumer_id: str
    appliances: tuple[AppliancePowerProfile, ...]

    @property
    def daily_kwh(self) -> float:
        return sum(a.daily_kwh for a in self.appliances)


def packaged_scenario_path(name: str = "five_consumers.json") -> Path:
    """Filesystem path of a scenario file shipped inside the package."""
    return Path(str(resources.files("loadshift").joinpath("data", name)))


def _power_to_cells(kw: float, path: str, quantum: CellQuantum) -> int:
    cells = kw / quantum.kw_per_cell
    if cells < 1 or abs(cells - round(cells)) > 1e-9:
        raise ScenarioError(
            f"{path}: {kw} kW is not a positive multiple of {quantum.kw_per_cell} kW"
        )
    return int(round(cells))


def _parse_appliance(raw: object, path: str, quantum: CellQuantum) -> AppliancePowerProfile:
    if not isinstance(raw, dict):
        raise ScenarioError(f"{path}: expected an object")
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        raise ScenarioError(f"{path}.name: expected a non-empty string")
    powers = raw.get("powers_kw")
    if not isinstance(powers, list) or not powers:
        raise ScenarioError(f"{path}.powers_kw: expected a non-empty list")
    if len(powers) > HOURS:
        raise ScenarioError(f"{path}.powers_kw: duration exceeds {HOURS} hours")
    for i, kw in enumerate(powers):
        if not isinstance(kw, (int, float)) or isinstance(kw, bool):
            raise ScenarioError(f"{path}.powers_kw[{i}]: expected a number")
        _power_to_cells(float(kw), f"{path}.powers_kw[{i}]", quantum)
    shiftable = raw.get("shiftable")
    if not isinstance(shiftable, bool):
        raise ScenarioError(f"{path}.shiftable: expected true or false")
    start = raw.get("preferred_start")
    if shiftable:
        if start is not None:
            raise ScenarioError(f"{path}.preferred_start: not allowed on a shiftable appliance")
    else:
        if not isinstance(start, int) or isinstance(start, bool):
            raise ScenarioError(f"{path}.preferred_start: required for a non-shiftable appliance")
        if not 0 <= start <= HOURS - len(powers):
            raise ScenarioError(
                f"{path}.preferred_start: {start} pushes a {len(powers)}h run past hour {HOURS}"
            )
    extra = set(raw) - {"name", "powers_kw", "shiftable", "preferred_start"}
    if extra:
        raise ScenarioError(f"{path}: unknown keys {sorted(extra)}")
    return AppliancePowerProfile(
        name=name,
        hourly_powers_kw=tuple(float(kw) for kw in powers),
        shiftable=shiftable,
        preferred_start=None if shiftable else int(start),
    )


def _parse_consumer(raw: object, path: str, quantum: CellQuantum) -> ConsumerScenario:
    if not isinstance(raw, dict):
        raise ScenarioError(f"{path}: expected an object")
    cid = raw.get("id")
    if not isinstance(cid, str) or not cid:
        raise ScenarioError(f"{path}.id: expected a non-empty string")
    appliances_raw = raw.get("appliances")
    if not isinstance(appliances_raw, list) or not appliances_raw:
        raise ScenarioError(f"{path}.appliances: expected a non-empty list")
    appliances = tuple(
        _parse_appliance(a, f"{path}.appliances[{i}]", quantum)
        for i, a in enumerate(appliances_raw)
    )
    names = [a.name for a in appliances]
    if len(set(names)) != len(names):
        dupe = next(n for n in names if names.count(n) > 1)
        raise ScenarioError(f"{path}.appliances: duplicate appliance name {dupe!r}")
    extra = set(raw) - {"id", "appliances"}
    if extra:
        raise ScenarioError(f"{path}: unknown keys {sorted(extra)}")
    return ConsumerScenario(consumer_id=cid, appliances=appliances)


def _parse_tariff(raw: object, path: str = "tariff") -> Tariff:
    if not isinstance(raw, list) or not raw:
        raise ScenarioError(f"{path}: expected a non-empty list of bands")
    bands = []
    for i, band in enumerate(raw):
        bpath = f"{path}[{i}]"
        if not isinstance(band, dict):
            raise ScenarioError(f"{bpath}: expected an object")
        extra = set(band) - {"start", "end", "cents_per_kwh"}
        if extra:
            raise ScenarioError(f"{bpath}: unknown keys {sorted(extra)}")
        try:
            start, end, cents = band["start"], band["end"], band["cents_per_kwh"]
        except KeyError as missing:
            raise ScenarioError(f"{bpath}: missing key {missing.args[0]!r}") from None
        for key, value in (("start", start), ("end", end), ("cents_per_kwh", cents)):
            if not isinstance(value, int) or isinstance(value, bool):
                raise ScenarioError(f"{bpath}.{key}: expected an integer")
        if not 0 <= start < end <= HOURS:
            raise ScenarioError(f"{bpath}: band [{start}, {end}) is not inside [0, {HOURS})")
        if cents <= 0:
            raise ScenarioError(f"{bpath}.cents_per_kwh: must be positive")
        bands.append(TariffBand(start, end, cents))
    bands.sort(key=lambda b: b.start_hour)
    covered = 0
    for i, band in enumerate(bands):
        if band.start_hour != covered:
            raise ScenarioError(f"{path}: bands leave hour {covered} uncovered or overlapping")
        covered = band.end_hour
    if covered != HOURS:
        raise ScenarioError(f"{path}: bands stop at hour {covered}, need {HOURS}")
    return Tariff(tuple(bands))


def load_scenario(
    path: str | Path, quantum: CellQuantum = CellQuantum()
) -> tuple[list[ConsumerScenario], Tariff]:
    """Parse and validate a scenario file.

    Raises ``ScenarioError`` naming the offending field on any schema
    violation, including powers that do not quantize onto the cell grid.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as err:
        raise ScenarioError(f"{path}: not valid JSON ({err})") from err
    if not isinstance(raw, dict):
        raise ScenarioError("scenario: top level must be an object")
    extra = set(raw) - {"tariff", "consumers"}
    if extra:
        raise ScenarioError(f"scenario: unknown keys {sorted(extra)}")
    tariff = _parse_tariff(raw.get("tariff"))
    consumers_raw = raw.get("consumers")
    if not isinstance(consumers_raw, list) or not consumers_raw:
        raise ScenarioError("consumers: expected a non-empty list")
    consumers = [
        _parse_consumer(c, f"consumers[{i}]", quantum) for i, c in enumerate(consumers_raw)
    ]
    ids = [c.consumer_id for c in consumers]
    if len(set(ids)) != len(ids):
        dupe = next(i for i in ids if ids.count(i) > 1)
        raise ScenarioError(f"consumers: duplicate consumer id {dupe!r}")
    return consumers, tariff


def to_blocks(
    scenario: ConsumerScenario, quantum: CellQuantum = CellQuantum()
) -> tuple[list[int], list[LoadBlock]]:
    """Split a consumer into a fixed base profile and shiftable blocks.

    Non-shiftable appliances accumulate into a 24-entry base profile in cells;
    each shiftable appliance becomes one LoadBlock whose columns are its hourly
    powers divided by the cell size.
    """
    base = [0] * HOURS
    blocks: list[LoadBlock] = []
    for appliance in scenario.appliances:
        cells = tuple(
            _power_to_cells(kw, f"{scenario.consumer_id}.{appliance.name}", quantum)
            for kw in appliance.hourly_powers_kw
        )
        if appliance.shiftable:
            blocks.append(LoadBlock(appliance.name, cells))
        else:
            start = appliance.preferred_start or 0
            for i, c in enumerate(cells):
                base[start + i] += c
    return base, blocks


def aggregate(scenarios: list[ConsumerScenario]) -> ConsumerScenario:
    """Merge consumers into one scenario; appliance names gain an id prefix."""
    if not scenarios:
        raise ScenarioError("aggregate: need at least one consumer")
    appliances = []
    for scenario in scenarios:
        for appliance in scenario.appliances:
            appliances.append(
                AppliancePowerProfile(
                    name=f"{scenario.consumer_id}:{appliance.name}",
                    hourly_powers_kw=appliance.hourly_powers_kw,
                    shiftable=appliance.shiftable,
                    preferred_start=appliance.preferred_start,
                )
            )
    return ConsumerScenario(consumer_id="all", appliances=tuple(appliances))
