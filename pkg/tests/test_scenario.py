"""Scenario schema: parsing, validation errors, block conversion, aggregation."""

import json

import pytest

from loadshift.env import HOURS
from loadshift.scenario import (
    CELL_KW,
    CellQuantum,
    ScenarioError,
    aggregate,
    load_scenario,
    packaged_scenario_path,
    to_blocks,
)


def write_scenario(tmp_path, payload):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def minimal_payload():
    return {
        "tariff": [
            {"start": 0, "end": 6, "cents_per_kwh": 6},
            {"start": 6, "end": 15, "cents_per_kwh": 9},
            {"start": 15, "end": 22, "cents_per_kwh": 15},
            {"start": 22, "end": 24, "cents_per_kwh": 6},
        ],
        "consumers": [
            {
                "id": "c1",
                "appliances": [
                    {
                        "name": "fridge",
                        "powers_kw": [0.5] * 24,
                        "shiftable": False,
                        "preferred_start": 0,
                    },
                    {"name": "washer", "powers_kw": [1.0, 0.5], "shiftable": True},
                ],
            }
        ],
    }


def test_packaged_scenario_loads(five_consumers):
    consumers, tariff = five_consumers
    assert [c.consumer_id for c in consumers] == [f"consumer{i}" for i in range(1, 6)]
    assert len(tariff.bands) == 4


def test_minimal_scenario_roundtrip(tmp_path):
    consumers, tariff = load_scenario(write_scenario(tmp_path, minimal_payload()))
    assert len(consumers) == 1
    consumer = consumers[0]
    assert consumer.consumer_id == "c1"
    assert consumer.appliances[0].duration == 24
    assert consumer.appliances[1].shiftable
    assert consumer.appliances[1].preferred_start is None
    assert consumer.daily_kwh == pytest.approx(0.5 * 24 + 1.5)


def test_to_blocks_splits_base_and_shiftable(tmp_path):
    consumers, _ = load_scenario(write_scenario(tmp_path, minimal_payload()))
    base, blocks = to_blocks(consumers[0])
    assert base == [1] * HOURS, "0.5 kW over 24 h is one cell per hour"
    assert len(blocks) == 1
    assert blocks[0].name == "washer"
    assert blocks[0].column_cells == (2, 1), "1.0/0.5 kW become 2/1 cells"


def test_power_must_quantize_to_cells(tmp_path):
    payload = minimal_payload()
    payload["consumers"][0]["appliances"][1]["powers_kw"] = [0.75]
    with pytest.raises(ScenarioError, match="powers_kw"):
        load_scenario(write_scenario(tmp_path, payload))


def test_power_must_be_positive(tmp_path):
    payload = minimal_payload()
    payload["consumers"][0]["appliances"][1]["powers_kw"] = [0.0]
    with pytest.raises(ScenarioError):
        load_scenario(write_scenario(tmp_path, payload))


def test_custom_quantum_changes_cells(tmp_path):
    path = write_scenario(tmp_path, minimal_payload())
    consumers, _ = load_scenario(path, CellQuantum(kw_per_cell=0.25))
    base, blocks = to_blocks(consumers[0], CellQuantum(kw_per_cell=0.25))
    assert base == [2] * HOURS
    assert blocks[0].column_cells == (4, 2)


def test_shiftable_rejects_preferred_start(tmp_path):
    payload = minimal_payload()
    payload["consumers"][0]["appliances"][1]["preferred_start"] = 5
    with pytest.raises(ScenarioError, match="preferred_start"):
        load_scenario(write_scenario(tmp_path, payload))


def test_non_shiftable_requires_preferred_start(tmp_path):
    payload = minimal_payload()
    del payload["consumers"][0]["appliances"][0]["preferred_start"]
    with pytest.raises(ScenarioError, match="preferred_start"):
        load_scenario(write_scenario(tmp_path, payload))


def test_preferred_start_must_fit_duration(tmp_path):
    payload = minimal_payload()
    payload["consumers"][0]["appliances"][0]["powers_kw"] = [0.5, 0.5]
    payload["consumers"][0]["appliances"][0]["preferred_start"] = 23
    with pytest.raises(ScenarioError, match="preferred_start"):
        load_scenario(write_scenario(tmp_path, payload))


def test_duplicate_appliance_names_rejected(tmp_path):
    payload = minimal_payload()
    payload["consumers"][0]["appliances"].append(
        {"name": "washer", "powers_kw": [0.5], "shiftable": True}
    )
    with pytest.raises(ScenarioError, match="duplicate appliance name"):
        load_scenario(write_scenario(tmp_path, payload))


def test_duplicate_consumer_ids_rejected(tmp_path):
    payload = minimal_payload()
    payload["consumers"].append(payload["consumers"][0])
    with pytest.raises(ScenarioError, match="duplicate consumer id"):
        load_scenario(write_scenario(tmp_path, payload))


def test_unknown_keys_rejected(tmp_path):
    payload = minimal_payload()
    payload["consumers"][0]["appliances"][1]["color"] = "red"
    with pytest.raises(ScenarioError, match="unknown keys"):
        load_scenario(write_scenario(tmp_path, payload))


def test_tariff_bands_must_cover_day(tmp_path):
    payload = minimal_payload()
    payload["tariff"][3]["end"] = 23
    with pytest.raises(ScenarioError):
        load_scenario(write_scenario(tmp_path, payload))


def test_tariff_bands_must_not_overlap(tmp_path):
    payload = minimal_payload()
    payload["tariff"][1]["start"] = 5
    with pytest.raises(ScenarioError):
        load_scenario(write_scenario(tmp_path, payload))


def test_invalid_json_reports_scenario_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ScenarioError, match="not valid JSON"):
        load_scenario(path)


def test_aggregate_prefixes_names(five_consumers):
    consumers, _ = five_consumers
    merged = aggregate(consumers)
    assert merged.consumer_id == "all"
    names = [a.name for a in merged.appliances]
    assert len(names) == len(set(names)), "prefixing must keep names unique"
    assert all(":" in n for n in names)
    assert merged.daily_kwh == pytest.approx(sum(c.daily_kwh for c in consumers))
    base, blocks = to_blocks(merged)
    per_consumer = [to_blocks(c) for c in consumers]
    assert base == [sum(b[0][h] for b in per_consumer) for h in range(HOURS)]
    assert len(blocks) == sum(len(b[1]) for b in per_consumer)


def test_aggregate_requires_consumers():
    with pytest.raises(ScenarioError):
        aggregate([])


def test_packaged_consumer_one_shape(five_consumers):
    """The bundled first consumer: five fixed appliances plus four blocks."""
    consumers, _ = five_consumers
    base, blocks = to_blocks(consumers[0])
    assert len(blocks) == 4
    assert {b.name for b in blocks} == {
        "washing_machine",
        "dishwasher",
        "vacuum_cleaner",
        "grinder",
    }
    assert sum(base) + sum(b.total_cells for b in blocks) == int(
        consumers[0].daily_kwh / CELL_KW
    )


def test_scalability_scenario_loads():
    consumers, _ = load_scenario(packaged_scenario_path("scalability.json"))
    base, blocks = to_blocks(consumers[0])
    assert len(blocks) > 12, "stress scenario must exceed the exhaustive limit"
    assert all(b.total_cells >= 1 for b in blocks)
