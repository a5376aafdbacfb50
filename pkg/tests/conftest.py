import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from loadshift.scenario import load_scenario, packaged_scenario_path


@pytest.fixture(scope="session")
def five_consumers():
    """The packaged five-consumer scenario: (consumers, tariff)."""
    return load_scenario(packaged_scenario_path())
