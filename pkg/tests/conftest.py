import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tourplan import load_scenario

SCENARIO_PATH = Path(__file__).parent.parent / "scenarios" / "tour450.json"

# Table of per-service task times (minutes) for the six-category tour data.
TOUR_TIMES = {
    "C1": (180, 210, 150),
    "C2": (20, 30, 25),
    "C3": (10, 12, 15),
    "C4": (90, 100, 85),
    "C5": (30, 30, 25),
    "C6": (120, 135, 125),
}


@pytest.fixture(scope="session")
def tour_scenario_path():
    return SCENARIO_PATH


@pytest.fixture()
def tour_scenario():
    return load_scenario(SCENARIO_PATH)
