import json
from pathlib import Path

import pytest

from gce.chart import Dataset, Entity
from gce.session import GenParams, generate_dataset, load_dataset

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def golden_dataset() -> Dataset:
    return load_dataset((DATA_DIR / "golden_dataset.json").read_bytes())


@pytest.fixture(scope="session")
def golden_trace_text() -> str:
    return (DATA_DIR / "golden_trace.jsonl").read_text()


@pytest.fixture(scope="session")
def golden_log_text() -> str:
    return (DATA_DIR / "golden_log.jsonl").read_text()


@pytest.fixture(scope="session")
def golden_meta() -> dict:
    return json.loads((DATA_DIR / "golden_meta.json").read_text())


@pytest.fixture(scope="session")
def default_dataset() -> Dataset:
    return generate_dataset(GenParams(seed=7))


def ramp_entity(entity_id: str, pos, variables: int = 5, events: int = 150) -> Entity:
    """Simple deterministic series: variable v ramps v..v+events-1."""
    series = tuple(
        tuple(float(v * 10 + t % 100) for t in range(events)) for v in range(variables)
    )
    return Entity(id=entity_id, name=entity_id, position=pos, series=series)


def make_dataset(positions: dict, variables: int = 5, events: int = 150) -> Dataset:
    entities = tuple(ramp_entity(eid, pos, variables, events) for eid, pos in positions.items())
    return Dataset(
        entities=entities,
        variable_names=tuple(f"var_{i}" for i in range(variables)),
        timestamps=tuple(f"day-{t:03d}" for t in range(events)),
    )


@pytest.fixture()
def mini_dataset() -> Dataset:
    return make_dataset({"m0": (0.0, 0.0)})
