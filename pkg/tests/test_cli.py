import json

import pytest

from gce.cli import run_cli
from tests.conftest import DATA_DIR


@pytest.fixture()
def dataset_file(tmp_path):
    path = tmp_path / "ds.json"
    assert run_cli(["gen", "--seed", "7", "--out", str(path)]) == 0
    return path


class TestGen:
    def test_default_shape(self, dataset_file):
        doc = json.loads(dataset_file.read_text())
        assert len(doc["entities"]) == 39
        assert len(doc["variables"]) == 5
        assert len(doc["timestamps"]) == 150

    def test_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run_cli(["gen", "--seed", "3", "--out", str(a)])
        run_cli(["gen", "--seed", "3", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_custom_shape(self, tmp_path):
        out = tmp_path / "c.json"
        assert run_cli([
            "gen", "--entities", "4", "--vars", "2", "--events", "50",
            "--seed", "1", "--out", str(out),
        ]) == 0
        doc = json.loads(out.read_text())
        assert len(doc["entities"]) == 4


class TestValidate:
    def test_dataset_ok(self, dataset_file, capsys):
        assert run_cli(["validate", "--dataset", str(dataset_file)]) == 0
        assert "39 entities" in capsys.readouterr().out

    def test_trace_ok(self):
        assert run_cli(["validate", "--trace", str(DATA_DIR / "golden_trace.jsonl")]) == 0

    def test_bad_dataset_is_data_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        assert run_cli(["validate", "--dataset", str(bad)]) == 2

    def test_missing_file_is_data_error(self, tmp_path):
        assert run_cli(["validate", "--dataset", str(tmp_path / "none.json")]) == 2


class TestReplayCommand:
    def test_replays_golden(self, tmp_path):
        out = tmp_path / "log.jsonl"
        code = run_cli([
            "replay",
            "--dataset", str(DATA_DIR / "golden_dataset.json"),
            "--trace", str(DATA_DIR / "golden_trace.jsonl"),
            "--out", str(out),
            "--session-id", "golden",
        ])
        assert code == 0
        assert out.read_text() == (DATA_DIR / "golden_log.jsonl").read_text()

    def test_no_snap_guard_flag(self, tmp_path):
        out = tmp_path / "log.jsonl"
        code = run_cli([
            "replay",
            "--dataset", str(DATA_DIR / "golden_dataset.json"),
            "--trace", str(DATA_DIR / "golden_trace.jsonl"),
            "--out", str(out),
            "--no-snap-guard",
        ])
        assert code == 0

    def test_sensor_override_parsing(self, tmp_path):
        out = tmp_path / "log.jsonl"
        code = run_cli([
            "replay",
            "--dataset", str(DATA_DIR / "golden_dataset.json"),
            "--trace", str(DATA_DIR / "golden_trace.jsonl"),
            "--out", str(out),
            "--sensor", "jitter=0.0005,latch=2",
        ])
        assert code == 0

    def test_bad_sensor_key_is_usage_error(self, tmp_path):
        code = run_cli([
            "replay",
            "--dataset", str(DATA_DIR / "golden_dataset.json"),
            "--trace", str(DATA_DIR / "golden_trace.jsonl"),
            "--sensor", "wobble=1",
        ])
        assert code == 1


class TestStats:
    def test_golden_log(self, capsys):
        assert run_cli(["stats", "--log", str(DATA_DIR / "golden_log.jsonl")]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["event_counts"]["mode_changed"] == 6

    def test_empty_log(self, tmp_path, capsys):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("")
        assert run_cli(["stats", "--log", str(empty)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["records"] == 0
        assert report["duration_ms"] == 0


class TestUsage:
    def test_no_command(self):
        assert run_cli([]) == 1

    def test_unknown_command(self):
        assert run_cli(["frob"]) == 1

    def test_missing_required(self):
        assert run_cli(["replay", "--trace", "x.jsonl"]) == 1

    def test_help_exits_zero(self):
        assert run_cli(["--help"]) == 0
