"""Dataset files, trace/log line formats, synthetic data, replay, stats.

Both interchange formats are line-delimited JSON with a fixed key order
and compact separators, so a replayed session can be compared to a
reference log byte for byte:

* trace line keys: ``t_ms, head, left, right``
* log line keys:   ``session_id, seq, t_ms, event, task_tag, chart_id, payload``

Floats are written with Python's shortest round-trip repr and a ``.``
decimal separator.  Synthetic datasets draw noise from the splitmix64
streams in :mod:`gce.rng`, one sub-stream per (entity, variable), so a
seed fully determines the dataset bytes.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable

from .chart import Dataset, Entity
from .engine import EngineConfig, EngineState, InputSample, initial_state, step
from .geometry import quat_norm
from .hands import Finger, HandFrame, Side
from .rng import SplitMix64, substream
from .sensor import HeadPose, SensorModel, TrackerState, observe


class SessionError(Exception):
    pass


class ParseError(SessionError):
    pass


class SchemaError(SessionError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class LengthMismatch(SessionError):
    pass


class NonMonotonicTrace(SessionError):
    pass


class UnorderedLog(SessionError):
    pass


class InvalidParams(SessionError):
    pass


# -- trace records ----------------------------------------------------------


@dataclass(frozen=True)
class TraceRecord:
    t_ms: int
    head: HeadPose
    left: HandFrame | None
    right: HandFrame | None


def _frame_to_obj(frame: HandFrame) -> dict:
    return {
        "side": frame.side.value,
        "palm_pos": list(frame.palm_pos),
        "palm_normal": list(frame.palm_normal),
        "palm_dir": list(frame.palm_dir),
        "fingers": [{"tip": list(f.tip), "curl": f.curl} for f in frame.fingers],
        "t_ms": frame.t_ms,
    }


def _frame_from_obj(obj: dict, path: str) -> HandFrame:
    try:
        fingers = tuple(
            Finger(tip=tuple(f["tip"]), curl=f["curl"]) for f in obj["fingers"]
        )
        if len(fingers) != 5:
            raise SchemaError(f"{path}.fingers", "expected 5 fingers")
        return HandFrame(
            side=Side(obj["side"]),
            palm_pos=tuple(obj["palm_pos"]),
            palm_normal=tuple(obj["palm_normal"]),
            palm_dir=tuple(obj["palm_dir"]),
            fingers=fingers,
            t_ms=obj["t_ms"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(path, f"bad hand frame: {exc}") from exc


def trace_record_to_json(rec: TraceRecord) -> str:
    obj = {
        "t_ms": rec.t_ms,
        "head": {"pos": list(rec.head.pos), "quat": list(rec.head.quat)},
        "left": _frame_to_obj(rec.left) if rec.left else None,
        "right": _frame_to_obj(rec.right) if rec.right else None,
    }
    return json.dumps(obj, separators=(",", ":"))


def trace_record_from_json(line: str) -> TraceRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad trace line: {exc}") from exc
    try:
        head = HeadPose(pos=tuple(obj["head"]["pos"]), quat=tuple(obj["head"]["quat"]))
        t_ms = obj["t_ms"]
    except (KeyError, TypeError) as exc:
        raise SchemaError("$", f"bad trace record: {exc}") from exc
    if abs(quat_norm(head.quat) - 1.0) > 1e-4:
        raise SchemaError("$.head.quat", "quaternion not unit length")
    left = _frame_from_obj(obj["left"], "$.left") if obj.get("left") else None
    right = _frame_from_obj(obj["right"], "$.right") if obj.get("right") else None
    return TraceRecord(t_ms=t_ms, head=head, left=left, right=right)


def serialize_trace(records: Iterable[TraceRecord]) -> str:
    return "".join(trace_record_to_json(r) + "\n" for r in records)


def parse_trace(text: str) -> list[TraceRecord]:
    records = []
    prev = None
    for line in text.splitlines():
        if not line.strip():
            continue
        rec = trace_record_from_json(line)
        if prev is not None and rec.t_ms <= prev:
            raise NonMonotonicTrace(f"trace time {rec.t_ms} after {prev}")
        prev = rec.t_ms
        records.append(rec)
    return records


# -- log records ------------------------------------------------------------


@dataclass(frozen=True)
class LogRecord:
    session_id: str
    seq: int
    t_ms: int
    event: str
    task_tag: str
    chart_id: str | None
    payload: dict


def log_record_to_json(rec: LogRecord) -> str:
    obj = {
        "session_id": rec.session_id,
        "seq": rec.seq,
        "t_ms": rec.t_ms,
        "event": rec.event,
        "task_tag": rec.task_tag,
        "chart_id": rec.chart_id,
        "payload": rec.payload,
    }
    return json.dumps(obj, separators=(",", ":"))


def log_record_from_json(line: str) -> LogRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad log line: {exc}") from exc
    try:
        return LogRecord(
            session_id=obj["session_id"],
            seq=obj["seq"],
            t_ms=obj["t_ms"],
            event=obj["event"],
            task_tag=obj["task_tag"],
            chart_id=obj["chart_id"],
            payload=obj["payload"],
        )
    except KeyError as exc:
        raise SchemaError("$", f"missing log field {exc}") from exc


def serialize_log(records: Iterable[LogRecord]) -> str:
    return "".join(log_record_to_json(r) + "\n" for r in records)


def parse_log(text: str) -> list[LogRecord]:
    return [log_record_from_json(l) for l in text.splitlines() if l.strip()]


# -- dataset files -----------------------------------------------------------


def dataset_to_json(ds: Dataset) -> str:
    obj = {
        "variables": list(ds.variable_names),
        "timestamps": list(ds.timestamps),
        "entities": [
            {
                "id": e.id,
                "name": e.name,
                "x": e.position[0],
                "y": e.position[1],
                "series": [list(s) for s in e.series],
            }
            for e in ds.entities
        ],
    }
    return json.dumps(obj, separators=(",", ":"))


def load_dataset(data: bytes | str) -> Dataset:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"dataset not UTF-8: {exc}") from exc
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"dataset not valid JSON: {exc}") from exc

    if not isinstance(obj, dict):
        raise SchemaError("$", "expected a JSON object")
    for key in ("variables", "timestamps", "entities"):
        if key not in obj:
            raise SchemaError(f"$.{key}", "missing")
        if not isinstance(obj[key], list):
            raise SchemaError(f"$.{key}", "expected a list")
    variables = obj["variables"]
    timestamps = obj["timestamps"]
    if len(timestamps) < 2:
        raise SchemaError("$.timestamps", "need at least 2 time events")
    if len(variables) < 1:
        raise SchemaError("$.variables", "need at least 1 variable")

    entities = []
    seen: set[str] = set()
    for i, e in enumerate(obj["entities"]):
        path = f"$.entities[{i}]"
        if not isinstance(e, dict):
            raise SchemaError(path, "expected an object")
        for key in ("id", "name", "x", "y", "series"):
            if key not in e:
                raise SchemaError(f"{path}.{key}", "missing")
        if e["id"] in seen:
            raise SchemaError(f"{path}.id", f"duplicate entity id {e['id']!r}")
        seen.add(e["id"])
        series = e["series"]
        if len(series) != len(variables):
            raise LengthMismatch(
                f"{path}.series: {len(series)} series for {len(variables)} variables"
            )
        for vi, s in enumerate(series):
            if len(s) != len(timestamps):
                raise LengthMismatch(
                    f"{path}.series[{vi}]: length {len(s)} != {len(timestamps)} timestamps"
                )
            for x in s:
                if not isinstance(x, (int, float)) or not math.isfinite(x):
                    raise SchemaError(f"{path}.series[{vi}]", "non-finite value")
        entities.append(
            Entity(
                id=e["id"],
                name=e["name"],
                position=(float(e["x"]), float(e["y"])),
                series=tuple(tuple(float(x) for x in s) for s in series),
            )
        )
    return Dataset(
        entities=tuple(entities),
        variable_names=tuple(variables),
        timestamps=tuple(timestamps),
    )


# -- synthetic data -----------------------------------------------------------


@dataclass(frozen=True)
class GenParams:
    """Synthetic dataset shape; defaults mirror the reference scene
    composition of 39 charts x 5 variables x 150 daily events."""

    entities: int = 39
    variables: int = 5
    events: int = 150
    seed: int = 0
    value_range: tuple[float, float] = (0.0, 100.0)
    seasonal_period: int = 50
    noise_amp: float = 5.0

    def validate(self) -> None:
        if self.entities < 1 or self.variables < 1 or self.events < 2:
            raise InvalidParams("need entities >= 1, variables >= 1, events >= 2")
        if self.seasonal_period < 2:
            raise InvalidParams("seasonal_period must be >= 2")
        if self.value_range[0] >= self.value_range[1]:
            raise InvalidParams("value_range must be (lo, hi) with lo < hi")
        if self.noise_amp < 0:
            raise InvalidParams("noise_amp must be >= 0")


def _day_label(t: int) -> str:
    # fixed epoch keeps labels deterministic; plain day arithmetic
    import datetime

    return (datetime.date(2021, 1, 1) + datetime.timedelta(days=t)).isoformat()


def generate_dataset(params: GenParams = GenParams()) -> Dataset:
    """Seasonal sine series with seeded noise, clamped to the value range.

    The per-(entity, variable) phase is drawn so the first sine peak lands
    at an interior sample, which guarantees at least 3 interior local
    maxima whenever ``events >= 2 * seasonal_period + 4`` (the defaults
    give 3 full cycles) while still spreading peak positions across the
    whole period.
    """
    params.validate()
    lo, hi = params.value_range
    mid = (lo + hi) / 2.0
    amp = 0.35 * (hi - lo)
    period = params.seasonal_period
    cols = math.ceil(math.sqrt(params.entities))
    rows = math.ceil(params.entities / cols)
    first_peak_hi = max(2.0, min(period - 2.0, params.events - 2.0 - 2.0 * period))

    entities = []
    for ei in range(params.entities):
        col, row = ei % cols, ei // cols
        pos = (2.0 * col - (cols - 1), 2.0 * row - (rows - 1))
        series = []
        for vi in range(params.variables):
            rng = substream(params.seed, ei, vi)
            first_peak = 2.0 + (first_peak_hi - 2.0) * rng.uniform()
            phase = (period / 4.0 - first_peak) % period
            values = []
            for t in range(params.events):
                v = mid + amp * math.sin(2.0 * math.pi * (t + phase) / period)
                if params.noise_amp > 0:
                    v += (2.0 * rng.uniform() - 1.0) * params.noise_amp
                values.append(max(lo, min(hi, v)))
            series.append(tuple(values))
        entities.append(
            Entity(
                id=f"e{ei:02d}",
                name=f"entity-{ei:02d}",
                position=pos,
                series=tuple(series),
            )
        )
    return Dataset(
        entities=tuple(entities),
        variable_names=tuple(f"var_{i}" for i in range(params.variables)),
        timestamps=tuple(_day_label(t) for t in range(params.events)),
    )


# -- replay -------------------------------------------------------------------


@dataclass(frozen=True)
class ReplayConfig:
    engine: EngineConfig = field(default_factory=EngineConfig)
    sensor: SensorModel = field(default_factory=SensorModel)
    session_id: str = "session"
    sensor_seed: int = 0


def replay_session(
    dataset: Dataset,
    trace: Iterable[TraceRecord],
    config: ReplayConfig = ReplayConfig(),
) -> tuple[list[LogRecord], EngineState]:
    """Feed a trace through the sensor model and engine; returns the full
    event log plus the final world state."""
    state = initial_state(dataset, config.engine)
    tracker = TrackerState()
    rng = SplitMix64(config.sensor_seed)
    records: list[LogRecord] = []
    prev_t: int | None = None
    for rec in trace:
        if prev_t is not None and rec.t_ms <= prev_t:
            raise NonMonotonicTrace(f"trace time {rec.t_ms} after {prev_t}")
        prev_t = rec.t_ms
        left, right, tracker = observe(
            config.sensor, rec.head, rec.left, rec.right, rng, tracker
        )
        sample = InputSample(t_ms=rec.t_ms, head=rec.head, left=left, right=right)
        state, events = step(state, sample, config.engine)
        for ev in events:
            records.append(
                LogRecord(
                    session_id=config.session_id,
                    seq=ev.seq,
                    t_ms=ev.t_ms,
                    event=ev.kind.value,
                    task_tag=ev.task_tag.value,
                    chart_id=ev.chart_id,
                    payload=ev.payload,
                )
            )
    return records, state


def replay(
    dataset: Dataset,
    trace: Iterable[TraceRecord],
    config: ReplayConfig = ReplayConfig(),
) -> list[LogRecord]:
    records, _ = replay_session(dataset, trace, config)
    return records


# -- log statistics -----------------------------------------------------------

TASK_MARKER_EVENT = "task_marker"


@dataclass(frozen=True)
class SessionStats:
    duration_ms: int
    event_counts: dict
    task_tag_counts: dict
    segment_count: int
    segment_mean_ms: float
    segment_sd_ms: float


def analyze_log(records: list[LogRecord]) -> SessionStats:
    """Counts plus population mean/SD of durations between task markers."""
    prev_seq: int | None = None
    prev_t: int | None = None
    for r in records:
        if prev_seq is not None and r.seq <= prev_seq:
            raise UnorderedLog(f"seq {r.seq} after {prev_seq}")
        if prev_t is not None and r.t_ms < prev_t:
            raise UnorderedLog(f"t_ms {r.t_ms} after {prev_t}")
        prev_seq, prev_t = r.seq, r.t_ms

    counts: dict[str, int] = {}
    tags: dict[str, int] = {}
    for r in records:
        counts[r.event] = counts.get(r.event, 0) + 1
        tags[r.task_tag] = tags.get(r.task_tag, 0) + 1

    marker_ts = [r.t_ms for r in records if r.event == TASK_MARKER_EVENT]
    segments = [b - a for a, b in zip(marker_ts, marker_ts[1:])]
    if segments:
        mean = sum(segments) / len(segments)
        sd = math.sqrt(sum((d - mean) ** 2 for d in segments) / len(segments))
    else:
        mean = sd = 0.0

    duration = records[-1].t_ms - records[0].t_ms if records else 0
    return SessionStats(
        duration_ms=duration,
        event_counts=counts,
        task_tag_counts=tags,
        segment_count=len(segments),
        segment_mean_ms=mean,
        segment_sd_ms=sd,
    )
