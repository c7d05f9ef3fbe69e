"""Wire-protocol session service.

One session wraps one engine: the client streams raw input frames, the
server answers each with a minimal state delta plus one event message per
applied feature.  Messages are single JSON objects; the transport (see
:mod:`gce.server`) frames one message per websocket text frame.

Client to server: ``hello``, ``load_dataset``, ``input``,
``snapshot_request``.  Server to client: ``welcome``, ``state_delta``,
``event``, ``snapshot``, ``error``.

Deltas carry the full projection of every chart that changed (plus
changed top-level fields), so folding deltas over the initial snapshot
reproduces any later snapshot exactly.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .chart import Dataset, Mode
from .engine import (
    AxisGrasp,
    EngineState,
    InputSample,
    TravelArmedState,
    initial_state,
    step,
)
from .hands import Side
from .rng import SplitMix64
from .sensor import TrackerState, observe
from .session import (
    LogRecord,
    ReplayConfig,
    SessionError,
    TraceRecord,
    dataset_to_json,
    load_dataset,
    log_record_to_json,
    trace_record_from_json,
)

PROTOCOL_VERSION = 1


class ProtocolError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def message_to_json(msg: dict) -> str:
    return json.dumps(msg, separators=(",", ":"))


def _chart_projection(state: EngineState, chart_id: str) -> dict:
    c = state.charts[chart_id]
    outline = isinstance(state.travel, TravelArmedState) and state.travel.chart_id == chart_id
    preview = None
    if state.range_gesture is not None and state.range_gesture.chart_id == chart_id:
        preview = state.range_gesture.last_range
    detached = None
    for g in state.grasps.values():
        if isinstance(g, AxisGrasp) and g.chart_id == chart_id and g.detached:
            detached = g.variable
    return {
        "mode": c.mode.value,
        "visible_window": [c.visible_window[0], c.visible_window[1]],
        "slice_index": c.slice_index,
        "arrangement": list(c.arrangement),
        "yaw_rad": c.yaw_rad,
        "selected_range": list(c.selected_range) if c.selected_range else None,
        "zoom_depth": len(c.zoom_stack),
        "outline": outline,
        "preview_range": list(preview) if preview else None,
        "detached_variable": detached,
    }


def _hands_projection(state: EngineState, sample: InputSample | None) -> dict:
    out = {}
    for side, key in ((Side.LEFT, "left"), (Side.RIGHT, "right")):
        tracked = False
        if sample is not None:
            obs = sample.left if side is Side.LEFT else sample.right
            tracked = obs.tracked
        out[key] = {"tracked": tracked, "semitransparent": state.paused}
    return out


def _viewpoint_projection(state: EngineState) -> dict:
    return {"pos": list(state.viewpoint.pos), "yaw": state.viewpoint.yaw}


def snapshot_message(state: EngineState, sample: InputSample | None = None) -> dict:
    return {
        "type": "snapshot",
        "t_ms": state.t_ms,
        "paused": state.paused,
        "viewpoint": _viewpoint_projection(state),
        "hands": _hands_projection(state, sample),
        "charts": {cid: _chart_projection(state, cid) for cid in sorted(state.charts)},
    }


@dataclass
class ServiceConfig:
    dataset: Dataset
    replay: ReplayConfig = field(default_factory=ReplayConfig)
    data_dir: Path | None = None
    log_path: Path | None = None

    def resolved_log_path(self) -> Path | None:
        """GCE_LOG_DIR redirects log files into a different directory."""
        if self.log_path is None:
            return None
        env = os.environ.get("GCE_LOG_DIR")
        if env:
            return Path(env) / self.log_path.name
        return self.log_path


class Session:
    """One client's world; messages are handled strictly in order."""

    def __init__(self, session_id: str, config: ServiceConfig):
        self.id = session_id
        self.config = config
        self.dataset = config.dataset
        self.hello_done = False
        self._reset_world()
        self.log: list[LogRecord] = []

    def _reset_world(self) -> None:
        rc = self.config.replay
        self.state = initial_state(self.dataset, rc.engine)
        self.tracker = TrackerState()
        self.rng = SplitMix64(rc.sensor_seed)
        self.prev_t: int | None = None
        self.last_sample: InputSample | None = None
        self.prev_snapshot = snapshot_message(self.state)

    def _welcome(self) -> dict:
        rc = self.config.replay
        eng_cfg = rc.engine
        return {
            "type": "welcome",
            "session_id": self.id,
            "protocol_version": PROTOCOL_VERSION,
            "dataset": json.loads(dataset_to_json(self.dataset)),
            "config": {
                "chart": {
                    "length_m": eng_cfg.chart.length_m,
                    "radius_m": eng_cfg.chart.radius_m,
                },
                "engine": {
                    "gaze_dwell_ms": eng_cfg.gaze_dwell_ms,
                    "faraway_min_m": eng_cfg.faraway_min_m,
                    "transit_ms": eng_cfg.transit_ms,
                    "standoff_m": eng_cfg.standoff_m,
                    "widget_r_m": eng_cfg.widget_r_m,
                    "widget_above_m": eng_cfg.widget_above_m,
                    "handle_offset_m": eng_cfg.handle_offset_m,
                    "handle_height_frac": eng_cfg.handle_height_frac,
                    "grasp_capture_m": eng_cfg.grasp_capture_m,
                    "zoom_stretch_m": eng_cfg.zoom_stretch_m,
                    "zoom_clap_m": eng_cfg.zoom_clap_m,
                    "reset_arm_ms": eng_cfg.reset_arm_ms,
                    "act_radius_m": eng_cfg.act_radius_m,
                    "filter_snap": eng_cfg.filter_snap,
                    "pause_hold_ms": eng_cfg.pause_hold_ms,
                },
            },
        }

    def _delta(self, sample: InputSample) -> dict:
        snap = snapshot_message(self.state, sample)
        prev = self.prev_snapshot
        delta: dict = {"type": "state_delta", "t_ms": self.state.t_ms}
        for key in ("paused", "viewpoint", "hands"):
            if snap[key] != prev[key]:
                delta[key] = snap[key]
        charts = {
            cid: proj
            for cid, proj in snap["charts"].items()
            if prev["charts"].get(cid) != proj
        }
        if charts:
            delta["charts"] = charts
        self.prev_snapshot = snap
        return delta

    def handle_message(self, msg: dict) -> list[dict]:
        try:
            return self._dispatch(msg)
        except ProtocolError as exc:
            return [{"type": "error", "code": exc.code, "message": str(exc)}]
        except SessionError as exc:
            return [{"type": "error", "code": type(exc).__name__.lower(), "message": str(exc)}]

    def _dispatch(self, msg: dict) -> list[dict]:
        if not isinstance(msg, dict) or "type" not in msg:
            raise ProtocolError("bad_message", "message must be an object with a type")
        kind = msg["type"]
        if kind == "hello":
            version = msg.get("protocol_version")
            if version != PROTOCOL_VERSION:
                raise ProtocolError(
                    "version_mismatch",
                    f"protocol {version} unsupported, want {PROTOCOL_VERSION}",
                )
            self.hello_done = True
            return [self._welcome()]
        if not self.hello_done:
            raise ProtocolError("hello_required", f"{kind} before hello")
        if kind == "load_dataset":
            return self._load_dataset(msg)
        if kind == "input":
            return self._input(msg)
        if kind == "snapshot_request":
            return [snapshot_message(self.state, self.last_sample)]
        raise ProtocolError("unsupported", f"unknown message type {kind!r}")

    def _load_dataset(self, msg: dict) -> list[dict]:
        if "inline" in msg:
            self.dataset = load_dataset(json.dumps(msg["inline"]))
        elif "name" in msg:
            base = self.config.data_dir or Path(".")
            name = Path(msg["name"]).name  # no path traversal
            path = base / name
            if not path.exists():
                raise ProtocolError("unknown_dataset", f"no dataset named {msg['name']!r}")
            self.dataset = load_dataset(path.read_bytes())
        else:
            raise ProtocolError("bad_message", "load_dataset needs name or inline")
        self._reset_world()
        return [self._welcome()]

    def _input(self, msg: dict) -> list[dict]:
        if "record" not in msg:
            raise ProtocolError("bad_message", "input needs a record")
        rec: TraceRecord = trace_record_from_json(json.dumps(msg["record"]))
        if self.prev_t is not None and rec.t_ms <= self.prev_t:
            return [
                {
                    "type": "error",
                    "code": "non_monotonic",
                    "message": f"t_ms {rec.t_ms} after {self.prev_t}",
                }
            ]
        self.prev_t = rec.t_ms
        rc = self.config.replay
        left, right, self.tracker = observe(
            rc.sensor, rec.head, rec.left, rec.right, self.rng, self.tracker
        )
        sample = InputSample(t_ms=rec.t_ms, head=rec.head, left=left, right=right)
        self.state, events = step(self.state, sample, rc.engine)
        self.last_sample = sample
        out = [self._delta(sample)]
        for ev in events:
            record = LogRecord(
                session_id=self.id,
                seq=ev.seq,
                t_ms=ev.t_ms,
                event=ev.kind.value,
                task_tag=ev.task_tag.value,
                chart_id=ev.chart_id,
                payload=ev.payload,
            )
            self.log.append(record)
            out.append({"type": "event", "record": json.loads(log_record_to_json(record))})
        return out

    def write_log(self) -> Path | None:
        path = self.config.resolved_log_path()
        if path is None or not self.log:
            return None
        path.parent.mkdir(parents=True, exist_ok=True)
        stem = path.stem
        target = path.with_name(f"{stem}-{self.id}{path.suffix or '.jsonl'}")
        with open(target, "w", encoding="utf-8") as f:
            for rec in self.log:
                f.write(log_record_to_json(rec) + "\n")
        return target
