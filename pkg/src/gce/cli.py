"""Command-line front door.

Subcommands:

* ``serve``    - run the websocket session service
* ``replay``   - feed a trace file through the engine, write the event log
* ``gen``      - write a synthetic dataset file
* ``scenario`` - write the scripted walkthrough trace for a dataset
* ``stats``    - summarize an event log
* ``validate`` - check a trace or dataset file

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .engine import EngineConfig
from .sensor import SensorModel
from .session import (
    GenParams,
    ReplayConfig,
    SessionError,
    analyze_log,
    dataset_to_json,
    generate_dataset,
    load_dataset,
    parse_log,
    parse_trace,
    replay,
    serialize_log,
    serialize_trace,
)

USAGE_ERROR = 1
DATA_ERROR = 2

_SENSOR_KEYS = {
    "jitter": "jitter_std_m",
    "min_depth": "min_depth_m",
    "max_depth": "max_depth_m",
    "fov_h": "fov_h_deg",
    "fov_v": "fov_v_deg",
    "cone": "occlusion_cone_deg",
    "latch": "dropout_latch_frames",
}


def _parse_sensor(spec: str | None) -> SensorModel:
    model = SensorModel()
    if not spec:
        return model
    fields = {}
    for part in spec.split(","):
        if "=" not in part:
            raise ValueError(f"bad sensor option {part!r}, want key=value")
        key, value = part.split("=", 1)
        key = key.strip()
        if key not in _SENSOR_KEYS:
            raise ValueError(f"unknown sensor key {key!r}; known: {sorted(_SENSOR_KEYS)}")
        attr = _SENSOR_KEYS[key]
        fields[attr] = int(value) if attr == "dropout_latch_frames" else float(value)
    return dataclasses.replace(model, **fields)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gce", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    sv = sub.add_parser("serve", help="run the websocket session service")
    sv.add_argument("--port", type=int, default=8765)
    sv.add_argument("--host", default="127.0.0.1")
    src = sv.add_mutually_exclusive_group()
    src.add_argument("--dataset", type=Path, help="dataset JSON file")
    src.add_argument("--gen", action="store_true", help="generate a synthetic dataset")
    sv.add_argument("--seed", type=int, default=0)
    sv.add_argument("--entities", type=int, default=39)
    sv.add_argument("--vars", type=int, default=5)
    sv.add_argument("--events", type=int, default=150)
    sv.add_argument("--log", type=Path, help="write per-session event logs here")
    sv.add_argument("--data-dir", type=Path, help="directory for load_dataset by name")
    sv.add_argument("--sensor", help="sensor overrides, e.g. jitter=0.001,latch=3")
    sv.add_argument("--no-snap-guard", action="store_true")

    rp = sub.add_parser("replay", help="replay a trace file to an event log")
    rp.add_argument("--dataset", type=Path, required=True)
    rp.add_argument("--trace", type=Path, required=True)
    rp.add_argument("--out", type=Path, help="log output (default: stdout)")
    rp.add_argument("--sensor", help="sensor overrides, e.g. jitter=0.001")
    rp.add_argument("--sensor-seed", type=int, default=0)
    rp.add_argument("--session-id", default="session")
    rp.add_argument("--no-snap-guard", action="store_true")

    gn = sub.add_parser("gen", help="generate a synthetic dataset")
    gn.add_argument("--entities", type=int, default=39)
    gn.add_argument("--vars", type=int, default=5)
    gn.add_argument("--events", type=int, default=150)
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--noise", type=float, default=5.0)
    gn.add_argument("--out", type=Path, help="output file (default: stdout)")

    sc = sub.add_parser("scenario", help="write the scripted walkthrough trace")
    sc.add_argument("--dataset", type=Path, required=True)
    sc.add_argument("--out", type=Path, help="trace output (default: stdout)")

    st = sub.add_parser("stats", help="summarize an event log")
    st.add_argument("--log", type=Path, required=True)

    va = sub.add_parser("validate", help="check a trace or dataset file")
    grp = va.add_mutually_exclusive_group(required=True)
    grp.add_argument("--trace", type=Path)
    grp.add_argument("--dataset", type=Path)
    return p


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SessionError(f"cannot read {path}: {exc}") from exc


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.write_text(text, encoding="utf-8")


def _cmd_serve(args) -> int:
    from .server import serve_forever
    from .service import ServiceConfig

    if args.dataset:
        dataset = load_dataset(_read(args.dataset))
    else:
        dataset = generate_dataset(
            GenParams(entities=args.entities, variables=args.vars,
                      events=args.events, seed=args.seed)
        )
    engine = EngineConfig(snap_guard_enabled=not args.no_snap_guard)
    config = ServiceConfig(
        dataset=dataset,
        replay=ReplayConfig(engine=engine, sensor=_parse_sensor(args.sensor)),
        data_dir=args.data_dir,
        log_path=args.log,
    )
    serve_forever(config, host=args.host, port=args.port)
    return 0


def _cmd_replay(args) -> int:
    dataset = load_dataset(_read(args.dataset))
    trace = parse_trace(_read(args.trace))
    config = ReplayConfig(
        engine=EngineConfig(snap_guard_enabled=not args.no_snap_guard),
        sensor=_parse_sensor(args.sensor),
        session_id=args.session_id,
        sensor_seed=args.sensor_seed,
    )
    records = replay(dataset, trace, config)
    _write(args.out, serialize_log(records))
    return 0


def _cmd_gen(args) -> int:
    dataset = generate_dataset(
        GenParams(entities=args.entities, variables=args.vars, events=args.events,
                  seed=args.seed, noise_amp=args.noise)
    )
    _write(args.out, dataset_to_json(dataset) + "\n")
    return 0


def _cmd_scenario(args) -> int:
    from .scripting import ScriptError, scenario_task_series

    dataset = load_dataset(_read(args.dataset))
    try:
        result = scenario_task_series(dataset)
    except ScriptError as exc:
        raise SessionError(f"cannot script a walkthrough for this dataset: {exc}")
    _write(args.out, serialize_trace(result.records))
    return 0


def _cmd_stats(args) -> int:
    records = parse_log(_read(args.log))
    stats = analyze_log(records)
    report = {
        "records": len(records),
        "duration_ms": stats.duration_ms,
        "event_counts": dict(sorted(stats.event_counts.items())),
        "task_tag_counts": dict(sorted(stats.task_tag_counts.items())),
        "segments": {
            "count": stats.segment_count,
            "mean_ms": stats.segment_mean_ms,
            "sd_ms": stats.segment_sd_ms,
        },
    }
    print(json.dumps(report, indent=2))
    return 0


def _cmd_validate(args) -> int:
    if args.trace:
        records = parse_trace(_read(args.trace))
        print(f"trace ok: {len(records)} records")
    else:
        dataset = load_dataset(_read(args.dataset))
        print(
            f"dataset ok: {len(dataset.entities)} entities x "
            f"{len(dataset.variable_names)} variables x {len(dataset.timestamps)} events"
        )
    return 0


_COMMANDS = {
    "serve": _cmd_serve,
    "replay": _cmd_replay,
    "gen": _cmd_gen,
    "scenario": _cmd_scenario,
    "stats": _cmd_stats,
    "validate": _cmd_validate,
}


def run_cli(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help; map its error exit to the usage code
        return 0 if exc.code == 0 else USAGE_ERROR
    try:
        return _COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except SessionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_ERROR


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
