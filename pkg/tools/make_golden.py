"""Regenerate the frozen golden replay artifacts in tests/data/.

The golden trace is produced by the scripted walkthrough scenario; the
golden log is the trace replayed through the default pipeline.  Both are
frozen so the test suite can detect any behavioral drift byte-for-byte.

Run from the repo root:  python tools/make_golden.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

from gce.scripting import scenario_task_series
from gce.session import (
    GenParams,
    ReplayConfig,
    dataset_to_json,
    generate_dataset,
    replay,
    serialize_log,
    serialize_trace,
)

GOLDEN_SEED = 7
SESSION_ID = "golden"


def main() -> int:
    out_dir = Path(__file__).resolve().parent.parent / "tests" / "data"
    out_dir.mkdir(parents=True, exist_ok=True)

    dataset = generate_dataset(GenParams(seed=GOLDEN_SEED))
    result = scenario_task_series(dataset)
    records = replay(dataset, result.records, ReplayConfig(session_id=SESSION_ID))

    shadow = [
        (e.t_ms, e.seq, e.kind.value, e.task_tag.value, e.chart_id) for e in result.events
    ]
    real = [(r.t_ms, r.seq, r.event, r.task_tag, r.chart_id) for r in records]
    if shadow != real:
        print("scenario shadow events disagree with replay", file=sys.stderr)
        return 1

    (out_dir / "golden_dataset.json").write_text(dataset_to_json(dataset) + "\n")
    (out_dir / "golden_trace.jsonl").write_text(serialize_trace(result.records))
    (out_dir / "golden_log.jsonl").write_text(serialize_log(records))
    meta = {
        "seed": GOLDEN_SEED,
        "session_id": SESSION_ID,
        "chart_a": result.chart_a,
        "chart_b": result.chart_b,
        "filtered_variables": result.filtered_variables,
        "samples": len(result.records),
        "events": len(records),
    }
    (out_dir / "golden_meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    print(f"golden artifacts written to {out_dir} ({len(result.records)} samples, "
          f"{len(records)} events)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
