"""Script the full walkthrough session, replay it, and summarize the log.

Run:  python demos/demo_walkthrough_replay.py
"""

import time

from gce import GenParams, ReplayConfig, analyze_log, generate_dataset, replay_session
from gce.chart import Mode
from gce.scripting import scenario_task_series

dataset = generate_dataset(GenParams(seed=7))
print("scripting the walkthrough (travel, toggle, navigate, rotate, range, "
      "zoom, sort, filter, reset, pause)...")
scenario = scenario_task_series(dataset)
print(f"  route: {scenario.chart_a} -> {scenario.chart_b} -> {scenario.chart_a}")
print(f"  {len(scenario.records)} input samples "
      f"({scenario.records[-1].t_ms / 1000:.1f} s of session time)")

t0 = time.perf_counter()
records, final = replay_session(dataset, scenario.records, ReplayConfig(session_id="demo"))
elapsed = time.perf_counter() - t0
print(f"\nreplayed in {elapsed:.2f} s "
      f"({elapsed * 1e6 / len(scenario.records):.0f} us per sample, "
      f"{len(dataset.entities)} charts)")

stats = analyze_log(records)
print(f"\n{len(records)} events over {stats.duration_ms / 1000:.1f} s:")
for event, n in sorted(stats.event_counts.items()):
    print(f"  {event:>22} x{n}")

assert all(c.mode is Mode.INACTIVE for c in final.charts.values())
print("\nfinal state: every chart back to inactive")
print(f"snap-guard filter day: {scenario.filter_day} "
      f"(variables below {scenario.filter_threshold:g} filtered: "
      f"{scenario.filtered_variables})")
