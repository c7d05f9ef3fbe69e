"""Reproduce the time-slice release snap, then show the guard fixing it.

A grab release often jitters the fingertips one event-gap up or down while
the palm stays put; without a guard the slice snaps to the neighbouring
event.  Run:  python demos/demo_snap_guard.py
"""

from gce import EngineConfig, ReplayConfig, replay_session
from gce.chart import Dataset, Entity
from gce.scripting import GestureScripter

entity = Entity(
    id="demo",
    name="demo",
    position=(0.0, 0.0),
    series=tuple(tuple(float(t % 40) for t in range(150)) for _ in range(5)),
)
dataset = Dataset(
    entities=(entity,),
    variable_names=tuple(f"var_{i}" for i in range(5)),
    timestamps=tuple(f"day-{t:03d}" for t in range(150)),
)

TARGET = 60
print(f"dragging the time slice to day {TARGET}, then releasing with a "
      f"fingertip twitch while the palm stays still...\n")

hits = {"guarded": 0, "unguarded": 0}
for seed in range(10):
    sc = GestureScripter(dataset, ReplayConfig())
    sc.touch_toggle("demo")
    sc.grab_slice_to("demo", TARGET, release="noisy", noise_seed=seed)
    trace = sc.records

    _, guarded = replay_session(dataset, trace, ReplayConfig())
    no_guard = ReplayConfig(engine=EngineConfig(snap_guard_enabled=False))
    _, unguarded = replay_session(dataset, trace, no_guard)

    g = guarded.charts["demo"].slice_index
    u = unguarded.charts["demo"].slice_index
    hits["guarded"] += g == TARGET
    hits["unguarded"] += u == TARGET
    print(f"  twitch #{seed}: guard on -> day {g:3d}   guard off -> day {u:3d}")

print(f"\nguard on lands the intended day {hits['guarded']}/10 times; "
      f"guard off only {hits['unguarded']}/10")
