"""Probe the simulated tracker: depth limits, FOV edges, occlusion, latch.

Run:  python demos/demo_tracker_envelope.py
"""

from gce import HeadPose, SensorModel, TrackerState, observe
from gce.hands import Finger, HandFrame, Side

model = SensorModel()
head = HeadPose(pos=(0.0, 0.0, 1.6), quat=(1.0, 0.0, 0.0, 0.0))  # facing +x
print(f"sensor: {model.min_depth_m}-{model.max_depth_m} m depth, "
      f"{model.fov_h_deg:g}x{model.fov_v_deg:g} deg FOV, "
      f"{model.occlusion_cone_deg:g} deg occlusion cone")


def hand_at(x, y, z, side=Side.RIGHT):
    tips = tuple(Finger(tip=(x, y + 0.01 * i, z + 0.05), curl=0.3) for i in range(5))
    return HandFrame(side, (x, y, z), (0.0, 0.0, 1.0), (1.0, 0.0, 0.0), tips, 0)


print("\ndepth sweep (hand straight ahead):")
for depth in (0.05, 0.10, 0.40, 0.80, 0.95):
    _, obs, _ = observe(model, head, None, hand_at(depth, 0.0, 1.6))
    verdict = "tracked" if obs.tracked else f"dropped ({obs.drop_reason.value})"
    print(f"  {depth:4.2f} m -> {verdict}")

print("\nhands stacked along the view ray (zoom posture failure mode):")
state = TrackerState()
upper = hand_at(0.40, 0.0, 1.25, Side.LEFT)
lower = hand_at(0.40, 0.0, 1.12, Side.RIGHT)
left, right, state = observe(model, head, upper, lower, None, state)
print(f"  upper: tracked={left.tracked}  lower: tracked={right.tracked}"
      f" reason={right.drop_reason.value if right.drop_reason else None}")

print("\nafter separating, the reacquisition latch holds a few frames:")
lower_far = hand_at(0.40, 0.0, 0.95, Side.RIGHT)
for frame in range(5):
    left, right, state = observe(model, head, upper, lower_far, None, state)
    print(f"  frame {frame}: lower tracked={right.tracked}")
