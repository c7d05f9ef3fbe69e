"""Head-mounted hand tracker simulation.

Reproduces the failure modes of a real HMD-mounted tracker: a limited
interaction-zone depth, an angular field of view, inter-hand occlusion
(the nearer hand shadows the farther one inside a small cone around the
sensor ray), and a short reacquisition latch after any drop.  Optional
seeded jitter perturbs positions; it is off by default so replays stay
byte-deterministic.

The latch needs memory between samples, so ``observe`` threads an explicit
``TrackerState`` value instead of hiding a clock or counter internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .geometry import (
    Quat,
    Vec3,
    dist,
    quat_conj,
    quat_rotate,
    sub,
)
from .hands import Finger, HandFrame
from .rng import SplitMix64


class DropReason(Enum):
    OUT_OF_ZONE = "out_of_zone"
    OUT_OF_FOV = "out_of_fov"
    OCCLUDED = "occluded"


@dataclass(frozen=True)
class SensorModel:
    """Tracker envelope parameters."""

    min_depth_m: float = 0.10
    max_depth_m: float = 0.80
    fov_h_deg: float = 150.0
    fov_v_deg: float = 120.0
    occlusion_cone_deg: float = 10.0
    jitter_std_m: float = 0.0
    dropout_latch_frames: int = 3

    def __post_init__(self):
        if not (0.0 < self.min_depth_m < self.max_depth_m):
            raise ValueError("depth range must satisfy 0 < min < max")
        for f in (self.fov_h_deg, self.fov_v_deg):
            if not (0.0 < f <= 180.0):
                raise ValueError("FOV angles must lie in (0, 180]")
        if self.occlusion_cone_deg < 0.0:
            raise ValueError("occlusion cone must be >= 0")


@dataclass(frozen=True)
class HeadPose:
    pos: Vec3
    quat: Quat


@dataclass(frozen=True)
class ObservedHand:
    """Sensor output for one hand: a frame, or a reasoned drop."""

    frame: HandFrame | None
    tracked: bool
    drop_reason: DropReason | None

    @staticmethod
    def absent() -> "ObservedHand":
        return ObservedHand(frame=None, tracked=False, drop_reason=None)

    @staticmethod
    def dropped(reason: DropReason) -> "ObservedHand":
        return ObservedHand(frame=None, tracked=False, drop_reason=reason)


@dataclass(frozen=True)
class TrackerState:
    """Reacquisition latch counters, threaded through observe calls."""

    left_latch: int = 0
    right_latch: int = 0
    left_reason: DropReason | None = None
    right_reason: DropReason | None = None


def _to_head_frame(head: HeadPose, point: Vec3) -> Vec3:
    return quat_rotate(quat_conj(head.quat), sub(point, head.pos))


def in_frustum(model: SensorModel, head: HeadPose, point: Vec3) -> bool:
    """Depth range and angular FOV test for a single point."""
    local = _to_head_frame(head, point)
    depth = local[0]
    if depth < model.min_depth_m or depth > model.max_depth_m:
        return False
    if abs(math.atan2(local[1], depth)) > math.radians(model.fov_h_deg / 2.0):
        return False
    if abs(math.atan2(local[2], depth)) > math.radians(model.fov_v_deg / 2.0):
        return False
    return True


def _geometric_drop(
    model: SensorModel,
    head: HeadPose,
    frame: HandFrame,
    other: HandFrame | None,
) -> DropReason | None:
    local = _to_head_frame(head, frame.palm_pos)
    depth = local[0]
    if depth < model.min_depth_m or depth > model.max_depth_m:
        return DropReason.OUT_OF_ZONE
    if abs(math.atan2(local[1], depth)) > math.radians(model.fov_h_deg / 2.0):
        return DropReason.OUT_OF_FOV
    if abs(math.atan2(local[2], depth)) > math.radians(model.fov_v_deg / 2.0):
        return DropReason.OUT_OF_FOV
    if other is not None:
        mine = dist(head.pos, frame.palm_pos)
        theirs = dist(head.pos, other.palm_pos)
        if theirs < mine and mine > 0.0 and theirs > 0.0:
            a = sub(frame.palm_pos, head.pos)
            b = sub(other.palm_pos, head.pos)
            cosang = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) / (mine * theirs)
            angle = math.degrees(math.acos(max(-1.0, min(1.0, cosang))))
            if angle <= model.occlusion_cone_deg:
                return DropReason.OCCLUDED
    return None


def _jitter_frame(frame: HandFrame, std: float, rng: SplitMix64) -> HandFrame:
    def wobble(p: Vec3) -> Vec3:
        return (p[0] + rng.gauss(std), p[1] + rng.gauss(std), p[2] + rng.gauss(std))

    fingers = tuple(Finger(tip=wobble(f.tip), curl=f.curl) for f in frame.fingers)
    return replace(frame, palm_pos=wobble(frame.palm_pos), fingers=fingers)


def observe(
    model: SensorModel,
    head: HeadPose,
    left: HandFrame | None,
    right: HandFrame | None,
    rng: SplitMix64 | None = None,
    state: TrackerState = TrackerState(),
) -> tuple[ObservedHand, ObservedHand, TrackerState]:
    """Run one sample through the sensor envelope.

    Absent input hands pass through untracked with no drop reason and do
    not advance their latch.  A geometric drop arms the latch for
    ``dropout_latch_frames``; while armed, a geometrically fine hand is
    still reported dropped with the original reason.  Jitter draws are
    consumed left hand first, palm before fingertips, x/y/z per point, so
    identical inputs and seed always produce identical observations.
    """
    results: list[ObservedHand] = []
    latches = {"left": (state.left_latch, state.left_reason),
               "right": (state.right_latch, state.right_reason)}

    for name, frame, other in (("left", left, right), ("right", right, left)):
        latch, reason = latches[name]
        if frame is None:
            results.append(ObservedHand.absent())
            continue
        drop = _geometric_drop(model, head, frame, other)
        if drop is not None:
            latches[name] = (model.dropout_latch_frames, drop)
            results.append(ObservedHand.dropped(drop))
            continue
        if latch > 0:
            latches[name] = (latch - 1, reason)
            results.append(ObservedHand.dropped(reason))
            continue
        out = frame
        if model.jitter_std_m > 0.0 and rng is not None:
            out = _jitter_frame(frame, model.jitter_std_m, rng)
        results.append(ObservedHand(frame=out, tracked=True, drop_reason=None))

    new_state = TrackerState(
        left_latch=latches["left"][0],
        right_latch=latches["right"][0],
        left_reason=latches["left"][1],
        right_reason=latches["right"][1],
    )
    return results[0], results[1], new_state
