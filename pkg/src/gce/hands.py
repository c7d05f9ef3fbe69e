"""Hand skeleton frames and posture classification.

The skeleton is deliberately minimal: palm pose plus five fingertip
positions and curl values.  Every posture the engine consumes is decidable
from it, and it keeps trace files small.

Classification is hysteretic (separate engage/release thresholds for the
grasp postures) and debounced: a new posture must be seen on two
consecutive frames before it engages, while releases take effect
immediately.  Shape-wise, a pointing hand splits into ``POINT`` or
``INDEX_UP`` by index direction alone; without that split the priority
order would make ``INDEX_UP`` unreachable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .geometry import Vec3, dot, norm, segment_distance, sub

UP: Vec3 = (0.0, 0.0, 1.0)


class HandError(Exception):
    pass


class MalformedFrame(HandError):
    pass


class TimestampSkew(HandError):
    pass


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


class Posture(Enum):
    NONE = "none"
    PINCH = "pinch"
    GRAB = "grab"
    POINT = "point"
    OPEN_STOP = "open_stop"
    INDEX_UP = "index_up"


# thumb..pinky
THUMB, INDEX, MIDDLE, RING, PINKY = range(5)


@dataclass(frozen=True)
class Finger:
    tip: Vec3
    curl: float


@dataclass(frozen=True)
class HandFrame:
    """One tracked hand sample in play-area coordinates."""

    side: Side
    palm_pos: Vec3
    palm_normal: Vec3
    palm_dir: Vec3
    fingers: tuple[Finger, Finger, Finger, Finger, Finger]
    t_ms: int

    def validate(self) -> None:
        for v in (self.palm_normal, self.palm_dir):
            n = norm(v)
            if not math.isfinite(n) or abs(n - 1.0) > 1e-6:
                raise MalformedFrame(f"non-unit palm vector {v} on {self.side.value} hand")
        for p in (self.palm_pos, *[f.tip for f in self.fingers]):
            if not all(math.isfinite(c) for c in p):
                raise MalformedFrame(f"non-finite coordinate in {self.side.value} hand frame")
        for f in self.fingers:
            if not (0.0 <= f.curl <= 1.0) or not math.isfinite(f.curl):
                raise MalformedFrame(f"curl {f.curl} outside [0, 1]")

    def index_dir(self) -> Vec3:
        d = sub(self.fingers[INDEX].tip, self.palm_pos)
        n = norm(d)
        if n == 0.0:
            raise MalformedFrame("index tip coincides with palm")
        return (d[0] / n, d[1] / n, d[2] / n)


@dataclass(frozen=True)
class PostureState:
    """Per-hand classification state carried between frames."""

    posture: Posture = Posture.NONE
    pinch_point: Vec3 | None = None
    grab_point: Vec3 | None = None
    since_ms: int = 0
    pending: Posture | None = None
    pending_since_ms: int = 0
    pending_frames: int = 0


@dataclass(frozen=True)
class BimanualRelation:
    palms_facing: bool
    separation_m: float
    vertical_stacked: bool
    indices_crossed: bool


@dataclass(frozen=True)
class PostureConfig:
    """Classification thresholds; defaults are design choices, not measured."""

    pinch_engage_m: float = 0.025
    pinch_release_m: float = 0.035
    grab_engage_curl: float = 0.7
    grab_release_curl: float = 0.5
    point_index_max_curl: float = 0.2
    point_other_min_curl: float = 0.6
    open_max_curl: float = 0.2
    open_forward_dot: float = 0.6
    index_up_dot: float = 0.8
    debounce_frames: int = 2
    facing_dot: float = -0.8
    stacked_horizontal_max_m: float = 0.12
    stacked_vertical_min_m: float = 0.05
    cross_up_max_deg: float = 80.0
    cross_gap_max_m: float = 0.02
    cross_angle_min_deg: float = 20.0
    cross_angle_max_deg: float = 90.0


def pinch_distance(frame: HandFrame) -> float:
    a = frame.fingers[THUMB].tip
    b = frame.fingers[INDEX].tip
    return math.dist(a, b)


def pinch_point(frame: HandFrame) -> Vec3:
    a = frame.fingers[THUMB].tip
    b = frame.fingers[INDEX].tip
    return ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0, (a[2] + b[2]) / 2.0)


def grab_point(frame: HandFrame) -> Vec3:
    xs = ys = zs = 0.0
    for f in frame.fingers:
        xs += f.tip[0]
        ys += f.tip[1]
        zs += f.tip[2]
    return (xs / 5.0, ys / 5.0, zs / 5.0)


def _mean_grip_curl(frame: HandFrame) -> float:
    return sum(frame.fingers[i].curl for i in (INDEX, MIDDLE, RING, PINKY)) / 4.0


def _point_shape(frame: HandFrame, cfg: PostureConfig) -> bool:
    if frame.fingers[INDEX].curl > cfg.point_index_max_curl:
        return False
    return all(
        frame.fingers[i].curl >= cfg.point_other_min_curl for i in (MIDDLE, RING, PINKY)
    )


def _index_up(frame: HandFrame, cfg: PostureConfig) -> bool:
    return dot(frame.index_dir(), UP) >= cfg.index_up_dot


def _engages(posture: Posture, frame: HandFrame, cfg: PostureConfig, forward: Vec3) -> bool:
    if posture is Posture.PINCH:
        return pinch_distance(frame) <= cfg.pinch_engage_m
    if posture is Posture.GRAB:
        return _mean_grip_curl(frame) >= cfg.grab_engage_curl
    if posture is Posture.POINT:
        return _point_shape(frame, cfg) and not _index_up(frame, cfg)
    if posture is Posture.OPEN_STOP:
        return (
            all(f.curl <= cfg.open_max_curl for f in frame.fingers)
            and dot(frame.palm_normal, forward) >= cfg.open_forward_dot
        )
    if posture is Posture.INDEX_UP:
        return _point_shape(frame, cfg) and _index_up(frame, cfg)
    return False


def _sustains(posture: Posture, frame: HandFrame, cfg: PostureConfig, forward: Vec3) -> bool:
    """Release-side condition: wider than engage for the grasp postures."""
    if posture is Posture.PINCH:
        return pinch_distance(frame) < cfg.pinch_release_m
    if posture is Posture.GRAB:
        return _mean_grip_curl(frame) > cfg.grab_release_curl
    return _engages(posture, frame, cfg, forward)


_PRIORITY = (Posture.PINCH, Posture.GRAB, Posture.POINT, Posture.OPEN_STOP, Posture.INDEX_UP)


def _with_points(state: PostureState, frame: HandFrame) -> PostureState:
    return replace(
        state,
        pinch_point=pinch_point(frame) if state.posture is Posture.PINCH else None,
        grab_point=grab_point(frame) if state.posture is Posture.GRAB else None,
    )


def classify_posture(
    frame: HandFrame,
    prev: PostureState,
    cfg: PostureConfig = PostureConfig(),
    forward: Vec3 = (1.0, 0.0, 0.0),
) -> PostureState:
    """Advance a hand's posture state with one frame.

    ``forward`` is the torso-forward direction used by the stop posture;
    callers that track a head pose pass its horizontal forward axis.
    """
    frame.validate()

    candidate = next(
        (p for p in _PRIORITY if _engages(p, frame, cfg, forward)), None
    )
    current = prev.posture
    if current is not Posture.NONE and _sustains(current, frame, cfg, forward):
        # keep the held posture unless a strictly higher-priority
        # candidate is trying to take over
        if candidate is None or _PRIORITY.index(candidate) >= _PRIORITY.index(current):
            candidate = current

    if candidate is current:
        state = replace(prev, pending=None, pending_frames=0)
        return _with_points(state, frame)

    if candidate is None:
        # releases are immediate
        return PostureState(posture=Posture.NONE, since_ms=frame.t_ms)

    if prev.pending is candidate:
        frames = prev.pending_frames + 1
        if frames >= cfg.debounce_frames:
            state = PostureState(posture=candidate, since_ms=prev.pending_since_ms)
            return _with_points(state, frame)
        return replace(prev, pending=candidate, pending_frames=frames)
    # first sighting of a new posture: remember it, keep the old one
    state = replace(
        prev, pending=candidate, pending_since_ms=frame.t_ms, pending_frames=1
    )
    if current is not Posture.NONE and not _sustains(current, frame, cfg, forward):
        state = replace(
            state, posture=Posture.NONE, since_ms=frame.t_ms,
            pinch_point=None, grab_point=None,
        )
        return state
    return _with_points(state, frame)


def bimanual_relation(
    left: HandFrame,
    right: HandFrame,
    cfg: PostureConfig = PostureConfig(),
) -> BimanualRelation:
    """Geometric relation between two hands sampled together."""
    left.validate()
    right.validate()
    if abs(left.t_ms - right.t_ms) > 12:
        raise TimestampSkew(f"hand frames {left.t_ms} / {right.t_ms} ms apart")

    separation = math.dist(left.palm_pos, right.palm_pos)
    facing = dot(left.palm_normal, right.palm_normal) <= cfg.facing_dot

    dx = left.palm_pos[0] - right.palm_pos[0]
    dy = left.palm_pos[1] - right.palm_pos[1]
    dz = abs(left.palm_pos[2] - right.palm_pos[2])
    stacked = (
        math.hypot(dx, dy) <= cfg.stacked_horizontal_max_m
        and dz >= cfg.stacked_vertical_min_m
    )

    crossed = _indices_crossed(left, right, cfg)
    return BimanualRelation(
        palms_facing=facing,
        separation_m=separation,
        vertical_stacked=stacked,
        indices_crossed=crossed,
    )


def _indices_crossed(left: HandFrame, right: HandFrame, cfg: PostureConfig) -> bool:
    up_limit = math.cos(math.radians(cfg.cross_up_max_deg))
    dirs = []
    for f in (left, right):
        d = f.index_dir()
        if dot(d, UP) < up_limit:
            return False
        dirs.append(d)
    angle = math.degrees(
        math.acos(max(-1.0, min(1.0, dot(dirs[0], dirs[1]))))
    )
    if not (cfg.cross_angle_min_deg <= angle <= cfg.cross_angle_max_deg):
        return False
    gap = segment_distance(
        left.palm_pos, left.fingers[INDEX].tip,
        right.palm_pos, right.fingers[INDEX].tip,
    )
    return gap <= cfg.cross_gap_max_m


def hold_timer(state: PostureState, posture: Posture, required_ms: int, now_ms: int) -> bool:
    """True when a posture has been held continuously long enough."""
    return state.posture is posture and now_ms - state.since_ms >= required_ms


@dataclass(frozen=True)
class GestureSpec:
    """Catalog row: feature name with its taxonomy and comfort metadata.

    Comfort codes are carried verbatim from the posture-comfort labelling
    scheme the interface was designed against; they are metadata only and
    nothing in the engine evaluates them.
    """

    feature: str
    task_tags: tuple[str, ...]
    technique: str
    comfort_codes: tuple[str, ...]
    bimanual: bool


GESTURE_CATALOG: tuple[GestureSpec, ...] = (
    GestureSpec("travel", ("explore",), "selection_based_travel", ("5c",), False),
    GestureSpec(
        "mode_toggle",
        ("elaborate", "abstract", "change_configuration"),
        "hand_based_grasping",
        ("1c", "5c", "9c"),
        False,
    ),
    GestureSpec("rotation", ("change_configuration",), "indirect_widget", ("2c", "10c"), False),
    GestureSpec("variable_sort", ("reconfigure",), "indirect_widget", ("2c",), False),
    GestureSpec("variable_filter", ("filter",), "indirect_widget", ("2c",), False),
    GestureSpec("time_event_selection", ("select",), "hand_based_grasping", ("2c",), False),
    GestureSpec("time_range_selection", ("select",), "symmetric_bimanual", ("2c", "2c"), True),
    GestureSpec("zoom_in", ("elaborate",), "symmetric_bimanual", ("11u", "12u"), True),
    GestureSpec("zoom_out", ("abstract",), "symmetric_bimanual", ("11u", "12u"), True),
    GestureSpec("reset", ("undo_redo",), "symmetric_bimanual", ("5c", "3u"), True),
    GestureSpec("pause_resume", ("change_configuration",), "symmetric_bimanual", ("3u", "3u"), True),
)
