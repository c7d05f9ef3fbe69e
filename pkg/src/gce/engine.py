"""Interaction state machine.

``step`` is a pure function ``(state, sample) -> (state, events)``: it
classifies hand postures, advances in-progress gestures, and applies at
most one newly initiated feature per sample, emitting one ordered event
per applied feature.  There are no hidden clocks and no randomness, so a
trace replays to the same event sequence anywhere.

Handler order per step: pause/resume, then continuations of whatever is
already in progress (travel transit, residual spin, grasps, range
selection, zoom capture), then new initiations in fixed priority (reset,
zoom, range, grasp, mode toggle, travel).  Intent-inference guards live
here too: travel suppression near mode-toggle widgets, and the
release-time snap guard for time-slice drags.

Widget geometry, all derived from the chart layout: the mode-toggle
sphere floats just above the time axis top; the rotation handle sits on a
ring around the axis at half height, at the chart's current yaw; axis
spheres cap each variable axis at the top.  Only one widget grasp is held
engine-wide at a time.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum

from . import chart as chart_ops
from .chart import ChartConfig, ChartInstance, Dataset, Mode
from .geometry import (
    Vec3,
    add,
    angle_between,
    dist,
    dist_xy,
    ease_in_out,
    lerp,
    normalize,
    quat_rotate,
    rot_z,
    sub,
    wrap_angle,
    ray_hits_vertical_cylinder,
)
from .hands import (
    HandFrame,
    Posture,
    PostureConfig,
    PostureState,
    Side,
    bimanual_relation,
)
from .sensor import HeadPose, ObservedHand

log = logging.getLogger(__name__)


class EngineError(Exception):
    pass


class NonMonotonicTime(EngineError):
    pass


class EventKind(Enum):
    TRAVEL_ARMED = "travel_armed"
    TRAVEL_STARTED = "travel_started"
    TRAVEL_COMPLETED = "travel_completed"
    MODE_CHANGED = "mode_changed"
    TIME_EVENT_SELECTED = "time_event_selected"
    TIME_RANGE_PREVIEW = "time_range_preview"
    TIME_RANGE_APPLIED = "time_range_applied"
    ZOOMED_IN = "zoomed_in"
    ZOOMED_OUT = "zoomed_out"
    VARIABLE_SORTED = "variable_sorted"
    VARIABLE_FILTERED = "variable_filtered"
    CHART_RESET = "chart_reset"
    ROTATION_CHANGED = "rotation_changed"
    PAUSED = "paused"
    RESUMED = "resumed"
    SUPPRESSED_TRAVEL = "suppressed_travel"
    SNAP_GUARD_REVERTED = "snap_guard_reverted"


class TaskTag(Enum):
    SELECT = "select"
    EXPLORE = "explore"
    RECONFIGURE = "reconfigure"
    ENCODE = "encode"
    ABSTRACT = "abstract"
    ELABORATE = "elaborate"
    FILTER = "filter"
    CONNECT = "connect"
    UNDO_REDO = "undo_redo"
    CHANGE_CONFIGURATION = "change_configuration"


# fixed taxonomy tag per event kind; mode changes are direction-dependent
KIND_TASK: dict[EventKind, TaskTag] = {
    EventKind.TRAVEL_ARMED: TaskTag.EXPLORE,
    EventKind.TRAVEL_STARTED: TaskTag.EXPLORE,
    EventKind.TRAVEL_COMPLETED: TaskTag.EXPLORE,
    EventKind.SUPPRESSED_TRAVEL: TaskTag.EXPLORE,
    EventKind.TIME_EVENT_SELECTED: TaskTag.SELECT,
    EventKind.TIME_RANGE_PREVIEW: TaskTag.SELECT,
    EventKind.TIME_RANGE_APPLIED: TaskTag.SELECT,
    EventKind.SNAP_GUARD_REVERTED: TaskTag.SELECT,
    EventKind.ZOOMED_IN: TaskTag.ELABORATE,
    EventKind.ZOOMED_OUT: TaskTag.ABSTRACT,
    EventKind.VARIABLE_SORTED: TaskTag.RECONFIGURE,
    EventKind.VARIABLE_FILTERED: TaskTag.FILTER,
    EventKind.CHART_RESET: TaskTag.UNDO_REDO,
    EventKind.ROTATION_CHANGED: TaskTag.CHANGE_CONFIGURATION,
    EventKind.PAUSED: TaskTag.CHANGE_CONFIGURATION,
    EventKind.RESUMED: TaskTag.CHANGE_CONFIGURATION,
}

# events that mark a feature being applied; at most one of these may be
# emitted per step
INITIATION_KINDS = frozenset(
    {
        EventKind.TRAVEL_STARTED,
        EventKind.MODE_CHANGED,
        EventKind.TIME_RANGE_APPLIED,
        EventKind.ZOOMED_IN,
        EventKind.ZOOMED_OUT,
        EventKind.VARIABLE_SORTED,
        EventKind.VARIABLE_FILTERED,
        EventKind.CHART_RESET,
        EventKind.PAUSED,
        EventKind.RESUMED,
    }
)


@dataclass(frozen=True)
class InteractionEvent:
    t_ms: int
    seq: int
    kind: EventKind
    task_tag: TaskTag
    chart_id: str | None
    payload: dict


@dataclass(frozen=True)
class Viewpoint:
    """Virtual locomotion offset: play-area origin on the floor plus yaw."""

    pos: Vec3
    yaw: float

    def to_world(self, local: Vec3) -> Vec3:
        return add(self.pos, rot_z(local, self.yaw))

    def dir_to_world(self, local: Vec3) -> Vec3:
        return rot_z(local, self.yaw)


@dataclass(frozen=True)
class InputSample:
    t_ms: int
    head: HeadPose
    left: ObservedHand
    right: ObservedHand


@dataclass(frozen=True)
class EngineConfig:
    """All interaction tuning constants.

    None of the numeric defaults besides the pause hold are measured
    values; they are engineering choices exposed for tuning.
    """

    gaze_dwell_ms: int = 500
    faraway_min_m: float = 2.0
    point_tol_deg: float = 15.0
    transit_ms: int = 1000
    standoff_m: float = 1.2
    suppress_radius_m: float = 0.3
    widget_r_m: float = 0.06
    widget_above_m: float = 0.10
    handle_offset_m: float = 0.10
    handle_height_frac: float = 0.5
    grasp_capture_m: float = 0.08
    guard_window_ms: int = 100
    palm_still_m: float = 0.015
    snap_guard_enabled: bool = True
    flick_min_deg_s: float = 90.0
    lambda_per_s: float = math.log(2.0) / 0.5
    rotation_event_deg: float = 5.0
    spin_stop_deg_s: float = 1.0
    zoom_stretch_m: float = 0.20
    zoom_clap_m: float = 0.20
    reset_arm_ms: int = 200
    act_radius_m: float = 1.5
    filter_snap: float = 1.5
    pause_hold_ms: int = 1500
    pause_still_m: float = 0.05
    play_area_m: tuple[float, float] = (2.0, 2.0)
    start_east_margin_m: float = 1.5
    posture: PostureConfig = field(default_factory=PostureConfig)
    chart: ChartConfig = field(default_factory=ChartConfig)


# -- gesture context records ----------------------------------------------


@dataclass(frozen=True)
class TravelArmedState:
    chart_id: str
    since_ms: int
    suppressed_emitted: bool = False


@dataclass(frozen=True)
class TravelTransit:
    chart_id: str
    from_vp: Viewpoint
    to_vp: Viewpoint
    t0_ms: int


@dataclass(frozen=True)
class GazeTrack:
    chart_id: str
    since_ms: int


@dataclass(frozen=True)
class SliceGrasp:
    chart_id: str
    start_grab: Vec3
    start_height: float
    # (t_ms, palm_world, grab_world, slice_index) samples while held
    history: tuple[tuple[int, Vec3, Vec3, int], ...]


@dataclass(frozen=True)
class RotationGrasp:
    chart_id: str
    prev_azimuth: float
    prev_t_ms: int
    omega_rad_s: float
    last_emit_yaw: float


@dataclass(frozen=True)
class AxisGrasp:
    chart_id: str
    variable: int
    pos: Vec3
    detached: bool


@dataclass(frozen=True)
class RangeGesture:
    chart_id: str
    left_point: Vec3
    right_point: Vec3
    last_range: tuple[int, int] | None


@dataclass(frozen=True)
class ZoomGesture:
    chart_id: str
    initial_separation: float
    fired: bool


@dataclass(frozen=True)
class PauseHold:
    since_ms: int
    left_anchor: Vec3
    right_anchor: Vec3


@dataclass(frozen=True)
class SpinState:
    chart_id: str
    omega_rad_s: float
    last_emit_yaw: float


Grasp = SliceGrasp | RotationGrasp | AxisGrasp


@dataclass
class EngineState:
    """World state for one session.

    Treated as immutable by callers: ``step`` returns a fresh state and
    never mutates its input, so states can be kept, compared, and moved
    between threads freely.
    """

    charts: dict[str, ChartInstance]
    layout: dict[str, tuple[float, float]]
    viewpoint: Viewpoint
    play_area: tuple[float, float] = (2.0, 2.0)
    paused: bool = False
    travel: TravelArmedState | TravelTransit | None = None
    gaze: GazeTrack | None = None
    grasps: dict[Side, Grasp | None] = field(
        default_factory=lambda: {Side.LEFT: None, Side.RIGHT: None}
    )
    range_gesture: RangeGesture | None = None
    zoom_gesture: ZoomGesture | None = None
    reset_armed: bool = False
    reset_block: bool = False
    pause_hold: PauseHold | None = None
    spin: SpinState | None = None
    postures: dict[Side, PostureState] = field(
        default_factory=lambda: {Side.LEFT: PostureState(), Side.RIGHT: PostureState()}
    )
    toggle_inside: frozenset[tuple[str, str]] = frozenset()
    t_ms: int = -1
    next_seq: int = 0

    def copy(self) -> "EngineState":
        return EngineState(
            charts=dict(self.charts),
            layout=self.layout,
            viewpoint=self.viewpoint,
            play_area=self.play_area,
            paused=self.paused,
            travel=self.travel,
            gaze=self.gaze,
            grasps=dict(self.grasps),
            range_gesture=self.range_gesture,
            zoom_gesture=self.zoom_gesture,
            reset_armed=self.reset_armed,
            reset_block=self.reset_block,
            pause_hold=self.pause_hold,
            spin=self.spin,
            postures=dict(self.postures),
            toggle_inside=self.toggle_inside,
            t_ms=self.t_ms,
            next_seq=self.next_seq,
        )


def initial_state(dataset: Dataset, cfg: EngineConfig = EngineConfig()) -> EngineState:
    """Canonical session start: all charts inactive, viewpoint at the
    eastern border of the chart layout, facing west across it."""
    charts = {e.id: chart_ops.new_chart(e, cfg.chart) for e in dataset.entities}
    layout = {e.id: e.position for e in dataset.entities}
    if layout:
        max_x = max(p[0] for p in layout.values())
        ys = [p[1] for p in layout.values()]
        start = (max_x + cfg.start_east_margin_m, (min(ys) + max(ys)) / 2.0, 0.0)
    else:
        start = (0.0, 0.0, 0.0)
    return EngineState(
        charts=charts,
        layout=layout,
        viewpoint=Viewpoint(pos=start, yaw=math.pi),
        play_area=cfg.play_area_m,
    )


# -- widget geometry -------------------------------------------------------


def toggle_center(state: EngineState, cfg: EngineConfig, chart_id: str) -> Vec3:
    x, y = state.layout[chart_id]
    return (x, y, state.charts[chart_id].length_m + cfg.widget_above_m)


def handle_center(state: EngineState, cfg: EngineConfig, chart_id: str) -> Vec3:
    x, y = state.layout[chart_id]
    c = state.charts[chart_id]
    r = c.radius_m + cfg.handle_offset_m
    return (
        x + r * math.cos(c.yaw_rad),
        y + r * math.sin(c.yaw_rad),
        c.length_m * cfg.handle_height_frac,
    )


def axis_sphere_center(
    state: EngineState, cfg: EngineConfig, chart_id: str, slot: int
) -> Vec3:
    x, y = state.layout[chart_id]
    c = state.charts[chart_id]
    a = c.yaw_rad + c.slot_angle(slot)
    return (x + c.radius_m * math.cos(a), y + c.radius_m * math.sin(a), c.length_m)


def _chart_azimuth(state: EngineState, chart_id: str, p: Vec3) -> float:
    x, y = state.layout[chart_id]
    return math.atan2(p[1] - y, p[0] - x)


# -- the step function -----------------------------------------------------


class _Ctx:
    """Per-step scratch: world-space hand data and the event buffer."""

    __slots__ = (
        "cfg", "t", "dt", "events", "initiated",
        "frames", "palms_local", "palms_world", "grabs_world", "pinches_world",
        "head_world_pos", "head_world_fwd", "relation",
    )

    def __init__(self, cfg: EngineConfig, t: int, dt: int):
        self.cfg = cfg
        self.t = t
        self.dt = dt
        self.events: list[InteractionEvent] = []
        self.initiated = False
        self.frames: dict[Side, HandFrame | None] = {}
        self.palms_local: dict[Side, Vec3 | None] = {}
        self.palms_world: dict[Side, Vec3 | None] = {}
        self.grabs_world: dict[Side, Vec3 | None] = {}
        self.pinches_world: dict[Side, Vec3 | None] = {}
        self.head_world_pos: Vec3 = (0.0, 0.0, 0.0)
        self.head_world_fwd: Vec3 = (1.0, 0.0, 0.0)
        self.relation = None


def _emit(
    state: EngineState,
    ctx: _Ctx,
    kind: EventKind,
    chart_id: str | None,
    payload: dict,
    task_tag: TaskTag | None = None,
) -> None:
    tag = task_tag if task_tag is not None else KIND_TASK[kind]
    ctx.events.append(
        InteractionEvent(
            t_ms=ctx.t,
            seq=state.next_seq,
            kind=kind,
            task_tag=tag,
            chart_id=chart_id,
            payload=payload,
        )
    )
    state.next_seq += 1
    if kind in INITIATION_KINDS or kind is EventKind.TRAVEL_COMPLETED:
        ctx.initiated = True


def step(
    state: EngineState, sample: InputSample, cfg: EngineConfig = EngineConfig()
) -> tuple[EngineState, list[InteractionEvent]]:
    if sample.t_ms <= state.t_ms:
        raise NonMonotonicTime(
            f"sample at {sample.t_ms} ms after state at {state.t_ms} ms"
        )
    s = state.copy()
    ctx = _Ctx(cfg, sample.t_ms, sample.t_ms - state.t_ms if state.t_ms >= 0 else 0)
    s.t_ms = sample.t_ms

    _update_postures(s, sample, ctx)
    _handle_pause(s, sample, ctx)
    if s.paused:
        # everything else is bypassed; keep an in-flight transit frozen
        if isinstance(s.travel, TravelTransit):
            s.travel = replace(s.travel, t0_ms=s.travel.t0_ms + ctx.dt)
        return s, ctx.events

    _continue_transit(s, sample, ctx)
    _world_hand_data(s, sample, ctx)
    _continue_spin(s, ctx)
    _continue_grasps(s, ctx)
    _continue_range(s, ctx)
    _continue_zoom(s, ctx)

    _initiate_reset(s, ctx)
    _initiate_zoom(s, ctx)
    _initiate_range(s, ctx)
    _initiate_grasp(s, ctx)
    _handle_mode_toggle(s, ctx)
    _handle_travel(s, sample, ctx)

    return s, ctx.events


# -- posture bookkeeping ---------------------------------------------------


def _update_postures(s: EngineState, sample: InputSample, ctx: _Ctx) -> None:
    from .hands import classify_posture

    fwd = quat_rotate(sample.head.quat, (1.0, 0.0, 0.0))
    h = math.hypot(fwd[0], fwd[1])
    fwd_flat = (fwd[0] / h, fwd[1] / h, 0.0) if h > 1e-9 else (1.0, 0.0, 0.0)

    for side, obs in ((Side.LEFT, sample.left), (Side.RIGHT, sample.right)):
        ctx.frames[side] = obs.frame if obs.tracked else None
        if obs.tracked and obs.frame is not None:
            s.postures[side] = classify_posture(
                obs.frame, s.postures[side], ctx.cfg.posture, fwd_flat
            )
            ctx.palms_local[side] = obs.frame.palm_pos
        else:
            prev = s.postures[side]
            if prev.posture is not Posture.NONE or prev.pending is not None:
                s.postures[side] = PostureState(since_ms=ctx.t)
            ctx.palms_local[side] = None

    fl, fr = ctx.frames[Side.LEFT], ctx.frames[Side.RIGHT]
    ctx.relation = bimanual_relation(fl, fr, ctx.cfg.posture) if fl and fr else None


def _world_hand_data(s: EngineState, sample: InputSample, ctx: _Ctx) -> None:
    vp = s.viewpoint
    ctx.head_world_pos = vp.to_world(sample.head.pos)
    ctx.head_world_fwd = vp.dir_to_world(quat_rotate(sample.head.quat, (1.0, 0.0, 0.0)))
    for side in (Side.LEFT, Side.RIGHT):
        frame = ctx.frames[side]
        post = s.postures[side]
        ctx.palms_world[side] = vp.to_world(frame.palm_pos) if frame else None
        ctx.grabs_world[side] = (
            vp.to_world(post.grab_point) if post.grab_point is not None else None
        )
        ctx.pinches_world[side] = (
            vp.to_world(post.pinch_point) if post.pinch_point is not None else None
        )


# -- pause / resume --------------------------------------------------------


def _handle_pause(s: EngineState, sample: InputSample, ctx: _Ctx) -> None:
    cfg = ctx.cfg
    both_stop = all(
        s.postures[side].posture is Posture.OPEN_STOP for side in (Side.LEFT, Side.RIGHT)
    )
    if not both_stop:
        s.pause_hold = None
        return
    pl = ctx.palms_local[Side.LEFT]
    pr = ctx.palms_local[Side.RIGHT]
    if pl is None or pr is None:
        s.pause_hold = None
        return
    hold = s.pause_hold
    if hold is None:
        s.pause_hold = PauseHold(since_ms=ctx.t, left_anchor=pl, right_anchor=pr)
        return
    if (
        dist(pl, hold.left_anchor) >= cfg.pause_still_m
        or dist(pr, hold.right_anchor) >= cfg.pause_still_m
    ):
        s.pause_hold = PauseHold(since_ms=ctx.t, left_anchor=pl, right_anchor=pr)
        return
    if ctx.t - hold.since_ms >= cfg.pause_hold_ms:
        s.paused = not s.paused
        s.pause_hold = None
        if s.paused:
            s.grasps = {Side.LEFT: None, Side.RIGHT: None}
            s.range_gesture = None
            s.zoom_gesture = None
            s.spin = None
            _emit(s, ctx, EventKind.PAUSED, None, {})
        else:
            _emit(s, ctx, EventKind.RESUMED, None, {})


# -- travel ----------------------------------------------------------------


def _continue_transit(s: EngineState, sample: InputSample, ctx: _Ctx) -> None:
    tr = s.travel
    if not isinstance(tr, TravelTransit):
        return
    u = (ctx.t - tr.t0_ms) / ctx.cfg.transit_ms
    if u >= 1.0:
        s.viewpoint = tr.to_vp
        s.travel = None
        s.gaze = None
        _emit(
            s,
            ctx,
            EventKind.TRAVEL_COMPLETED,
            tr.chart_id,
            {"at": [tr.to_vp.pos[0], tr.to_vp.pos[1]], "yaw_rad": tr.to_vp.yaw},
        )
        return
    e = ease_in_out(u)
    pos = lerp(tr.from_vp.pos, tr.to_vp.pos, e)
    dyaw = wrap_angle(tr.to_vp.yaw - tr.from_vp.yaw)
    s.viewpoint = Viewpoint(pos=pos, yaw=tr.from_vp.yaw + dyaw * e)


def gaze_hit(state: EngineState, origin: Vec3, direction: Vec3) -> str | None:
    """Nearest chart whose bounding cylinder a ray hits."""
    best_id, best_t = None, math.inf
    for cid, (x, y) in state.layout.items():
        c = state.charts[cid]
        t = ray_hits_vertical_cylinder(origin, direction, (x, y), c.radius_m, 0.0, c.length_m)
        if t is not None and t < best_t:
            best_id, best_t = cid, t
    return best_id


def _gaze_hit(s: EngineState, ctx: _Ctx) -> str | None:
    return gaze_hit(s, ctx.head_world_pos, ctx.head_world_fwd)


def _palm_near_any_toggle(s: EngineState, ctx: _Ctx) -> bool:
    r = ctx.cfg.suppress_radius_m
    for side in (Side.LEFT, Side.RIGHT):
        palm = ctx.palms_world[side]
        if palm is None:
            continue
        for cid in s.layout:
            if dist(palm, toggle_center(s, ctx.cfg, cid)) <= r:
                return True
    return False


def _point_aimed_at(s: EngineState, ctx: _Ctx, chart_id: str) -> bool:
    cfg = ctx.cfg
    x, y = s.layout[chart_id]
    aim = (x, y, s.charts[chart_id].length_m / 2.0)
    for side in (Side.LEFT, Side.RIGHT):
        if s.postures[side].posture is not Posture.POINT:
            continue
        frame = ctx.frames[side]
        if frame is None:
            continue
        palm = ctx.palms_world[side]
        tip = s.viewpoint.to_world(frame.fingers[1].tip)
        ray = sub(tip, palm)
        target = sub(aim, palm)
        if math.degrees(angle_between(ray, target)) <= cfg.point_tol_deg:
            return True
    return False


def _handle_travel(s: EngineState, sample: InputSample, ctx: _Ctx) -> None:
    cfg = ctx.cfg
    if isinstance(s.travel, TravelTransit):
        return
    if (
        any(g is not None for g in s.grasps.values())
        or s.range_gesture is not None
        or s.zoom_gesture is not None
    ):
        s.gaze = None
        return

    # gaze dwell arms a faraway chart
    hit = _gaze_hit(s, ctx)
    if hit is not None:
        cx, cy = s.layout[hit]
        far = dist_xy(ctx.head_world_pos, (cx, cy, 0.0)) > cfg.faraway_min_m
        if not far:
            hit = None
    if hit is None:
        s.gaze = None
    else:
        if s.gaze is None or s.gaze.chart_id != hit:
            s.gaze = GazeTrack(chart_id=hit, since_ms=ctx.t)
        already = isinstance(s.travel, TravelArmedState) and s.travel.chart_id == hit
        if not already and ctx.t - s.gaze.since_ms >= cfg.gaze_dwell_ms:
            s.travel = TravelArmedState(chart_id=hit, since_ms=ctx.t)
            cx, cy = s.layout[hit]
            _emit(
                s,
                ctx,
                EventKind.TRAVEL_ARMED,
                hit,
                {"distance_m": dist_xy(ctx.head_world_pos, (cx, cy, 0.0))},
            )

    tr = s.travel
    if not isinstance(tr, TravelArmedState):
        return
    if not _point_aimed_at(s, ctx, tr.chart_id):
        return
    if _palm_near_any_toggle(s, ctx):
        if not tr.suppressed_emitted:
            _emit(s, ctx, EventKind.SUPPRESSED_TRAVEL, tr.chart_id, {})
            s.travel = replace(tr, suppressed_emitted=True)
        return
    if ctx.initiated:
        return

    # launch: land at standoff on the approach side, facing the chart
    cx, cy = s.layout[tr.chart_id]
    head = ctx.head_world_pos
    away = (head[0] - cx, head[1] - cy, 0.0)
    n = math.hypot(away[0], away[1])
    away = (away[0] / n, away[1] / n, 0.0) if n > 1e-9 else (1.0, 0.0, 0.0)
    land_head = (cx + away[0] * cfg.standoff_m, cy + away[1] * cfg.standoff_m, 0.0)
    new_yaw = math.atan2(cy - land_head[1], cx - land_head[0])
    local = sample.head.pos
    offset = rot_z((local[0], local[1], 0.0), new_yaw)
    to_vp = Viewpoint(
        pos=(land_head[0] - offset[0], land_head[1] - offset[1], 0.0), yaw=new_yaw
    )
    s.travel = TravelTransit(
        chart_id=tr.chart_id, from_vp=s.viewpoint, to_vp=to_vp, t0_ms=ctx.t
    )
    s.gaze = None
    _emit(
        s,
        ctx,
        EventKind.TRAVEL_STARTED,
        tr.chart_id,
        {"to": [to_vp.pos[0], to_vp.pos[1]], "yaw_rad": to_vp.yaw},
    )


# -- rotation spin ---------------------------------------------------------


def _apply_yaw(s: EngineState, ctx: _Ctx, chart_id: str, new_yaw: float, last_emit: float) -> float:
    """Set a chart's yaw, emitting at configured increments; returns the
    updated last-emitted yaw."""
    c = s.charts[chart_id]
    s.charts[chart_id] = replace(c, yaw_rad=new_yaw)
    if abs(new_yaw - last_emit) >= math.radians(ctx.cfg.rotation_event_deg):
        _emit(s, ctx, EventKind.ROTATION_CHANGED, chart_id, {"yaw_rad": new_yaw})
        return new_yaw
    return last_emit


def _continue_spin(s: EngineState, ctx: _Ctx) -> None:
    spin = s.spin
    if spin is None or ctx.dt <= 0:
        return
    cfg = ctx.cfg
    dt_s = ctx.dt / 1000.0
    decayed = spin.omega_rad_s * math.exp(-cfg.lambda_per_s * dt_s)
    dyaw = (spin.omega_rad_s - decayed) / cfg.lambda_per_s
    c = s.charts[spin.chart_id]
    new_yaw = c.yaw_rad + dyaw
    last_emit = spin.last_emit_yaw
    if abs(decayed) < math.radians(cfg.spin_stop_deg_s):
        # fold in the analytic tail so the total residual is omega/lambda
        new_yaw += decayed / cfg.lambda_per_s
        s.charts[spin.chart_id] = replace(c, yaw_rad=new_yaw)
        s.spin = None
        if new_yaw != last_emit:
            _emit(s, ctx, EventKind.ROTATION_CHANGED, spin.chart_id, {"yaw_rad": new_yaw})
        return
    last_emit = _apply_yaw(s, ctx, spin.chart_id, new_yaw, last_emit)
    s.spin = SpinState(spin.chart_id, decayed, last_emit)


# -- grasp continuation ----------------------------------------------------


def _continue_grasps(s: EngineState, ctx: _Ctx) -> None:
    for side in (Side.LEFT, Side.RIGHT):
        grasp = s.grasps[side]
        if grasp is None:
            continue
        held = s.postures[side].posture is Posture.GRAB
        if isinstance(grasp, SliceGrasp):
            _continue_slice(s, ctx, side, grasp, held)
        elif isinstance(grasp, RotationGrasp):
            _continue_rotation(s, ctx, side, grasp, held)
        else:
            _continue_axis(s, ctx, side, grasp, held)


def _continue_slice(
    s: EngineState, ctx: _Ctx, side: Side, grasp: SliceGrasp, held: bool
) -> None:
    cfg = ctx.cfg
    c = s.charts[grasp.chart_id]
    if held:
        grab = ctx.grabs_world[side]
        palm = ctx.palms_world[side]
        if grab is None or palm is None:
            held = False
        else:
            h = grasp.start_height + (grab[2] - grasp.start_grab[2])
            idx = chart_ops.height_to_event(c, h)
            if idx != c.slice_index:
                s.charts[grasp.chart_id] = chart_ops.select_time_event(c, idx)
                _emit(
                    s, ctx, EventKind.TIME_EVENT_SELECTED, grasp.chart_id, {"index": idx}
                )
            hist = grasp.history + ((ctx.t, palm, grab, idx),)
            cutoff = ctx.t - 2 * cfg.guard_window_ms
            while len(hist) > 2 and hist[1][0] <= cutoff:
                hist = hist[1:]
            s.grasps[side] = replace(grasp, history=hist)
            return
    # release
    s.grasps[side] = None
    if not cfg.snap_guard_enabled or len(grasp.history) < 2:
        return
    window_start = ctx.t - cfg.guard_window_ms
    in_window = [e for e in grasp.history if e[0] >= window_start]
    if len(in_window) < 2:
        return
    t0, palm0, grab0, idx0 = in_window[0]
    palm_moved = max(dist(e[1], palm0) for e in in_window)
    grab_moved = abs(in_window[-1][2][2] - grab0[2])
    c = s.charts[grasp.chart_id]
    if palm_moved < cfg.palm_still_m and grab_moved >= chart_ops.event_gap_m(c):
        if idx0 != c.slice_index:
            reverted_from = c.slice_index
            s.charts[grasp.chart_id] = chart_ops.select_time_event(c, idx0)
            _emit(
                s,
                ctx,
                EventKind.SNAP_GUARD_REVERTED,
                grasp.chart_id,
                {"from_index": reverted_from, "to_index": idx0},
            )
            _emit(
                s, ctx, EventKind.TIME_EVENT_SELECTED, grasp.chart_id, {"index": idx0}
            )


def _continue_rotation(
    s: EngineState, ctx: _Ctx, side: Side, grasp: RotationGrasp, held: bool
) -> None:
    cfg = ctx.cfg
    c = s.charts[grasp.chart_id]
    if held:
        grab = ctx.grabs_world[side]
        if grab is not None:
            az = _chart_azimuth(s, grasp.chart_id, grab)
            delta = wrap_angle(az - grasp.prev_azimuth)
            dt_s = (ctx.t - grasp.prev_t_ms) / 1000.0
            omega = delta / dt_s if dt_s > 0.0 else 0.0
            new_yaw = c.yaw_rad + delta
            last_emit = _apply_yaw(s, ctx, grasp.chart_id, new_yaw, grasp.last_emit_yaw)
            s.grasps[side] = RotationGrasp(
                chart_id=grasp.chart_id,
                prev_azimuth=az,
                prev_t_ms=ctx.t,
                omega_rad_s=omega,
                last_emit_yaw=last_emit,
            )
            return
        held = False
    # release: flick spins, slow release just settles
    s.grasps[side] = None
    c = s.charts[grasp.chart_id]
    if abs(grasp.omega_rad_s) >= math.radians(cfg.flick_min_deg_s):
        s.spin = SpinState(grasp.chart_id, grasp.omega_rad_s, grasp.last_emit_yaw)
    elif c.yaw_rad != grasp.last_emit_yaw:
        _emit(s, ctx, EventKind.ROTATION_CHANGED, grasp.chart_id, {"yaw_rad": c.yaw_rad})


def _continue_axis(
    s: EngineState, ctx: _Ctx, side: Side, grasp: AxisGrasp, held: bool
) -> None:
    cfg = ctx.cfg
    c = s.charts[grasp.chart_id]
    x, y = s.layout[grasp.chart_id]
    if held:
        grab = ctx.grabs_world[side]
        if grab is not None:
            detached = dist_xy(grab, (x, y, 0.0)) > cfg.filter_snap * c.radius_m
            s.grasps[side] = replace(grasp, pos=grab, detached=detached)
            return
        held = False
    # release: sort inside the snap boundary, filter beyond it
    s.grasps[side] = None
    radial = dist_xy(grasp.pos, (x, y, 0.0))
    if radial <= cfg.filter_snap * c.radius_m:
        local_angle = (_chart_azimuth(s, grasp.chart_id, grasp.pos) - c.yaw_rad) % (
            2.0 * math.pi
        )
        updated = chart_ops.apply_arrangement(c, grasp.variable, local_angle)
        s.charts[grasp.chart_id] = updated
        _emit(
            s,
            ctx,
            EventKind.VARIABLE_SORTED,
            grasp.chart_id,
            {"variable": grasp.variable, "arrangement": list(updated.arrangement)},
        )
    else:
        try:
            updated = chart_ops.filter_variable(c, grasp.variable)
        except chart_ops.LastVariable:
            log.debug("filter of last variable ignored on %s", grasp.chart_id)
            return
        s.charts[grasp.chart_id] = updated
        _emit(
            s,
            ctx,
            EventKind.VARIABLE_FILTERED,
            grasp.chart_id,
            {"variable": grasp.variable, "arrangement": list(updated.arrangement)},
        )


# -- time range gesture ----------------------------------------------------


def _continue_range(s: EngineState, ctx: _Ctx) -> None:
    g = s.range_gesture
    if g is None:
        return
    both_pinch = all(
        s.postures[side].posture is Posture.PINCH for side in (Side.LEFT, Side.RIGHT)
    )
    if both_pinch:
        pl = ctx.pinches_world[Side.LEFT]
        pr = ctx.pinches_world[Side.RIGHT]
        c = s.charts[g.chart_id]
        a = chart_ops.height_to_event(c, pl[2])
        b = chart_ops.height_to_event(c, pr[2])
        live = (min(a, b), max(a, b))
        if live != g.last_range:
            _emit(
                s,
                ctx,
                EventKind.TIME_RANGE_PREVIEW,
                g.chart_id,
                {"a": live[0], "b": live[1]},
            )
        s.range_gesture = RangeGesture(
            chart_id=g.chart_id, left_point=pl, right_point=pr, last_range=live
        )
        return
    # either pinch released: apply unless degenerate
    s.range_gesture = None
    if g.last_range is None or g.last_range[0] == g.last_range[1]:
        return
    c = s.charts[g.chart_id]
    try:
        updated = chart_ops.select_time_range(c, g.last_range[0], g.last_range[1])
    except chart_ops.ChartError as exc:
        log.debug("range apply skipped on %s: %s", g.chart_id, exc)
        return
    s.charts[g.chart_id] = updated
    _emit(
        s,
        ctx,
        EventKind.TIME_RANGE_APPLIED,
        g.chart_id,
        {"a": g.last_range[0], "b": g.last_range[1]},
    )


# -- zoom gesture ----------------------------------------------------------


def _zoom_geometry_ok(s: EngineState, ctx: _Ctx) -> bool:
    rel = ctx.relation
    if rel is None or not (rel.palms_facing and rel.vertical_stacked):
        return False
    if any(s.grasps[side] is not None for side in (Side.LEFT, Side.RIGHT)):
        return False
    if s.range_gesture is not None:
        return False
    if any(
        s.postures[side].posture in (Posture.PINCH, Posture.GRAB)
        for side in (Side.LEFT, Side.RIGHT)
    ):
        return False
    return True


def _continue_zoom(s: EngineState, ctx: _Ctx) -> None:
    g = s.zoom_gesture
    if g is None:
        return
    if not _zoom_geometry_ok(s, ctx):
        s.zoom_gesture = None
        return
    if g.fired:
        return
    cfg = ctx.cfg
    sep = ctx.relation.separation_m
    c = s.charts[g.chart_id]
    if sep - g.initial_separation >= cfg.zoom_stretch_m and c.selected_range is not None:
        try:
            updated = chart_ops.zoom_in(c)
        except chart_ops.ChartError as exc:
            log.debug("zoom in skipped on %s: %s", g.chart_id, exc)
            return
        s.charts[g.chart_id] = updated
        s.zoom_gesture = replace(g, fired=True)
        _emit(
            s,
            ctx,
            EventKind.ZOOMED_IN,
            g.chart_id,
            {
                "window": [updated.visible_window[0], updated.visible_window[1]],
                "depth": len(updated.zoom_stack),
            },
        )
    elif g.initial_separation - sep >= cfg.zoom_clap_m and c.zoom_stack:
        updated = chart_ops.zoom_out(c)
        s.charts[g.chart_id] = updated
        s.zoom_gesture = replace(g, fired=True)
        _emit(
            s,
            ctx,
            EventKind.ZOOMED_OUT,
            g.chart_id,
            {
                "window": [updated.visible_window[0], updated.visible_window[1]],
                "depth": len(updated.zoom_stack),
            },
        )


# -- initiations -----------------------------------------------------------


def _nearest_active_chart(s: EngineState, ctx: _Ctx, point: Vec3) -> str | None:
    best, best_d = None, ctx.cfg.act_radius_m
    for cid, (x, y) in s.layout.items():
        if s.charts[cid].mode is Mode.INACTIVE:
            continue
        d = dist_xy(point, (x, y, 0.0))
        if d <= best_d:
            best, best_d = cid, d
    return best


def _initiate_reset(s: EngineState, ctx: _Ctx) -> None:
    from .hands import hold_timer

    cfg = ctx.cfg
    both_up = all(
        hold_timer(s.postures[side], Posture.INDEX_UP, cfg.reset_arm_ms, ctx.t)
        for side in (Side.LEFT, Side.RIGHT)
    )
    any_up = any(
        s.postures[side].posture is Posture.INDEX_UP for side in (Side.LEFT, Side.RIGHT)
    )
    if not any_up:
        s.reset_block = False
    if not all(
        s.postures[side].posture is Posture.INDEX_UP for side in (Side.LEFT, Side.RIGHT)
    ):
        s.reset_armed = False
        return
    if both_up and not s.reset_block:
        s.reset_armed = True
    if not s.reset_armed or ctx.initiated:
        return
    rel = ctx.relation
    if rel is None or not rel.indices_crossed:
        return
    pl = ctx.palms_world[Side.LEFT]
    pr = ctx.palms_world[Side.RIGHT]
    mid = ((pl[0] + pr[0]) / 2.0, (pl[1] + pr[1]) / 2.0, (pl[2] + pr[2]) / 2.0)
    target = _nearest_active_chart(s, ctx, mid)
    if target is None:
        return
    s.charts[target] = chart_ops.reset_chart(s.charts[target])
    s.reset_armed = False
    s.reset_block = True
    _emit(s, ctx, EventKind.CHART_RESET, target, {})


def _initiate_zoom(s: EngineState, ctx: _Ctx) -> None:
    if ctx.initiated or s.zoom_gesture is not None:
        return
    if not _zoom_geometry_ok(s, ctx):
        return
    pl = ctx.palms_world[Side.LEFT]
    pr = ctx.palms_world[Side.RIGHT]
    mid = ((pl[0] + pr[0]) / 2.0, (pl[1] + pr[1]) / 2.0, (pl[2] + pr[2]) / 2.0)
    target = _nearest_active_chart(s, ctx, mid)
    if target is None:
        return
    s.zoom_gesture = ZoomGesture(
        chart_id=target, initial_separation=ctx.relation.separation_m, fired=False
    )
    ctx.initiated = True


def _point_in_column(s: EngineState, ctx: _Ctx, chart_id: str, p: Vec3) -> bool:
    cfg = ctx.cfg
    c = s.charts[chart_id]
    x, y = s.layout[chart_id]
    if dist_xy(p, (x, y, 0.0)) > c.radius_m + cfg.grasp_capture_m:
        return False
    return -cfg.grasp_capture_m <= p[2] <= c.length_m + cfg.grasp_capture_m


def _initiate_range(s: EngineState, ctx: _Ctx) -> None:
    if ctx.initiated or s.range_gesture is not None:
        return
    if not all(
        s.postures[side].posture is Posture.PINCH for side in (Side.LEFT, Side.RIGHT)
    ):
        return
    pl = ctx.pinches_world[Side.LEFT]
    pr = ctx.pinches_world[Side.RIGHT]
    if pl is None or pr is None:
        return
    candidates = []
    for cid in s.layout:
        if s.charts[cid].mode is Mode.INACTIVE:
            continue
        if _point_in_column(s, ctx, cid, pl) and _point_in_column(s, ctx, cid, pr):
            x, y = s.layout[cid]
            mid = ((pl[0] + pr[0]) / 2.0, (pl[1] + pr[1]) / 2.0, 0.0)
            candidates.append((dist_xy(mid, (x, y, 0.0)), cid))
    if not candidates:
        return
    _, target = min(candidates)
    s.range_gesture = RangeGesture(
        chart_id=target, left_point=pl, right_point=pr, last_range=None
    )
    ctx.initiated = True


def _slice_plane_distance(
    s: EngineState, ctx: _Ctx, chart_id: str, grab: Vec3
) -> float | None:
    cfg = ctx.cfg
    c = s.charts[chart_id]
    x, y = s.layout[chart_id]
    if dist_xy(grab, (x, y, 0.0)) > c.radius_m + cfg.grasp_capture_m:
        return None
    dz = abs(grab[2] - chart_ops.event_to_height(c, c.slice_index))
    return dz if dz <= cfg.grasp_capture_m else None


def _initiate_grasp(s: EngineState, ctx: _Ctx) -> None:
    if ctx.initiated:
        return
    if any(g is not None for g in s.grasps.values()):
        return  # one widget grasp engine-wide at a time
    cfg = ctx.cfg
    for side in (Side.LEFT, Side.RIGHT):
        if s.postures[side].posture is not Posture.GRAB:
            continue
        grab = ctx.grabs_world[side]
        if grab is None:
            continue
        # candidates: (distance, priority, target); lower wins
        candidates: list[tuple[float, int, Grasp]] = []
        for cid in s.layout:
            c = s.charts[cid]
            if c.mode is Mode.INACTIVE:
                continue
            d = _slice_plane_distance(s, ctx, cid, grab)
            if d is not None:
                start_h = chart_ops.event_to_height(c, c.slice_index)
                candidates.append(
                    (
                        d,
                        0,
                        SliceGrasp(
                            chart_id=cid,
                            start_grab=grab,
                            start_height=start_h,
                            history=(
                                (ctx.t, ctx.palms_world[side], grab, c.slice_index),
                            ),
                        ),
                    )
                )
            if c.mode is Mode.ACTIVE_ROTATE:
                hd = dist(grab, handle_center(s, cfg, cid))
                if hd <= cfg.grasp_capture_m:
                    az = _chart_azimuth(s, cid, grab)
                    candidates.append(
                        (
                            hd,
                            1,
                            RotationGrasp(
                                chart_id=cid,
                                prev_azimuth=az,
                                prev_t_ms=ctx.t,
                                omega_rad_s=0.0,
                                last_emit_yaw=c.yaw_rad,
                            ),
                        )
                    )
            if c.mode is Mode.RECONFIGURE_FILTER:
                for slot, var in enumerate(c.arrangement):
                    sd = dist(grab, axis_sphere_center(s, cfg, cid, slot))
                    if sd <= cfg.grasp_capture_m:
                        candidates.append(
                            (
                                sd,
                                2,
                                AxisGrasp(
                                    chart_id=cid, variable=var, pos=grab, detached=False
                                ),
                            )
                        )
        if not candidates:
            continue
        candidates.sort(key=lambda c: (c[0], c[1]))
        s.grasps[side] = candidates[0][2]
        ctx.initiated = True
        return


def _handle_mode_toggle(s: EngineState, ctx: _Ctx) -> None:
    cfg = ctx.cfg
    inside: set[tuple[str, str]] = set()
    for side in (Side.LEFT, Side.RIGHT):
        frame = ctx.frames[side]
        if frame is None:
            continue
        points = [ctx.palms_world[side]] + [
            s.viewpoint.to_world(f.tip) for f in frame.fingers
        ]
        for cid in s.layout:
            center = toggle_center(s, cfg, cid)
            # cheap horizontal reject before the point loop
            if dist_xy(points[0], center) > 0.5:
                continue
            if any(dist(p, center) <= cfg.widget_r_m for p in points):
                inside.add((side.value, cid))
    entered = [pair for pair in sorted(inside) if pair not in s.toggle_inside]
    s.toggle_inside = frozenset(inside)
    if not entered or ctx.initiated:
        return
    _, cid = entered[0]
    old = s.charts[cid].mode
    updated = chart_ops.cycle_mode(s.charts[cid])
    s.charts[cid] = updated
    if old is Mode.INACTIVE:
        tag = TaskTag.ELABORATE
    elif updated.mode is Mode.INACTIVE:
        tag = TaskTag.ABSTRACT
    else:
        tag = TaskTag.CHANGE_CONFIGURATION
    _emit(
        s,
        ctx,
        EventKind.MODE_CHANGED,
        cid,
        {"old": old.value, "new": updated.mode.value},
        task_tag=tag,
    )
