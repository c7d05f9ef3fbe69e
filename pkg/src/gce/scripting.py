"""Synthesized gesture traces.

``GestureScripter`` builds play-area-local hand-frame traces for every
feature the engine understands, stepping a shadow copy of the sensor and
engine as it goes so each scripted action can aim at world-space targets
(which move with travel) and assert that its intended event actually
fired.  The recorded trace then replays through the real pipeline to the
same event log, which is what makes these scripts usable as replay
oracles.

``scenario_task_series`` chains the scripted gestures into a complete
walkthrough session exercising all eleven features, the basis of the
golden replay artifacts.

Frame synthesis keeps hands absent between gestures (hands may pop in and
out; the engine's debounce absorbs it) and always aims the head at the
active manipulation point so synthesized hands stay inside the simulated
sensor's depth and FOV envelope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import engine as eng
from .chart import Dataset, Mode, event_to_height, event_gap_m
from .engine import (
    EngineConfig,
    EngineState,
    EventKind,
    InputSample,
    InteractionEvent,
    initial_state,
)
from .geometry import Vec3, dist, dist_xy, look_at_quat, normalize, rot_z, sub, wrap_angle
from .hands import Finger, HandFrame, Side
from .rng import SplitMix64
from .sensor import HeadPose, TrackerState, observe
from .session import ReplayConfig, TraceRecord


class ScriptError(Exception):
    pass


_PENTA = tuple(
    (math.cos(2.0 * math.pi * i / 5.0), math.sin(2.0 * math.pi * i / 5.0))
    for i in range(5)
)


def _pentagon(center: Vec3, r: float) -> tuple[Vec3, ...]:
    return tuple((center[0] + r * c, center[1] + r * s, center[2]) for c, s in _PENTA)


def _frame(
    side: Side,
    palm: Vec3,
    normal: Vec3,
    direction: Vec3,
    tips: tuple[Vec3, ...],
    curls: tuple[float, float, float, float, float],
    t_ms: int,
) -> HandFrame:
    fingers = tuple(Finger(tip=tips[i], curl=curls[i]) for i in range(5))
    return HandFrame(
        side=side,
        palm_pos=palm,
        palm_normal=normalize(normal),
        palm_dir=normalize(direction),
        fingers=fingers,
        t_ms=t_ms,
    )


@dataclass
class ScriptStats:
    """What a scenario exercised, for post-hoc checks."""

    travels: int = 0
    filtered_variables: list = field(default_factory=list)


class GestureScripter:
    """Synthesizes hand traces while shadow-stepping the real pipeline."""

    def __init__(
        self,
        dataset: Dataset,
        config: ReplayConfig = ReplayConfig(),
        dt_ms: int = 11,
        viewpoint: eng.Viewpoint | None = None,
    ):
        self.dataset = dataset
        self.config = config
        self.cfg: EngineConfig = config.engine
        self.dt = dt_ms
        self.state: EngineState = initial_state(dataset, config.engine)
        if viewpoint is not None:
            self.state.viewpoint = viewpoint
        self.tracker = TrackerState()
        self.rng = SplitMix64(config.sensor_seed)
        self.records: list[TraceRecord] = []
        self.events: list[InteractionEvent] = []
        self.t = 0
        self.head_local: Vec3 = (0.0, 0.0, 1.6)
        self.default_look: Vec3 | None = None
        self.stats = ScriptStats()
        self.last_observed = None

    # -- frame plumbing ----------------------------------------------------

    def world_to_local(self, p: Vec3) -> Vec3:
        vp = self.state.viewpoint
        return rot_z(sub(p, vp.pos), -vp.yaw)

    def head_world(self) -> Vec3:
        return self.state.viewpoint.to_world(self.head_local)

    def _head_pose(self, look_at_world: Vec3 | None) -> HeadPose:
        target = look_at_world if look_at_world is not None else self.default_look
        if target is None:
            quat = (1.0, 0.0, 0.0, 0.0)
        else:
            quat = look_at_quat(self.head_local, self.world_to_local(target))
        return HeadPose(pos=self.head_local, quat=quat)

    def _local_fwd_flat(self, look_at_world: Vec3 | None) -> Vec3:
        target = look_at_world if look_at_world is not None else self.default_look
        if target is None:
            return (1.0, 0.0, 0.0)
        d = sub(self.world_to_local(target), self.head_local)
        h = math.hypot(d[0], d[1])
        return (d[0] / h, d[1] / h, 0.0) if h > 1e-9 else (1.0, 0.0, 0.0)

    def feed(
        self,
        left: HandFrame | None,
        right: HandFrame | None,
        look_at: Vec3 | None = None,
    ) -> list[InteractionEvent]:
        self.t += self.dt
        head = self._head_pose(look_at)
        rec = TraceRecord(t_ms=self.t, head=head, left=left, right=right)
        self.records.append(rec)
        ol, orr, self.tracker = observe(
            self.config.sensor, head, left, right, self.rng, self.tracker
        )
        self.last_observed = (ol, orr)
        sample = InputSample(t_ms=self.t, head=head, left=ol, right=orr)
        self.state, events = eng.step(self.state, sample, self.cfg)
        self.events.extend(events)
        return events

    def idle(self, ms: int, look_at: Vec3 | None = None) -> list[InteractionEvent]:
        out = []
        for _ in range(max(1, round(ms / self.dt))):
            out.extend(self.feed(None, None, look_at))
        return out

    def run_until(
        self,
        frame_fn,
        done,
        max_ms: int,
        what: str,
    ) -> list[InteractionEvent]:
        """Feed frames from ``frame_fn(elapsed_ms)`` until ``done(events)``."""
        out: list[InteractionEvent] = []
        elapsed = 0
        while elapsed <= max_ms:
            left, right, look = frame_fn(elapsed)
            out.extend(self.feed(left, right, look))
            if done(out):
                return out
            elapsed += self.dt
        raise ScriptError(f"timed out after {max_ms} ms waiting for {what}")

    @staticmethod
    def _has(events: list[InteractionEvent], kind: EventKind) -> bool:
        return any(e.kind is kind for e in events)

    def _require(self, events: list[InteractionEvent], kind: EventKind, what: str) -> None:
        if not self._has(events, kind):
            raise ScriptError(f"{what}: expected {kind.value}, got "
                              f"{[e.kind.value for e in events]}")

    # -- hand factories (world-space inputs, local-frame output) ------------

    def fist(self, side: Side, grab_world: Vec3, palm_world: Vec3 | None = None) -> HandFrame:
        g = self.world_to_local(grab_world)
        if palm_world is None:
            toward = sub(self.head_local, g)
            h = math.hypot(toward[0], toward[1])
            off = (toward[0] / h * 0.06, toward[1] / h * 0.06, 0.0) if h > 1e-9 else (0.06, 0, 0)
            palm = (g[0] + off[0], g[1] + off[1], g[2])
        else:
            palm = self.world_to_local(palm_world)
        normal = sub(g, palm)
        if dist(normal, (0, 0, 0)) < 1e-9:
            normal = (1.0, 0.0, 0.0)
        return _frame(
            side, palm, normal, normal, _pentagon(g, 0.035),
            (0.8, 0.8, 0.8, 0.8, 0.8), self.t + self.dt,
        )

    def pinch(self, side: Side, pinch_world: Vec3) -> HandFrame:
        # palm below the pinch point, normal up on both hands, so two
        # pinching hands never read as a facing-palms zoom posture
        p = self.world_to_local(pinch_world)
        palm = (p[0], p[1], p[2] - 0.06)
        rest = _pentagon(palm, 0.03)
        tips = (p, p, rest[2], rest[3], rest[4])
        return _frame(
            side, palm, (0, 0, 1), (0, 0, 1), tips,
            (0.5, 0.5, 0.5, 0.5, 0.5), self.t + self.dt,
        )

    def point(self, side: Side, palm_world: Vec3, aim_world: Vec3) -> HandFrame:
        palm = self.world_to_local(palm_world)
        aim = normalize(sub(self.world_to_local(aim_world), palm))
        tip = (palm[0] + aim[0] * 0.10, palm[1] + aim[1] * 0.10, palm[2] + aim[2] * 0.10)
        rest = _pentagon(palm, 0.02)
        tips = (rest[0], tip, rest[2], rest[3], rest[4])
        return _frame(side, palm, aim, aim, tips, (0.4, 0.0, 0.8, 0.8, 0.8), self.t + self.dt)

    def stop_hand(self, side: Side, palm_world: Vec3, look_at: Vec3 | None = None) -> HandFrame:
        palm = self.world_to_local(palm_world)
        fwd = self._local_fwd_flat(look_at)
        tips = _pentagon((palm[0], palm[1], palm[2] + 0.06), 0.03)
        return _frame(side, palm, fwd, (0, 0, 1), tips, (0.0,) * 5, self.t + self.dt)

    def open_hand(self, side: Side, palm_world: Vec3) -> HandFrame:
        palm = self.world_to_local(palm_world)
        tips = _pentagon((palm[0], palm[1], palm[2] + 0.06), 0.05)
        return _frame(side, palm, (0, 0, -1), (0, 0, 1), tips, (0.0,) * 5, self.t + self.dt)

    def touch_hand(self, side: Side, at_world: Vec3) -> HandFrame:
        p = self.world_to_local(at_world)
        palm = (p[0], p[1], p[2] - 0.02)
        return _frame(
            side, palm, (0, 0, 1), (0, 0, 1), _pentagon(p, 0.02),
            (0.5, 0.5, 0.5, 0.5, 0.5), self.t + self.dt,
        )

    def index_up(
        self, side: Side, palm_world: Vec3, tilt: tuple[float, float] = (0.0, 0.0)
    ) -> HandFrame:
        palm = self.world_to_local(palm_world)
        d = normalize((tilt[0], tilt[1], 1.0))
        tip = (palm[0] + d[0] * 0.12, palm[1] + d[1] * 0.12, palm[2] + d[2] * 0.12)
        rest = _pentagon(palm, 0.02)
        tips = (rest[0], tip, rest[2], rest[3], rest[4])
        return _frame(side, palm, (1, 0, 0), d, tips, (0.4, 0.0, 0.8, 0.8, 0.8), self.t + self.dt)

    # -- placement helpers ---------------------------------------------------

    def _axis(self, chart_id: str) -> Vec3:
        x, y = self.state.layout[chart_id]
        return (x, y, 0.0)

    def _bearing_from_head(self, chart_id: str) -> Vec3:
        a = self._axis(chart_id)
        h = self.head_world()
        d = (h[0] - a[0], h[1] - a[1], 0.0)
        n = math.hypot(d[0], d[1])
        return (d[0] / n, d[1] / n, 0.0) if n > 1e-9 else (1.0, 0.0, 0.0)

    def approach(self, world_xy: tuple[float, float], standback: float, head_z: float) -> None:
        """Walk the (local) head to a standback distance from a floor point,
        keeping the current approach bearing."""
        h = self.head_world()
        d = (h[0] - world_xy[0], h[1] - world_xy[1], 0.0)
        n = math.hypot(d[0], d[1])
        d = (d[0] / n, d[1] / n, 0.0) if n > 1e-9 else (1.0, 0.0, 0.0)
        target = (world_xy[0] + d[0] * standback, world_xy[1] + d[1] * standback, head_z)
        self.head_local = self.world_to_local(target)

    # -- gestures --------------------------------------------------------------

    def travel_to(self, chart_id: str) -> list[InteractionEvent]:
        cfg = self.cfg
        self.head_local = (0.0, 0.0, 1.6)  # step back to play-area center
        axis = self._axis(chart_id)
        c = self.state.charts[chart_id]
        aim = (axis[0], axis[1], c.length_m * 0.5)
        head = self.head_world()
        if dist_xy(head, axis) <= cfg.faraway_min_m:
            raise ScriptError(f"{chart_id} is too close to travel to")
        fwd = normalize(sub(aim, head))
        seen = eng.gaze_hit(self.state, head, fwd)
        if seen != chart_id:
            raise ScriptError(f"gaze to {chart_id} blocked by {seen}")

        out = self.run_until(
            lambda _e: (None, None, aim),
            lambda evs: any(
                e.kind is EventKind.TRAVEL_ARMED and e.chart_id == chart_id for e in evs
            ),
            max_ms=cfg.gaze_dwell_ms + 400,
            what=f"travel arm on {chart_id}",
        )
        # hand held along the gaze direction so the head-mounted sensor sees it
        head = self.head_world()
        fw = sub(aim, head)
        n = math.hypot(fw[0], fw[1])
        fw = (fw[0] / n, fw[1] / n, 0.0)
        right = (fw[1], -fw[0], 0.0)
        palm_world = (
            head[0] + fw[0] * 0.45 - right[0] * 0.18,
            head[1] + fw[1] * 0.45 - right[1] * 0.18,
            head[2] - 0.25,
        )
        for cid in self.state.layout:
            if dist(palm_world, eng.toggle_center(self.state, cfg, cid)) <= cfg.suppress_radius_m:
                raise ScriptError(f"pointing hand too close to toggle of {cid}")
        out += self.run_until(
            lambda _e: (None, self.point(Side.RIGHT, palm_world, aim), aim),
            lambda evs: self._has(evs, EventKind.TRAVEL_STARTED),
            max_ms=300,
            what=f"travel start to {chart_id}",
        )
        out += self.run_until(
            lambda _e: (None, None, aim),
            lambda evs: self._has(evs, EventKind.TRAVEL_COMPLETED),
            max_ms=cfg.transit_ms + 400,
            what=f"travel completion to {chart_id}",
        )
        self.default_look = aim
        self.stats.travels += 1
        return out

    def touch_toggle(self, chart_id: str) -> list[InteractionEvent]:
        cfg = self.cfg
        axis = self._axis(chart_id)
        widget = eng.toggle_center(self.state, cfg, chart_id)
        self.approach((axis[0], axis[1]), 0.5, 1.5)
        look = (axis[0], axis[1], 0.8)
        self.default_look = look
        self.idle(40, look)
        before = self.state.charts[chart_id].mode
        out = self.run_until(
            lambda _e: (None, self.touch_hand(Side.RIGHT, widget), look),
            lambda evs: self._has(evs, EventKind.MODE_CHANGED),
            max_ms=200,
            what=f"mode toggle on {chart_id}",
        )
        out += self.idle(30, look)
        after = self.state.charts[chart_id].mode
        if after is before:
            raise ScriptError(f"mode of {chart_id} did not change")
        return out

    def _grab_spot(self, chart_id: str, h: float) -> Vec3:
        axis = self._axis(chart_id)
        b = self._bearing_from_head(chart_id)
        r = self.state.charts[chart_id].radius_m * 0.9
        return (axis[0] + b[0] * r, axis[1] + b[1] * r, h)

    def _float_head(self, chart_id: str, focus_z: float, standback: float = 0.5) -> None:
        axis = self._axis(chart_id)
        self.approach(
            (axis[0], axis[1]), standback, max(0.7, min(1.6, focus_z + 0.5))
        )

    def grab_slice_to(
        self,
        chart_id: str,
        target_index: int,
        release: str = "clean",
        noise_seed: int = 0,
    ) -> list[InteractionEvent]:
        c = self.state.charts[chart_id]
        if c.mode is Mode.INACTIVE:
            raise ScriptError(f"{chart_id} is inactive")
        gap = event_gap_m(c)
        h0 = event_to_height(c, c.slice_index)
        h1 = event_to_height(c, target_index)
        self._float_head(chart_id, h0)
        out = []
        # engage
        for _ in range(4):
            spot = self._grab_spot(chart_id, h0)
            out += self.feed(None, self.fist(Side.RIGHT, spot), spot)
        if not isinstance(self.state.grasps[Side.RIGHT], eng.SliceGrasp):
            raise ScriptError(f"time slice of {chart_id} not grasped")
        # drag
        n = max(12, abs(target_index - c.slice_index) // 2)
        for i in range(1, n + 1):
            h = h0 + (h1 - h0) * (i / n)
            self._float_head(chart_id, h)
            spot = self._grab_spot(chart_id, h)
            out += self.feed(None, self.fist(Side.RIGHT, spot), spot)
        # settle
        spot = self._grab_spot(chart_id, h1)
        hold_frames = max(1, round(160 / self.dt))
        for _ in range(hold_frames):
            out += self.feed(None, self.fist(Side.RIGHT, spot), spot)
        palm_frozen = (spot[0] + self._bearing_from_head(chart_id)[0] * 0.06,
                       spot[1] + self._bearing_from_head(chart_id)[1] * 0.06,
                       spot[2])
        if release == "noisy":
            rng = SplitMix64(noise_seed)
            direction = 1.0 if rng.uniform() < 0.5 else -1.0
            # stay within (1, 1.5) gaps so the un-guarded snap lands on the
            # adjacent event, never two over
            gaps = 1.2 + 0.25 * rng.uniform()
            twitch_frames = 3 + int(rng.uniform() * 3)
            for i in range(1, twitch_frames + 1):
                dz = direction * gaps * gap * (i / twitch_frames)
                drift = 0.004 * rng.uniform()
                tw = (spot[0], spot[1] + drift, spot[2] + dz)
                out += self.feed(
                    None, self.fist(Side.RIGHT, tw, palm_world=palm_frozen), spot
                )
        out += self.feed(None, self.open_hand(Side.RIGHT, palm_frozen), spot)
        out += self.idle(30, spot)
        if release == "clean" and self.state.charts[chart_id].slice_index != target_index:
            raise ScriptError(
                f"slice ended at {self.state.charts[chart_id].slice_index}, "
                f"wanted {target_index}"
            )
        return out

    def rotate(
        self,
        chart_id: str,
        degrees: float = 360.0,
        duration_ms: int = 3000,
        flick_deg_s: float | None = None,
    ) -> list[InteractionEvent]:
        cfg = self.cfg
        c = self.state.charts[chart_id]
        if c.mode is not Mode.ACTIVE_ROTATE:
            raise ScriptError(f"{chart_id} not in activate/rotate mode")
        axis = self._axis(chart_id)
        r_h = c.radius_m + cfg.handle_offset_m
        z_h = c.length_m * cfg.handle_height_frac
        az0 = c.yaw_rad

        def handle_at(az: float) -> Vec3:
            return (axis[0] + r_h * math.cos(az), axis[1] + r_h * math.sin(az), z_h)

        def head_for(az: float) -> None:
            hx = axis[0] + (r_h + 0.45) * math.cos(az)
            hy = axis[1] + (r_h + 0.45) * math.sin(az)
            self.head_local = self.world_to_local((hx, hy, 1.0))

        out = []
        head_for(az0)
        for _ in range(4):
            out += self.feed(None, self.fist(Side.RIGHT, handle_at(az0)), handle_at(az0))
        if not isinstance(self.state.grasps[Side.RIGHT], eng.RotationGrasp):
            raise ScriptError(f"rotation handle of {chart_id} not grasped")

        total = math.radians(degrees)
        if flick_deg_s is not None:
            # constant angular speed, released mid-motion
            step_rad = math.radians(flick_deg_s) * self.dt / 1000.0
            n = max(8, int(total / step_rad)) if step_rad > 0 else 8
            for i in range(1, n + 1):
                az = az0 + step_rad * i * (1 if degrees >= 0 else -1)
                head_for(az)
                out += self.feed(None, self.fist(Side.RIGHT, handle_at(az)), handle_at(az))
            last = az0 + step_rad * n * (1 if degrees >= 0 else -1)
            out += self.feed(None, self.open_hand(Side.RIGHT, handle_at(last)), handle_at(last))
            # wait out the residual spin
            out += self.run_until(
                lambda _e: (None, None, self.default_look),
                lambda _evs: self.state.spin is None,
                max_ms=8000,
                what="spin decay",
            )
            return out

        n = max(12, round(duration_ms / self.dt))
        for i in range(1, n + 1):
            az = az0 + total * (i / n)
            head_for(az)
            out += self.feed(None, self.fist(Side.RIGHT, handle_at(az)), handle_at(az))
        # decelerate: hold still so release speed is ~zero
        az = az0 + total
        for _ in range(max(1, round(250 / self.dt))):
            out += self.feed(None, self.fist(Side.RIGHT, handle_at(az)), handle_at(az))
        out += self.feed(None, self.open_hand(Side.RIGHT, handle_at(az)), handle_at(az))
        out += self.idle(30)
        if self.state.spin is not None:
            raise ScriptError("unintended flick spin after slow release")
        return out

    def select_range(self, chart_id: str, a: int, b: int) -> list[InteractionEvent]:
        c = self.state.charts[chart_id]
        if c.mode is Mode.INACTIVE:
            raise ScriptError(f"{chart_id} is inactive")
        if a == b:
            raise ScriptError("degenerate scripted range")
        ha, hb = event_to_height(c, a), event_to_height(c, b)
        axis = self._axis(chart_id)
        mid_z = (ha + hb) / 2.0
        self.approach((axis[0], axis[1]), 0.72, max(0.75, min(1.55, mid_z + 0.2)))
        b_dir = self._bearing_from_head(chart_id)
        tang = (-b_dir[1], b_dir[0], 0.0)
        r = c.radius_m * 0.9

        def spots() -> tuple[Vec3, Vec3]:
            lo = (axis[0] + b_dir[0] * r + tang[0] * 0.06,
                  axis[1] + b_dir[1] * r + tang[1] * 0.06, ha)
            hi = (axis[0] + b_dir[0] * r - tang[0] * 0.06,
                  axis[1] + b_dir[1] * r - tang[1] * 0.06, hb)
            return lo, hi

        look = (axis[0], axis[1], mid_z)
        self.default_look = look
        out = []
        pa, pb = spots()
        for _ in range(10):
            out += self.feed(self.pinch(Side.LEFT, pa), self.pinch(Side.RIGHT, pb), look)
        if self.state.range_gesture is None:
            raise ScriptError(f"range gesture on {chart_id} not captured")
        out += self.idle(30, look)
        self._require(out, EventKind.TIME_RANGE_APPLIED, f"range on {chart_id}")
        got = self.state.charts[chart_id].selected_range
        want = (min(a, b), max(a, b))
        if got != want:
            raise ScriptError(f"selected range {got}, wanted {want}")
        return out

    def _zoom_frames(self, chart_id: str, sep: float, look: Vec3):
        head = self.head_world()
        fwd = self._local_fwd_flat(look)
        fwd_w = self.state.viewpoint.dir_to_world(fwd)
        mid = (head[0] + fwd_w[0] * 0.45, head[1] + fwd_w[1] * 0.45, head[2] - 0.25)
        upper = (mid[0], mid[1], mid[2] + sep / 2.0)
        lower = (mid[0], mid[1], mid[2] - sep / 2.0)
        lu = self.world_to_local(upper)
        ll = self.world_to_local(lower)
        left = _frame(
            Side.LEFT, lu, (0, 0, -1), fwd, _pentagon((lu[0], lu[1], lu[2] - 0.04), 0.04),
            (0.0,) * 5, self.t + self.dt,
        )
        right = _frame(
            Side.RIGHT, ll, (0, 0, 1), fwd, _pentagon((ll[0], ll[1], ll[2] + 0.04), 0.04),
            (0.0,) * 5, self.t + self.dt,
        )
        return left, right

    def zoom(self, chart_id: str, direction: str) -> list[InteractionEvent]:
        c = self.state.charts[chart_id]
        if c.mode is Mode.INACTIVE:
            raise ScriptError(f"{chart_id} is inactive")
        axis = self._axis(chart_id)
        self.approach((axis[0], axis[1]), 0.8, 1.5)
        look = (axis[0], axis[1], 0.6)
        self.default_look = look
        if direction == "in":
            s0, s1, kind = 0.22, 0.50, EventKind.ZOOMED_IN
        else:
            s0, s1, kind = 0.45, 0.12, EventKind.ZOOMED_OUT
        out = []
        for _ in range(4):
            l, r = self._zoom_frames(chart_id, s0, look)
            out += self.feed(l, r, look)
        if self.state.zoom_gesture is None:
            raise ScriptError(f"zoom gesture near {chart_id} not captured")
        n = 30
        for i in range(1, n + 1):
            sep = s0 + (s1 - s0) * (i / n)
            l, r = self._zoom_frames(chart_id, sep, look)
            out += self.feed(l, r, look)
        out += self.idle(40, look)
        self._require(out, kind, f"zoom {direction} on {chart_id}")
        return out

    def reset(self, chart_id: str) -> list[InteractionEvent]:
        c = self.state.charts[chart_id]
        if c.mode is Mode.INACTIVE:
            raise ScriptError(f"{chart_id} is inactive")
        axis = self._axis(chart_id)
        self.approach((axis[0], axis[1]), 0.8, 1.5)
        look = (axis[0], axis[1], 0.6)
        self.default_look = look
        head = self.head_world()
        fwd = self.state.viewpoint.dir_to_world(self._local_fwd_flat(look))
        tang = (-fwd[1], fwd[0], 0.0)
        base = (head[0] + fwd[0] * 0.45, head[1] + fwd[1] * 0.45, head[2] - 0.3)

        def palms(off: float) -> tuple[Vec3, Vec3]:
            return (
                (base[0] + tang[0] * off, base[1] + tang[1] * off, base[2]),
                (base[0] - tang[0] * off, base[1] - tang[1] * off, base[2]),
            )

        out = []
        pl, pr = palms(0.08)
        for _ in range(max(1, round(320 / self.dt))):
            out += self.feed(
                self.index_up(Side.LEFT, pl), self.index_up(Side.RIGHT, pr), look
            )
        if not self.state.reset_armed:
            raise ScriptError("reset gesture not armed")
        pl, pr = palms(0.05)
        # indices tilt toward each other along the separation direction
        tl = rot_z(tang, -self.state.viewpoint.yaw)
        out += self.run_until(
            lambda _e: (
                self.index_up(Side.LEFT, pl, tilt=(-tl[0] * 0.45, -tl[1] * 0.45)),
                self.index_up(Side.RIGHT, pr, tilt=(tl[0] * 0.45, tl[1] * 0.45)),
                look,
            ),
            lambda evs: self._has(evs, EventKind.CHART_RESET),
            max_ms=250,
            what=f"reset of {chart_id}",
        )
        out += self.idle(40, look)
        return out

    def toggle_pause(self) -> list[InteractionEvent]:
        cfg = self.cfg
        head = self.head_world()
        fwd = self.state.viewpoint.dir_to_world(self._local_fwd_flat(self.default_look))
        tang = (-fwd[1], fwd[0], 0.0)
        base = (head[0] + fwd[0] * 0.45, head[1] + fwd[1] * 0.45, head[2] - 0.25)
        pl = (base[0] + tang[0] * 0.12, base[1] + tang[1] * 0.12, base[2])
        pr = (base[0] - tang[0] * 0.12, base[1] - tang[1] * 0.12, base[2])
        look = self.default_look
        was_paused = self.state.paused
        out = self.run_until(
            lambda _e: (
                self.stop_hand(Side.LEFT, pl, look),
                self.stop_hand(Side.RIGHT, pr, look),
                look,
            ),
            lambda evs: self._has(
                evs, EventKind.RESUMED if was_paused else EventKind.PAUSED
            ),
            max_ms=cfg.pause_hold_ms + 500,
            what="pause toggle",
        )
        out += self.idle(40, look)
        return out

    def attempt_grab(self, chart_id: str, ms: int = 200) -> list[InteractionEvent]:
        """Try a time-slice grab (e.g. while paused); returns whatever fired."""
        c = self.state.charts[chart_id]
        h = event_to_height(c, c.slice_index)
        self._float_head(chart_id, h)
        out = []
        for _ in range(max(1, round(ms / self.dt))):
            spot = self._grab_spot(chart_id, h)
            out += self.feed(None, self.fist(Side.RIGHT, spot), spot)
        out += self.feed(None, None)
        return out

    def drag_axis_sphere(
        self, chart_id: str, variable: int, target_slot: int | None = None,
        filter_out: bool = False,
    ) -> list[InteractionEvent]:
        cfg = self.cfg
        c = self.state.charts[chart_id]
        if c.mode is not Mode.RECONFIGURE_FILTER:
            raise ScriptError(f"{chart_id} not in reconfigure/filter mode")
        if variable not in c.arrangement:
            raise ScriptError(f"variable {variable} not active on {chart_id}")
        axis = self._axis(chart_id)
        slot = c.arrangement.index(variable)
        az0 = c.yaw_rad + c.slot_angle(slot)

        def sphere_at(az: float, radial: float) -> Vec3:
            return (
                axis[0] + radial * math.cos(az),
                axis[1] + radial * math.sin(az),
                c.length_m,
            )

        def head_for(az: float, radial: float) -> None:
            hx = axis[0] + (radial + 0.45) * math.cos(az)
            hy = axis[1] + (radial + 0.45) * math.sin(az)
            self.head_local = self.world_to_local((hx, hy, min(1.6, c.length_m + 0.5)))

        out = []
        head_for(az0, c.radius_m)
        spot = sphere_at(az0, c.radius_m)
        for _ in range(4):
            out += self.feed(None, self.fist(Side.RIGHT, spot), spot)
        if not isinstance(self.state.grasps[Side.RIGHT], eng.AxisGrasp):
            raise ScriptError(f"axis sphere {variable} of {chart_id} not grasped")

        if filter_out:
            n = 14
            r1 = cfg.filter_snap * c.radius_m + 0.1 * c.radius_m + 0.05
            for i in range(1, n + 1):
                r = c.radius_m + (r1 - c.radius_m) * (i / n)
                head_for(az0, r)
                spot = sphere_at(az0, r)
                out += self.feed(None, self.fist(Side.RIGHT, spot), spot)
            out += self.feed(None, self.open_hand(Side.RIGHT, spot), spot)
            out += self.idle(30)
            self._require(out, EventKind.VARIABLE_FILTERED, f"filter on {chart_id}")
            self.stats.filtered_variables.append(variable)
            return out

        az1 = c.yaw_rad + c.slot_angle(target_slot)
        delta = wrap_angle(az1 - az0)
        n = 20
        for i in range(1, n + 1):
            az = az0 + delta * (i / n)
            head_for(az, c.radius_m)
            spot = sphere_at(az, c.radius_m)
            out += self.feed(None, self.fist(Side.RIGHT, spot), spot)
        spot = sphere_at(az0 + delta, c.radius_m)
        for _ in range(max(1, round(120 / self.dt))):
            out += self.feed(None, self.fist(Side.RIGHT, spot), spot)
        out += self.feed(None, self.open_hand(Side.RIGHT, spot), spot)
        out += self.idle(30)
        self._require(out, EventKind.VARIABLE_SORTED, f"sort on {chart_id}")
        return out


# -- route planning and the full walkthrough ---------------------------------


def pick_travel_targets(
    dataset: Dataset,
    config: ReplayConfig = ReplayConfig(),
    day: int = 56,
    low_threshold: float = 20.0,
) -> tuple[str, str, float]:
    """Choose two chart entities (a, b) such that the walkthrough route
    start -> a -> b -> a has clear, faraway gaze lines, and entity ``a``
    has at least one variable below a threshold at the filter-task day.

    The preferred threshold is tried first; if no entity in the dataset
    dips under it at that day, progressively higher cutoffs are tried so
    the filter task stays satisfiable.  Returns (a, b, threshold).
    """

    def clear_from(scripter: GestureScripter, cid: str) -> bool:
        axis = scripter._axis(cid)
        c = scripter.state.charts[cid]
        head = scripter.head_world()
        if dist_xy(head, axis) <= config.engine.faraway_min_m + 0.3:
            return False
        aim = (axis[0], axis[1], c.length_m * 0.5)
        return eng.gaze_hit(scripter.state, head, normalize(sub(aim, head))) == cid

    thresholds = [low_threshold] + [
        t for t in (30.0, 40.0, 50.0, 60.0, 75.0) if t > low_threshold
    ]
    for threshold in thresholds:
        lows_ok = [
            e.id
            for e in dataset.entities
            if 1 <= sum(1 for s in e.series if s[day] < threshold) < len(e.series)
        ]
        for a_id in lows_ok:
            probe = GestureScripter(dataset, config)
            if not clear_from(probe, a_id):
                continue
            try:
                probe.travel_to(a_id)
            except ScriptError:
                continue
            for b in dataset.entities:
                b_id = b.id
                if b_id == a_id or not clear_from(probe, b_id):
                    continue
                probe_b = GestureScripter(dataset, config)
                probe_b.state = probe.state
                probe_b.head_local = probe.head_local
                probe_b.t = probe.t
                try:
                    probe_b.travel_to(b_id)
                except ScriptError:
                    continue
                if clear_from(probe_b, a_id):
                    return a_id, b_id, threshold
    raise ScriptError("no viable travel route in this dataset")


@dataclass
class ScenarioResult:
    records: list[TraceRecord]
    events: list[InteractionEvent]
    final_state: EngineState
    chart_a: str
    chart_b: str
    filtered_variables: list[int]
    filter_day: int
    filter_threshold: float


def scenario_task_series(
    dataset: Dataset, config: ReplayConfig = ReplayConfig()
) -> ScenarioResult:
    """Scripted walkthrough exercising every feature: travel x3 between two
    charts, six mode toggles, time navigation to days 120/56/98, two
    ranges with two zoom-ins and two zoom-outs, two sorts, a
    value-threshold filter, two resets, and one pause/resume cycle.

    Datasets with other event counts get the same walkthrough with the
    scripted days scaled proportionally onto their time axis.
    """
    events_n = len(dataset.timestamps)

    def day(x: int) -> int:
        # identity for the reference 150-event series
        return round(x * (events_n - 1) / 149)

    day_filter = day(56)
    a_id, b_id, low = pick_travel_targets(dataset, config, day=day_filter)
    sc = GestureScripter(dataset, config)

    sc.travel_to(a_id)                                    # T01
    sc.travel_to(b_id)                                    # T02
    sc.touch_toggle(b_id)                                 # T03 -> activate/rotate
    sc.grab_slice_to(b_id, day(120))                      # T04
    sc.rotate(b_id, 360.0)                                # T05
    sc.select_range(b_id, day(30), day(85))               # T08
    sc.zoom(b_id, "in")                                   # T09
    sc.select_range(b_id, day(45), day(70))               # T10
    sc.zoom(b_id, "in")                                   # T11
    sc.zoom(b_id, "out")                                  # T12
    sc.touch_toggle(b_id)                                 # T13 -> reconfigure/filter
    sc.grab_slice_to(b_id, day(60))                       # T14
    arr = sc.state.charts[b_id].arrangement
    sc.drag_axis_sphere(b_id, arr[-1], target_slot=0)     # T15 sort
    sc.zoom(b_id, "out")                                  # T16
    sc.reset(b_id)                                        # T17
    sc.touch_toggle(b_id)                                 # T18 -> inactive

    sc.travel_to(a_id)                                    # T19
    sc.touch_toggle(a_id)                                 # T20 -> activate/rotate
    sc.touch_toggle(a_id)                                 # T21 -> reconfigure/filter
    sc.grab_slice_to(a_id, day_filter)                    # T22
    entity = dataset.entity(a_id)
    to_filter = [
        v for v in sc.state.charts[a_id].arrangement
        if entity.series[v][day_filter] < low
    ]
    if not to_filter:
        raise ScriptError(f"no variables below {low} at day {day_filter} on {a_id}")
    if len(to_filter) == len(sc.state.charts[a_id].arrangement):
        to_filter = to_filter[:-1]  # the last axis cannot be removed
    for v in to_filter:                                   # T23
        sc.drag_axis_sphere(a_id, v, filter_out=True)
    sc.reset(a_id)                                        # T24
    sc.toggle_pause()                                     # T25
    paused_events = sc.attempt_grab(a_id)                 # T26
    if paused_events:
        raise ScriptError(f"events while paused: {[e.kind.value for e in paused_events]}")
    sc.toggle_pause()                                     # T27
    sc.grab_slice_to(a_id, day(77))                       # T28
    sc.grab_slice_to(a_id, day(98))                       # T29
    arr = sc.state.charts[a_id].arrangement
    sc.drag_axis_sphere(a_id, arr[0], target_slot=len(arr) - 1)  # T30 sort
    sc.touch_toggle(a_id)                                 # T31 -> inactive

    sc.idle(60)
    for cid, c in sc.state.charts.items():
        if c.mode is not Mode.INACTIVE:
            raise ScriptError(f"chart {cid} not inactive at scenario end")
    return ScenarioResult(
        records=sc.records,
        events=sc.events,
        final_state=sc.state,
        chart_a=a_id,
        chart_b=b_id,
        filtered_variables=sc.stats.filtered_variables,
        filter_day=day_filter,
        filter_threshold=low,
    )
