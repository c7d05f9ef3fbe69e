// Gesture palette: synthesizes the canonical hand-frame stream for each
// interaction feature, sampled at the tracker cadence (11 ms).  The
// palette performs no recognition of its own; it only places hands where
// the engine's documented geometry expects them, so the server remains
// the single authority.

import {
  distXY,
  eventToHeight,
  localToWorld,
  lookAtQuat,
  normalized,
  rotZ,
  slotAngle,
  sub,
  toggleCenter,
  worldToLocal,
} from "./chartmath.js";
import type {
  ChartGeometry,
  DatasetDoc,
  EngineConstants,
  HandFrameWire,
  TraceRecordWire,
  Vec3,
} from "./protocol.js";
import type { ClientScene } from "./scene.js";

export const PALETTE_FEATURES = [
  "travel",
  "mode_toggle",
  "time_event_selection",
  "rotation",
  "time_range_selection",
  "zoom_in",
  "zoom_out",
  "variable_sort",
  "variable_filter",
  "reset",
  "pause_resume",
] as const;

export type PaletteFeature = (typeof PALETTE_FEATURES)[number];

const PENTA: [number, number][] = [0, 1, 2, 3, 4].map((i) => [
  Math.cos((2 * Math.PI * i) / 5),
  Math.sin((2 * Math.PI * i) / 5),
]);

function pentagon(center: Vec3, r: number): Vec3[] {
  return PENTA.map(([c, s]) => [center[0] + r * c, center[1] + r * s, center[2]]);
}

export class NoTargetError extends Error {}

export class GestureScripter {
  private t = 0;
  headLocal: Vec3 = [0, 0, 1.6];

  constructor(
    private dataset: DatasetDoc,
    private chart: ChartGeometry,
    private eng: EngineConstants,
    readonly dtMs = 11,
  ) {}

  lastT(): number {
    return this.t;
  }

  chartPos(chartId: string): [number, number] {
    const e = this.dataset.entities.find((x) => x.id === chartId);
    if (!e) throw new NoTargetError(`unknown chart ${chartId}`);
    return [e.x, e.y];
  }

  // -- record assembly -----------------------------------------------------

  private record(
    scene: ClientScene,
    left: HandFrameWire | null,
    right: HandFrameWire | null,
    lookAtWorld: Vec3,
  ): TraceRecordWire {
    this.t += this.dtMs;
    const localTarget = worldToLocal(scene.viewpoint, lookAtWorld);
    const quat = lookAtQuat(this.headLocal, localTarget);
    if (left) left.t_ms = this.t;
    if (right) right.t_ms = this.t;
    return {
      t_ms: this.t,
      head: { pos: [...this.headLocal], quat: [...quat] },
      left,
      right,
    };
  }

  private idle(scene: ClientScene, ms: number, look: Vec3): TraceRecordWire[] {
    const n = Math.max(1, Math.round(ms / this.dtMs));
    const out: TraceRecordWire[] = [];
    for (let i = 0; i < n; i++) out.push(this.record(scene, null, null, look));
    return out;
  }

  private localFwdFlat(scene: ClientScene, lookWorld: Vec3): Vec3 {
    const d = sub(worldToLocal(scene.viewpoint, lookWorld), this.headLocal);
    const h = Math.hypot(d[0], d[1]);
    return h > 1e-9 ? [d[0] / h, d[1] / h, 0] : [1, 0, 0];
  }

  // -- hand factories (world-space in, local-frame out) ---------------------

  private frame(
    side: "left" | "right",
    palm: Vec3,
    normal: Vec3,
    dir: Vec3,
    tips: Vec3[],
    curls: number[],
  ): HandFrameWire {
    const nn = normalized(normal);
    const nd = normalized(dir);
    return {
      side,
      palm_pos: [...palm],
      palm_normal: [...nn],
      palm_dir: [...nd],
      fingers: tips.map((tip, i) => ({ tip: [...tip], curl: curls[i] })),
      t_ms: 0,
    };
  }

  fist(scene: ClientScene, side: "left" | "right", grabWorld: Vec3, palmWorld?: Vec3): HandFrameWire {
    const g = worldToLocal(scene.viewpoint, grabWorld);
    let palm: Vec3;
    if (palmWorld) {
      palm = worldToLocal(scene.viewpoint, palmWorld);
    } else {
      const toward = sub(this.headLocal, g);
      const h = Math.hypot(toward[0], toward[1]);
      palm =
        h > 1e-9
          ? [g[0] + (toward[0] / h) * 0.06, g[1] + (toward[1] / h) * 0.06, g[2]]
          : [g[0] + 0.06, g[1], g[2]];
    }
    let normal = sub(g, palm);
    if (Math.hypot(...normal) < 1e-9) normal = [1, 0, 0];
    return this.frame(side, palm, normal, normal, pentagon(g, 0.035), [0.8, 0.8, 0.8, 0.8, 0.8]);
  }

  pinch(scene: ClientScene, side: "left" | "right", pinchWorld: Vec3): HandFrameWire {
    const p = worldToLocal(scene.viewpoint, pinchWorld);
    const palm: Vec3 = [p[0], p[1], p[2] - 0.06];
    const rest = pentagon(palm, 0.03);
    return this.frame(side, palm, [0, 0, 1], [0, 0, 1], [p, p, rest[2], rest[3], rest[4]],
      [0.5, 0.5, 0.5, 0.5, 0.5]);
  }

  point(scene: ClientScene, side: "left" | "right", palmWorld: Vec3, aimWorld: Vec3): HandFrameWire {
    const palm = worldToLocal(scene.viewpoint, palmWorld);
    const aim = normalized(sub(worldToLocal(scene.viewpoint, aimWorld), palm));
    const tip: Vec3 = [palm[0] + aim[0] * 0.1, palm[1] + aim[1] * 0.1, palm[2] + aim[2] * 0.1];
    const rest = pentagon(palm, 0.02);
    return this.frame(side, palm, aim, aim, [rest[0], tip, rest[2], rest[3], rest[4]],
      [0.4, 0, 0.8, 0.8, 0.8]);
  }

  stopHand(scene: ClientScene, side: "left" | "right", palmWorld: Vec3, look: Vec3): HandFrameWire {
    const palm = worldToLocal(scene.viewpoint, palmWorld);
    const fwd = this.localFwdFlat(scene, look);
    const tips = pentagon([palm[0], palm[1], palm[2] + 0.06], 0.03);
    return this.frame(side, palm, fwd, [0, 0, 1], tips, [0, 0, 0, 0, 0]);
  }

  openHand(scene: ClientScene, side: "left" | "right", palmWorld: Vec3): HandFrameWire {
    const palm = worldToLocal(scene.viewpoint, palmWorld);
    const tips = pentagon([palm[0], palm[1], palm[2] + 0.06], 0.05);
    return this.frame(side, palm, [0, 0, -1], [0, 0, 1], tips, [0, 0, 0, 0, 0]);
  }

  touchHand(scene: ClientScene, side: "left" | "right", atWorld: Vec3): HandFrameWire {
    const p = worldToLocal(scene.viewpoint, atWorld);
    const palm: Vec3 = [p[0], p[1], p[2] - 0.02];
    return this.frame(side, palm, [0, 0, 1], [0, 0, 1], pentagon(p, 0.02),
      [0.5, 0.5, 0.5, 0.5, 0.5]);
  }

  indexUp(
    scene: ClientScene,
    side: "left" | "right",
    palmWorld: Vec3,
    tilt: [number, number],
  ): HandFrameWire {
    const palm = worldToLocal(scene.viewpoint, palmWorld);
    const d = normalized([tilt[0], tilt[1], 1]);
    const tip: Vec3 = [palm[0] + d[0] * 0.12, palm[1] + d[1] * 0.12, palm[2] + d[2] * 0.12];
    const rest = pentagon(palm, 0.02);
    return this.frame(side, palm, [1, 0, 0], d, [rest[0], tip, rest[2], rest[3], rest[4]],
      [0.4, 0, 0.8, 0.8, 0.8]);
  }

  // -- placement ------------------------------------------------------------

  private headWorld(scene: ClientScene): Vec3 {
    return localToWorld(scene.viewpoint, this.headLocal);
  }

  private approach(scene: ClientScene, xy: [number, number], standback: number, z: number): void {
    const h = this.headWorld(scene);
    const d: Vec3 = [h[0] - xy[0], h[1] - xy[1], 0];
    const n = Math.hypot(d[0], d[1]);
    const u: Vec3 = n > 1e-9 ? [d[0] / n, d[1] / n, 0] : [1, 0, 0];
    this.headLocal = worldToLocal(scene.viewpoint, [
      xy[0] + u[0] * standback,
      xy[1] + u[1] * standback,
      z,
    ]);
  }

  private bearing(scene: ClientScene, chartId: string): Vec3 {
    const [x, y] = this.chartPos(chartId);
    const h = this.headWorld(scene);
    const d: Vec3 = [h[0] - x, h[1] - y, 0];
    const n = Math.hypot(d[0], d[1]);
    return n > 1e-9 ? [d[0] / n, d[1] / n, 0] : [1, 0, 0];
  }

  private grabSpot(scene: ClientScene, chartId: string, h: number): Vec3 {
    const [x, y] = this.chartPos(chartId);
    const b = this.bearing(scene, chartId);
    const r = this.chart.radius_m * 0.9;
    return [x + b[0] * r, y + b[1] * r, h];
  }

  private floatHead(scene: ClientScene, chartId: string, focusZ: number, standback = 0.5): void {
    const [x, y] = this.chartPos(chartId);
    this.approach(scene, [x, y], standback, Math.max(0.7, Math.min(1.6, focusZ + 0.5)));
  }

  // -- palette gestures -------------------------------------------------------

  /** Gaze-dwell phase only: arms the travel target (its outline lights up). */
  travelArm(scene: ClientScene, chartId: string): TraceRecordWire[] {
    this.headLocal = [0, 0, 1.6];
    const [x, y] = this.chartPos(chartId);
    const head = this.headWorld(scene);
    if (distXY(head, [x, y, 0]) <= this.eng.faraway_min_m) {
      throw new NoTargetError(`${chartId} too close for travel`);
    }
    const aim: Vec3 = [x, y, this.chart.length_m / 2];
    return this.idle(scene, this.eng.gaze_dwell_ms + 400, aim);
  }

  /** Point at the armed chart and ride the transition out. */
  travelGo(scene: ClientScene, chartId: string): TraceRecordWire[] {
    const [x, y] = this.chartPos(chartId);
    const aim: Vec3 = [x, y, this.chart.length_m / 2];
    const head = this.headWorld(scene);
    const fw = normalized([aim[0] - head[0], aim[1] - head[1], 0]);
    const right: Vec3 = [fw[1], -fw[0], 0];
    const palm: Vec3 = [
      head[0] + fw[0] * 0.45 - right[0] * 0.18,
      head[1] + fw[1] * 0.45 - right[1] * 0.18,
      head[2] - 0.25,
    ];
    const out: TraceRecordWire[] = [];
    for (let i = 0; i < Math.round(250 / this.dtMs); i++) {
      out.push(this.record(scene, null, this.point(scene, "right", palm, aim), aim));
    }
    out.push(...this.idle(scene, this.eng.transit_ms + 400, aim));
    return out;
  }

  travel(scene: ClientScene, chartId: string): TraceRecordWire[] {
    return [...this.travelArm(scene, chartId), ...this.travelGo(scene, chartId)];
  }

  modeToggle(scene: ClientScene, chartId: string): TraceRecordWire[] {
    const [x, y] = this.chartPos(chartId);
    const widget = toggleCenter([x, y], this.chart, this.eng);
    this.approach(scene, [x, y], 0.5, 1.5);
    const look: Vec3 = [x, y, 0.8];
    const out = this.idle(scene, 40, look);
    for (let i = 0; i < 8; i++) {
      out.push(this.record(scene, null, this.touchHand(scene, "right", widget), look));
    }
    out.push(...this.idle(scene, 40, look));
    return out;
  }

  timeEventSelection(scene: ClientScene, chartId: string, targetIndex: number): TraceRecordWire[] {
    const proj = scene.charts[chartId];
    const h0 = eventToHeight(proj.visible_window, this.chart.length_m, proj.slice_index);
    const h1 = eventToHeight(proj.visible_window, this.chart.length_m, targetIndex);
    this.floatHead(scene, chartId, h0);
    const out: TraceRecordWire[] = [];
    for (let i = 0; i < 4; i++) {
      const spot = this.grabSpot(scene, chartId, h0);
      out.push(this.record(scene, null, this.fist(scene, "right", spot), spot));
    }
    const n = Math.max(12, Math.floor(Math.abs(targetIndex - proj.slice_index) / 2));
    for (let i = 1; i <= n; i++) {
      const h = h0 + ((h1 - h0) * i) / n;
      this.floatHead(scene, chartId, h);
      const spot = this.grabSpot(scene, chartId, h);
      out.push(this.record(scene, null, this.fist(scene, "right", spot), spot));
    }
    const spot = this.grabSpot(scene, chartId, h1);
    for (let i = 0; i < Math.round(160 / this.dtMs); i++) {
      out.push(this.record(scene, null, this.fist(scene, "right", spot), spot));
    }
    const b = this.bearing(scene, chartId);
    const palm: Vec3 = [spot[0] + b[0] * 0.06, spot[1] + b[1] * 0.06, spot[2]];
    out.push(this.record(scene, null, this.openHand(scene, "right", palm), spot));
    out.push(...this.idle(scene, 40, spot));
    return out;
  }

  rotation(scene: ClientScene, chartId: string, degrees = 120): TraceRecordWire[] {
    const proj = scene.charts[chartId];
    const [x, y] = this.chartPos(chartId);
    const rH = this.chart.radius_m + this.eng.handle_offset_m;
    const zH = this.chart.length_m * this.eng.handle_height_frac;
    const az0 = proj.yaw_rad;

    const handleAt = (az: number): Vec3 => [x + rH * Math.cos(az), y + rH * Math.sin(az), zH];
    const headFor = (az: number): void => {
      this.headLocal = worldToLocal(scene.viewpoint, [
        x + (rH + 0.45) * Math.cos(az),
        y + (rH + 0.45) * Math.sin(az),
        1.0,
      ]);
    };

    const out: TraceRecordWire[] = [];
    headFor(az0);
    for (let i = 0; i < 4; i++) {
      out.push(this.record(scene, null, this.fist(scene, "right", handleAt(az0)), handleAt(az0)));
    }
    const total = (degrees * Math.PI) / 180;
    const n = Math.max(12, Math.round(2000 / this.dtMs));
    for (let i = 1; i <= n; i++) {
      const az = az0 + (total * i) / n;
      headFor(az);
      out.push(this.record(scene, null, this.fist(scene, "right", handleAt(az)), handleAt(az)));
    }
    const az = az0 + total;
    for (let i = 0; i < Math.round(250 / this.dtMs); i++) {
      out.push(this.record(scene, null, this.fist(scene, "right", handleAt(az)), handleAt(az)));
    }
    out.push(this.record(scene, null, this.openHand(scene, "right", handleAt(az)), handleAt(az)));
    out.push(...this.idle(scene, 40, handleAt(az)));
    return out;
  }

  timeRangeSelection(scene: ClientScene, chartId: string, a: number, b: number): TraceRecordWire[] {
    const proj = scene.charts[chartId];
    const [x, y] = this.chartPos(chartId);
    const ha = eventToHeight(proj.visible_window, this.chart.length_m, a);
    const hb = eventToHeight(proj.visible_window, this.chart.length_m, b);
    const midZ = (ha + hb) / 2;
    this.approach(scene, [x, y], 0.72, Math.max(0.75, Math.min(1.55, midZ + 0.2)));
    const bd = this.bearing(scene, chartId);
    const tang: Vec3 = [-bd[1], bd[0], 0];
    const r = this.chart.radius_m * 0.9;
    const pa: Vec3 = [x + bd[0] * r + tang[0] * 0.06, y + bd[1] * r + tang[1] * 0.06, ha];
    const pb: Vec3 = [x + bd[0] * r - tang[0] * 0.06, y + bd[1] * r - tang[1] * 0.06, hb];
    const look: Vec3 = [x, y, midZ];
    const out: TraceRecordWire[] = [];
    for (let i = 0; i < 10; i++) {
      out.push(
        this.record(
          scene,
          this.pinch(scene, "left", pa),
          this.pinch(scene, "right", pb),
          look,
        ),
      );
    }
    out.push(...this.idle(scene, 40, look));
    return out;
  }

  private zoomFrames(scene: ClientScene, sep: number, look: Vec3): [HandFrameWire, HandFrameWire] {
    const head = this.headWorld(scene);
    const fwdLocal = this.localFwdFlat(scene, look);
    const fwd = rotZ(fwdLocal, scene.viewpoint.yaw);
    const mid: Vec3 = [head[0] + fwd[0] * 0.45, head[1] + fwd[1] * 0.45, head[2] - 0.25];
    const upper: Vec3 = [mid[0], mid[1], mid[2] + sep / 2];
    const lower: Vec3 = [mid[0], mid[1], mid[2] - sep / 2];
    const lu = worldToLocal(scene.viewpoint, upper);
    const ll = worldToLocal(scene.viewpoint, lower);
    const left = this.frame("left", lu, [0, 0, -1], fwdLocal,
      pentagon([lu[0], lu[1], lu[2] - 0.04], 0.04), [0, 0, 0, 0, 0]);
    const right = this.frame("right", ll, [0, 0, 1], fwdLocal,
      pentagon([ll[0], ll[1], ll[2] + 0.04], 0.04), [0, 0, 0, 0, 0]);
    return [left, right];
  }

  zoom(scene: ClientScene, chartId: string, direction: "in" | "out"): TraceRecordWire[] {
    const [x, y] = this.chartPos(chartId);
    this.approach(scene, [x, y], 0.8, 1.5);
    const look: Vec3 = [x, y, 0.6];
    const [s0, s1] = direction === "in" ? [0.22, 0.5] : [0.45, 0.12];
    const out: TraceRecordWire[] = [];
    for (let i = 0; i < 4; i++) {
      const [l, r] = this.zoomFrames(scene, s0, look);
      out.push(this.record(scene, l, r, look));
    }
    const n = 30;
    for (let i = 1; i <= n; i++) {
      const sep = s0 + ((s1 - s0) * i) / n;
      const [l, r] = this.zoomFrames(scene, sep, look);
      out.push(this.record(scene, l, r, look));
    }
    out.push(...this.idle(scene, 50, look));
    return out;
  }

  axisSphereDrag(
    scene: ClientScene,
    chartId: string,
    variable: number,
    opts: { targetSlot?: number; filterOut?: boolean },
  ): TraceRecordWire[] {
    const proj = scene.charts[chartId];
    const [x, y] = this.chartPos(chartId);
    const slot = proj.arrangement.indexOf(variable);
    if (slot < 0) throw new NoTargetError(`variable ${variable} not active on ${chartId}`);
    const az0 = proj.yaw_rad + slotAngle(proj.arrangement.length, slot);
    const R = this.chart.radius_m;

    const sphereAt = (az: number, radial: number): Vec3 => [
      x + radial * Math.cos(az),
      y + radial * Math.sin(az),
      this.chart.length_m,
    ];
    const headFor = (az: number, radial: number): void => {
      this.headLocal = worldToLocal(scene.viewpoint, [
        x + (radial + 0.45) * Math.cos(az),
        y + (radial + 0.45) * Math.sin(az),
        Math.min(1.6, this.chart.length_m + 0.5),
      ]);
    };

    const out: TraceRecordWire[] = [];
    headFor(az0, R);
    let spot = sphereAt(az0, R);
    for (let i = 0; i < 4; i++) {
      out.push(this.record(scene, null, this.fist(scene, "right", spot), spot));
    }
    if (opts.filterOut) {
      const r1 = this.eng.filter_snap * R + 0.1 * R + 0.05;
      const n = 14;
      for (let i = 1; i <= n; i++) {
        const r = R + ((r1 - R) * i) / n;
        headFor(az0, r);
        spot = sphereAt(az0, r);
        out.push(this.record(scene, null, this.fist(scene, "right", spot), spot));
      }
    } else {
      const az1 = proj.yaw_rad + slotAngle(proj.arrangement.length, opts.targetSlot ?? 0);
      let delta = az1 - az0;
      while (delta <= -Math.PI) delta += 2 * Math.PI;
      while (delta > Math.PI) delta -= 2 * Math.PI;
      const n = 20;
      for (let i = 1; i <= n; i++) {
        const az = az0 + (delta * i) / n;
        headFor(az, R);
        spot = sphereAt(az, R);
        out.push(this.record(scene, null, this.fist(scene, "right", spot), spot));
      }
      for (let i = 0; i < Math.round(120 / this.dtMs); i++) {
        out.push(this.record(scene, null, this.fist(scene, "right", spot), spot));
      }
    }
    out.push(this.record(scene, null, this.openHand(scene, "right", spot), spot));
    out.push(...this.idle(scene, 40, spot));
    return out;
  }

  reset(scene: ClientScene, chartId: string): TraceRecordWire[] {
    const [x, y] = this.chartPos(chartId);
    this.approach(scene, [x, y], 0.8, 1.5);
    const look: Vec3 = [x, y, 0.6];
    const head = this.headWorld(scene);
    const fwd = rotZ(this.localFwdFlat(scene, look), scene.viewpoint.yaw);
    const tang: Vec3 = [-fwd[1], fwd[0], 0];
    const base: Vec3 = [head[0] + fwd[0] * 0.45, head[1] + fwd[1] * 0.45, head[2] - 0.3];
    const palms = (off: number): [Vec3, Vec3] => [
      [base[0] + tang[0] * off, base[1] + tang[1] * off, base[2]],
      [base[0] - tang[0] * off, base[1] - tang[1] * off, base[2]],
    ];
    const out: TraceRecordWire[] = [];
    let [pl, pr] = palms(0.08);
    for (let i = 0; i < Math.round((this.eng.reset_arm_ms + 120) / this.dtMs); i++) {
      out.push(
        this.record(
          scene,
          this.indexUp(scene, "left", pl, [0, 0]),
          this.indexUp(scene, "right", pr, [0, 0]),
          look,
        ),
      );
    }
    [pl, pr] = palms(0.05);
    const tl = rotZ(tang, -scene.viewpoint.yaw);
    for (let i = 0; i < Math.round(180 / this.dtMs); i++) {
      out.push(
        this.record(
          scene,
          this.indexUp(scene, "left", pl, [-tl[0] * 0.45, -tl[1] * 0.45]),
          this.indexUp(scene, "right", pr, [tl[0] * 0.45, tl[1] * 0.45]),
          look,
        ),
      );
    }
    out.push(...this.idle(scene, 50, look));
    return out;
  }

  pauseResume(scene: ClientScene, nearChartId: string): TraceRecordWire[] {
    const [x, y] = this.chartPos(nearChartId);
    this.approach(scene, [x, y], 0.8, 1.5);
    const look: Vec3 = [x, y, 0.6];
    const head = this.headWorld(scene);
    const fwd = rotZ(this.localFwdFlat(scene, look), scene.viewpoint.yaw);
    const tang: Vec3 = [-fwd[1], fwd[0], 0];
    const base: Vec3 = [head[0] + fwd[0] * 0.45, head[1] + fwd[1] * 0.45, head[2] - 0.25];
    const pl: Vec3 = [base[0] + tang[0] * 0.12, base[1] + tang[1] * 0.12, base[2]];
    const pr: Vec3 = [base[0] - tang[0] * 0.12, base[1] - tang[1] * 0.12, base[2]];
    const out: TraceRecordWire[] = [];
    for (let i = 0; i < Math.round((this.eng.pause_hold_ms + 300) / this.dtMs); i++) {
      out.push(
        this.record(
          scene,
          this.stopHand(scene, "left", pl, look),
          this.stopHand(scene, "right", pr, look),
          look,
        ),
      );
    }
    out.push(...this.idle(scene, 50, look));
    return out;
  }

  /** Dispatch by feature name; targets and indices picked from the scene. */
  emitGesture(scene: ClientScene, feature: PaletteFeature, chartId: string): TraceRecordWire[] {
    const proj = scene.charts[chartId];
    if (!proj) throw new NoTargetError(`unknown chart ${chartId}`);
    switch (feature) {
      case "travel":
        return this.travel(scene, chartId);
      case "mode_toggle":
        return this.modeToggle(scene, chartId);
      case "time_event_selection": {
        const [lo, hi] = proj.visible_window;
        const target = proj.slice_index === lo ? Math.floor((lo + hi) / 2) : lo;
        return this.timeEventSelection(scene, chartId, target);
      }
      case "rotation":
        return this.rotation(scene, chartId);
      case "time_range_selection": {
        const [lo, hi] = proj.visible_window;
        const quarter = Math.max(1, Math.floor((hi - lo) / 4));
        return this.timeRangeSelection(scene, chartId, lo + quarter, hi - quarter);
      }
      case "zoom_in":
        return this.zoom(scene, chartId, "in");
      case "zoom_out":
        return this.zoom(scene, chartId, "out");
      case "variable_sort": {
        const arr = proj.arrangement;
        return this.axisSphereDrag(scene, chartId, arr[arr.length - 1], { targetSlot: 0 });
      }
      case "variable_filter":
        return this.axisSphereDrag(scene, chartId, proj.arrangement[0], { filterOut: true });
      case "reset":
        return this.reset(scene, chartId);
      case "pause_resume":
        return this.pauseResume(scene, chartId);
    }
  }
}
