// Client-side mirror of the chart model's geometry rules: the renderer and
// gesture palette derive everything from these, never from ad-hoc numbers.
//
// World frame: right-handed, x east, y north, z up; yaw 0 faces +x.

import type { ChartGeometry, ChartProjection, EngineConstants, Vec3, ViewpointWire } from "./protocol.js";

export function eventToHeight(
  window: [number, number],
  lengthM: number,
  index: number,
): number {
  const [lo, hi] = window;
  return (lengthM * (index - lo)) / (hi - lo);
}

export function heightToEvent(
  window: [number, number],
  lengthM: number,
  h: number,
): number {
  const [lo, hi] = window;
  const clamped = Math.max(0, Math.min(lengthM, h));
  const steps = (clamped * (hi - lo)) / lengthM;
  return lo + Math.floor(steps + 0.5);
}

export function eventGap(window: [number, number], lengthM: number): number {
  return lengthM / (window[1] - window[0]);
}

export function normalizeValue(series: number[], v: number): number {
  let lo = series[0];
  let hi = series[0];
  for (const x of series) {
    if (x < lo) lo = x;
    if (x > hi) hi = x;
  }
  if (lo === hi) return 0.5;
  return Math.max(0, Math.min(1, (v - lo) / (hi - lo)));
}

export function slotAngle(arrangementLength: number, slot: number): number {
  return (2 * Math.PI * slot) / arrangementLength;
}

// -- widget positions ---------------------------------------------------

export function toggleCenter(
  chartPos: [number, number],
  chart: ChartGeometry,
  eng: EngineConstants,
): Vec3 {
  return [chartPos[0], chartPos[1], chart.length_m + eng.widget_above_m];
}

export function handleCenter(
  chartPos: [number, number],
  chart: ChartGeometry,
  eng: EngineConstants,
  yawRad: number,
): Vec3 {
  const r = chart.radius_m + eng.handle_offset_m;
  return [
    chartPos[0] + r * Math.cos(yawRad),
    chartPos[1] + r * Math.sin(yawRad),
    chart.length_m * eng.handle_height_frac,
  ];
}

export function axisSphereCenter(
  chartPos: [number, number],
  chart: ChartGeometry,
  proj: ChartProjection,
  slot: number,
): Vec3 {
  const a = proj.yaw_rad + slotAngle(proj.arrangement.length, slot);
  return [
    chartPos[0] + chart.radius_m * Math.cos(a),
    chartPos[1] + chart.radius_m * Math.sin(a),
    chart.length_m,
  ];
}

// -- viewpoint transforms -------------------------------------------------

export function rotZ(p: Vec3, yaw: number): Vec3 {
  const c = Math.cos(yaw);
  const s = Math.sin(yaw);
  return [c * p[0] - s * p[1], s * p[0] + c * p[1], p[2]];
}

export function localToWorld(vp: ViewpointWire, local: Vec3): Vec3 {
  const r = rotZ(local, vp.yaw);
  return [vp.pos[0] + r[0], vp.pos[1] + r[1], vp.pos[2] + r[2]];
}

export function worldToLocal(vp: ViewpointWire, world: Vec3): Vec3 {
  return rotZ(
    [world[0] - vp.pos[0], world[1] - vp.pos[1], world[2] - vp.pos[2]],
    -vp.yaw,
  );
}

export function norm(v: Vec3): number {
  return Math.hypot(v[0], v[1], v[2]);
}

export function normalized(v: Vec3): Vec3 {
  const n = norm(v);
  return [v[0] / n, v[1] / n, v[2] / n];
}

export function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

export function distXY(a: Vec3, b: Vec3): number {
  return Math.hypot(a[0] - b[0], a[1] - b[1]);
}

// Orientation looking from origin towards target: Rz(yaw) * Ry(pitch),
// quaternion as [w, x, y, z].
export function lookAtQuat(origin: Vec3, target: Vec3): [number, number, number, number] {
  const d = sub(target, origin);
  const yaw = Math.atan2(d[1], d[0]);
  const pitch = Math.atan2(-d[2], Math.hypot(d[0], d[1]));
  const cy = Math.cos(yaw / 2);
  const sy = Math.sin(yaw / 2);
  const cp = Math.cos(pitch / 2);
  const sp = Math.sin(pitch / 2);
  // (cy,0,0,sy) * (cp,0,sp,0)
  return [cy * cp, -sy * sp, cy * sp, sy * cp];
}
