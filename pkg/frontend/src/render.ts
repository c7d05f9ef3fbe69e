// Canvas renderer: first-person perspective from the session viewpoint.
// All chart geometry is derived from the chart-model rules in chartmath;
// the render hints (outline, range dimming, preview, paused ghosts) come
// from scene.styleFor and nothing else.

import {
  axisSphereCenter,
  eventToHeight,
  handleCenter,
  localToWorld,
  normalizeValue,
  slotAngle,
  toggleCenter,
} from "./chartmath.js";
import type {
  ChartGeometry,
  DatasetDoc,
  EngineConstants,
  HandFrameWire,
  Vec3,
} from "./protocol.js";
import { handGhostAlpha, styleFor, type ClientScene } from "./scene.js";

const AXIS_COLORS = ["#4c78a8", "#f58518", "#54a24b", "#e45756", "#b279a2",
                     "#9d755d", "#72b7b2", "#eeca3b"];
const EYE_HEIGHT = 1.6;
const DETAIL_RADIUS_M = 9.0;

interface Camera {
  pos: Vec3;
  yaw: number;
  f: number; // focal length in pixels
  cx: number;
  cy: number;
}

function project(cam: Camera, p: Vec3): [number, number, number] | null {
  const dx = p[0] - cam.pos[0];
  const dy = p[1] - cam.pos[1];
  const dz = p[2] - cam.pos[2];
  const c = Math.cos(-cam.yaw);
  const s = Math.sin(-cam.yaw);
  const fx = c * dx - s * dy; // forward
  const fy = s * dx + c * dy; // left
  if (fx < 0.15) return null; // near clip
  return [cam.cx - (fy / fx) * cam.f, cam.cy - (dz / fx) * cam.f, fx];
}

export class Renderer {
  constructor(
    private canvas: HTMLCanvasElement,
    private dataset: DatasetDoc,
    private chart: ChartGeometry,
    private eng: EngineConstants,
  ) {}

  private camera(scene: ClientScene, headLocal: Vec3): Camera {
    const head = localToWorld(scene.viewpoint, headLocal);
    return {
      pos: [head[0], head[1], headLocal[2] === 0 ? EYE_HEIGHT : head[2]],
      yaw: scene.viewpoint.yaw,
      f: this.canvas.width * 0.55,
      cx: this.canvas.width / 2,
      cy: this.canvas.height / 2,
    };
  }

  draw(scene: ClientScene, headLocal: Vec3, hands: (HandFrameWire | null)[]): void {
    const ctx = this.canvas.getContext("2d")!;
    const cam = this.camera(scene, headLocal);
    ctx.fillStyle = "#101418";
    ctx.fillRect(0, 0, this.canvas.width, this.canvas.height);

    this.drawFloor(ctx, cam);
    const order = this.dataset.entities
      .map((e) => ({
        e,
        d: Math.hypot(e.x - cam.pos[0], e.y - cam.pos[1]),
      }))
      .sort((a, b) => b.d - a.d);
    for (const { e, d } of order) {
      this.drawChart(ctx, cam, scene, e.id, [e.x, e.y], d);
    }
    this.drawHands(ctx, cam, scene, hands);
  }

  private drawFloor(ctx: CanvasRenderingContext2D, cam: Camera): void {
    ctx.strokeStyle = "#1e2630";
    ctx.lineWidth = 1;
    for (let x = -10; x <= 10; x += 2) {
      this.line(ctx, cam, [x, -10, 0], [x, 10, 0]);
    }
    for (let y = -10; y <= 10; y += 2) {
      this.line(ctx, cam, [-10, y, 0], [10, y, 0]);
    }
  }

  private line(ctx: CanvasRenderingContext2D, cam: Camera, a: Vec3, b: Vec3): void {
    const pa = project(cam, a);
    const pb = project(cam, b);
    if (!pa || !pb) return;
    ctx.beginPath();
    ctx.moveTo(pa[0], pa[1]);
    ctx.lineTo(pb[0], pb[1]);
    ctx.stroke();
  }

  private drawChart(
    ctx: CanvasRenderingContext2D,
    cam: Camera,
    scene: ClientScene,
    chartId: string,
    pos: [number, number],
    dist: number,
  ): void {
    const proj = scene.charts[chartId];
    if (!proj) return;
    const style = styleFor(proj);
    const entity = this.dataset.entities.find((e) => e.id === chartId)!;
    const L = this.chart.length_m;
    const R = this.chart.radius_m;
    const [lo, hi] = proj.visible_window;

    if (style.outline) {
      // armed travel target: halo column
      ctx.strokeStyle = "rgba(255, 220, 90, 0.9)";
      ctx.lineWidth = 3;
      this.line(ctx, cam, [pos[0] - R, pos[1], 0], [pos[0] - R, pos[1], L]);
      this.line(ctx, cam, [pos[0] + R, pos[1], 0], [pos[0] + R, pos[1], L]);
      this.line(ctx, cam, [pos[0], pos[1] - R, 0], [pos[0], pos[1] - R, L]);
      this.line(ctx, cam, [pos[0], pos[1] + R, 0], [pos[0], pos[1] + R, L]);
    }

    // time axis
    ctx.strokeStyle = style.active ? "#e8eef4" : "#5c6a78";
    ctx.lineWidth = style.active ? 2 : 1;
    this.line(ctx, cam, [pos[0], pos[1], 0], [pos[0], pos[1], L]);

    if (dist > DETAIL_RADIUS_M) return; // too far for series detail

    const dimRange = style.dimOutsideRange;
    const stride = Math.max(1, Math.floor((hi - lo) / 72));
    for (let slot = 0; slot < proj.arrangement.length; slot++) {
      const variable = proj.arrangement[slot];
      const series = entity.series[variable];
      const angle = proj.yaw_rad + slotAngle(proj.arrangement.length, slot);
      const ca = Math.cos(angle);
      const sa = Math.sin(angle);
      const color = AXIS_COLORS[variable % AXIS_COLORS.length];
      let prev: [number, number, number] | null = null;
      let prevInRange = true;
      for (let t = lo; t <= hi; t += stride) {
        const radius = R * normalizeValue(series as number[], series[t]);
        const z = eventToHeight(proj.visible_window, L, t);
        const p = project(cam, [pos[0] + ca * radius, pos[1] + sa * radius, z]);
        const inRange = dimRange === null || (t >= dimRange[0] && t <= dimRange[1]);
        if (p && prev) {
          // outside a selected range the series renders as a
          // semi-transparent uncolored preview
          ctx.strokeStyle = inRange && prevInRange ? color : "rgba(170,180,190,0.25)";
          ctx.lineWidth = inRange && prevInRange ? 1.6 : 1.0;
          ctx.beginPath();
          ctx.moveTo(prev[0], prev[1]);
          ctx.lineTo(p[0], p[1]);
          ctx.stroke();
        }
        prev = p;
        prevInRange = inRange;
      }
    }

    if (style.previewRange) {
      // live pinch-pinch highlight band on the time axis
      const [a, b] = style.previewRange;
      ctx.strokeStyle = "rgba(120, 200, 255, 0.8)";
      ctx.lineWidth = 5;
      this.line(
        ctx, cam,
        [pos[0], pos[1], eventToHeight(proj.visible_window, L, a)],
        [pos[0], pos[1], eventToHeight(proj.visible_window, L, b)],
      );
    }

    // time slice polygon
    const sliceZ = eventToHeight(proj.visible_window, L, proj.slice_index);
    ctx.strokeStyle = style.active ? "#ffd05a" : "#7a8694";
    ctx.lineWidth = 1.4;
    let first: [number, number, number] | null = null;
    let last: [number, number, number] | null = null;
    for (let slot = 0; slot <= proj.arrangement.length; slot++) {
      const wrapped = slot % proj.arrangement.length;
      const variable = proj.arrangement[wrapped];
      const series = entity.series[variable];
      const angle = proj.yaw_rad + slotAngle(proj.arrangement.length, wrapped);
      const radius = R * normalizeValue(series as number[], series[proj.slice_index]);
      const p = project(cam, [
        pos[0] + Math.cos(angle) * radius,
        pos[1] + Math.sin(angle) * radius,
        sliceZ,
      ]);
      if (p && last) {
        ctx.beginPath();
        ctx.moveTo(last[0], last[1]);
        ctx.lineTo(p[0], p[1]);
        ctx.stroke();
      }
      if (!first) first = p;
      last = p;
    }

    if (style.active) {
      this.drawWidget(ctx, cam, toggleCenter(pos, this.chart, this.eng), "#6fd36f");
      if (proj.mode === "active_rotate") {
        this.drawWidget(ctx, cam, handleCenter(pos, this.chart, this.eng, proj.yaw_rad), "#d3a76f");
      }
      if (proj.mode === "reconfigure_filter") {
        for (let slot = 0; slot < proj.arrangement.length; slot++) {
          const variable = proj.arrangement[slot];
          const dashed = style.detachedVariable === variable;
          this.drawWidget(
            ctx, cam,
            axisSphereCenter(pos, this.chart, proj, slot),
            dashed ? "#e45756" : AXIS_COLORS[variable % AXIS_COLORS.length],
          );
        }
      }
    } else {
      this.drawWidget(ctx, cam, toggleCenter(pos, this.chart, this.eng), "#3d4a57");
    }
  }

  private drawWidget(ctx: CanvasRenderingContext2D, cam: Camera, at: Vec3, color: string): void {
    const p = project(cam, at);
    if (!p) return;
    const r = Math.max(2, (this.eng.widget_r_m * cam.f) / p[2]);
    ctx.fillStyle = color;
    ctx.beginPath();
    ctx.arc(p[0], p[1], r, 0, 2 * Math.PI);
    ctx.fill();
  }

  private drawHands(
    ctx: CanvasRenderingContext2D,
    cam: Camera,
    scene: ClientScene,
    hands: (HandFrameWire | null)[],
  ): void {
    const alpha = handGhostAlpha(scene); // paused hands render as ghosts
    for (const hand of hands) {
      if (!hand) continue;
      const palm = localToWorld(scene.viewpoint, hand.palm_pos as Vec3);
      const p = project(cam, palm);
      if (!p) continue;
      ctx.fillStyle = `rgba(235, 219, 178, ${alpha})`;
      ctx.beginPath();
      ctx.arc(p[0], p[1], Math.max(3, (0.04 * cam.f) / p[2]), 0, 2 * Math.PI);
      ctx.fill();
      for (const finger of hand.fingers) {
        const tip = localToWorld(scene.viewpoint, finger.tip as Vec3);
        const tp = project(cam, tip);
        if (!tp) continue;
        ctx.beginPath();
        ctx.arc(tp[0], tp[1], Math.max(1.5, (0.012 * cam.f) / tp[2]), 0, 2 * Math.PI);
        ctx.fill();
      }
    }
  }
}

export function infoPanelRows(
  dataset: DatasetDoc,
  scene: ClientScene,
  chartId: string,
): { label: string; rows: { name: string; value: number; radius: number }[] } | null {
  const proj = scene.charts[chartId];
  if (!proj || proj.mode === "inactive") return null;
  const entity = dataset.entities.find((e) => e.id === chartId);
  if (!entity) return null;
  const rows = proj.arrangement.map((variable) => {
    const series = entity.series[variable];
    return {
      name: dataset.variables[variable],
      value: series[proj.slice_index],
      radius: normalizeValue(series, series[proj.slice_index]),
    };
  });
  return { label: dataset.timestamps[proj.slice_index], rows };
}
