// Client scene state: the fold of state deltas over the initial snapshot.
// The service guarantees deltas carry full projections of every changed
// chart, so a shallow per-chart merge reproduces any later snapshot.

import type {
  ChartProjection,
  HandHint,
  SnapshotMsg,
  StateDeltaMsg,
  ViewpointWire,
} from "./protocol.js";

export interface ClientScene {
  t_ms: number;
  paused: boolean;
  viewpoint: ViewpointWire;
  hands: { left: HandHint; right: HandHint };
  charts: Record<string, ChartProjection>;
}

export function sceneFromSnapshot(snap: SnapshotMsg): ClientScene {
  return {
    t_ms: snap.t_ms,
    paused: snap.paused,
    viewpoint: snap.viewpoint,
    hands: snap.hands,
    charts: { ...snap.charts },
  };
}

export function applyDelta(scene: ClientScene, delta: StateDeltaMsg): ClientScene {
  const next: ClientScene = {
    t_ms: delta.t_ms,
    paused: delta.paused !== undefined ? delta.paused : scene.paused,
    viewpoint: delta.viewpoint !== undefined ? delta.viewpoint : scene.viewpoint,
    hands: delta.hands !== undefined ? delta.hands : scene.hands,
    charts: scene.charts,
  };
  if (delta.charts) {
    next.charts = { ...scene.charts, ...delta.charts };
  }
  return next;
}

export function sceneEqualsSnapshot(scene: ClientScene, snap: SnapshotMsg): boolean {
  return deepEquals(
    { t_ms: scene.t_ms, paused: scene.paused, viewpoint: scene.viewpoint,
      hands: scene.hands, charts: scene.charts },
    { t_ms: snap.t_ms, paused: snap.paused, viewpoint: snap.viewpoint,
      hands: snap.hands, charts: snap.charts },
  );
}

export function sceneDiff(scene: ClientScene, snap: SnapshotMsg): string[] {
  const diffs: string[] = [];
  const keys = ["t_ms", "paused", "viewpoint", "hands"] as const;
  for (const k of keys) {
    if (!deepEquals(scene[k], snap[k])) diffs.push(k);
  }
  const ids = new Set([...Object.keys(scene.charts), ...Object.keys(snap.charts)]);
  for (const id of ids) {
    if (!deepEquals(scene.charts[id], snap.charts[id])) diffs.push(`charts.${id}`);
  }
  return diffs;
}

function deepEquals(a: unknown, b: unknown): boolean {
  if (a === b) return true;
  if (typeof a !== typeof b) return false;
  if (Array.isArray(a)) {
    if (!Array.isArray(b) || a.length !== b.length) return false;
    return a.every((x, i) => deepEquals(x, b[i]));
  }
  if (a !== null && b !== null && typeof a === "object") {
    const ka = Object.keys(a as object);
    const kb = Object.keys(b as object);
    if (ka.length !== kb.length) return false;
    return ka.every((k) =>
      deepEquals((a as Record<string, unknown>)[k], (b as Record<string, unknown>)[k]),
    );
  }
  return false;
}

// Render hints consumed by the canvas layer, derived purely from the
// scene so tests can assert them without a DOM.
export interface ChartStyle {
  outline: boolean;
  dimOutsideRange: [number, number] | null;
  previewRange: [number, number] | null;
  detachedVariable: number | null;
  active: boolean;
}

export function styleFor(proj: ChartProjection): ChartStyle {
  return {
    outline: proj.outline,
    dimOutsideRange: proj.selected_range,
    previewRange: proj.preview_range,
    detachedVariable: proj.detached_variable,
    active: proj.mode !== "inactive",
  };
}

export function handGhostAlpha(scene: ClientScene): number {
  return scene.paused ? 0.3 : 0.9;
}
