// Integration against a live session service: every palette feature is
// driven end to end, each must land its expected event kind, and after
// every gesture the folded scene must equal a fresh server snapshot with
// zero diff.  The render hints (travel outline, range dimming, paused
// hand ghosts) are asserted at the moments they must toggle.

import { spawn, type ChildProcess } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import { Connection } from "../src/connection.js";
import { GestureScripter } from "../src/gestures.js";
import type { LogRecordWire, TraceRecordWire } from "../src/protocol.js";
import {
  applyDelta,
  handGhostAlpha,
  sceneDiff,
  sceneFromSnapshot,
  styleFor,
  type ClientScene,
} from "../src/scene.js";

const PORT = 8841;
const URL = `ws://127.0.0.1:${PORT}`;

let service: ChildProcess;
let conn: Connection;
let scene: ClientScene;
let scripter: GestureScripter;
const allEvents: LogRecordWire[] = [];

async function connectWithRetry(url: string, attempts = 40): Promise<Connection> {
  for (let i = 0; i < attempts; i++) {
    try {
      return await Connection.open(url, WebSocket as never);
    } catch {
      await new Promise((r) => setTimeout(r, 250));
    }
  }
  throw new Error(`service at ${url} never came up`);
}

/** Stream records, then fold deltas and collect events until a snapshot
 * confirms the scene; asserts a zero scene/snapshot diff. */
async function run(records: TraceRecordWire[]): Promise<LogRecordWire[]> {
  const events: LogRecordWire[] = [];
  for (const rec of records) conn.sendInput(rec);
  const snap = await conn.untilSnapshot((msg) => {
    if (msg.type === "state_delta") scene = applyDelta(scene, msg);
    else if (msg.type === "event") {
      events.push(msg.record);
      allEvents.push(msg.record);
    } else throw new Error(`unexpected ${msg.type}`);
  });
  const diff = sceneDiff(scene, snap);
  expect(diff).toEqual([]);
  scene = sceneFromSnapshot(snap);
  return events;
}

function kinds(events: LogRecordWire[]): string[] {
  return events.map((e) => e.event);
}

beforeAll(async () => {
  service = spawn(
    "python3",
    ["-m", "gce.cli", "serve", "--port", String(PORT), "--gen", "--seed", "7"],
    { stdio: "ignore" },
  );
  conn = await connectWithRetry(URL);
  scripter = new GestureScripter(
    conn.welcome.dataset,
    conn.welcome.config.chart,
    conn.welcome.config.engine,
  );
  const snap = await conn.untilSnapshot();
  scene = sceneFromSnapshot(snap);
}, 30_000);

afterAll(() => {
  conn?.close();
  service?.kill();
});

// the same generated world as the golden replay; e03 is reachable from
// the canonical start viewpoint
const TARGET = "e03";

describe("palette integration", () => {
  it("welcome carries the dataset and geometry", () => {
    expect(conn.welcome.protocol_version).toBe(1);
    expect(conn.welcome.dataset.entities).toHaveLength(39);
    expect(conn.welcome.config.chart.length_m).toBeCloseTo(1.0);
    expect(Object.keys(scene.charts)).toHaveLength(39);
  });

  it("travel: outline arms, then the viewpoint lands at the target", async () => {
    const armEvents = await run(scripter.travelArm(scene, TARGET));
    expect(kinds(armEvents)).toContain("travel_armed");
    expect(styleFor(scene.charts[TARGET]).outline).toBe(true); // render hint

    const goEvents = await run(scripter.travelGo(scene, TARGET));
    expect(kinds(goEvents)).toContain("travel_started");
    expect(kinds(goEvents)).toContain("travel_completed");
    expect(styleFor(scene.charts[TARGET]).outline).toBe(false);
    const [ex, ey] = [conn.welcome.dataset.entities.find((e) => e.id === TARGET)!.x,
                      conn.welcome.dataset.entities.find((e) => e.id === TARGET)!.y];
    const head = scene.viewpoint.pos;
    const dist = Math.hypot(head[0] - ex, head[1] - ey);
    expect(dist).toBeCloseTo(conn.welcome.config.engine.standoff_m, 1);
  }, 30_000);

  it("mode toggle activates the chart", async () => {
    const events = await run(scripter.modeToggle(scene, TARGET));
    expect(kinds(events)).toContain("mode_changed");
    expect(scene.charts[TARGET].mode).toBe("active_rotate");
  }, 30_000);

  it("time event selection reaches the middle of the window", async () => {
    const events = await run(scripter.emitGesture(scene, "time_event_selection", TARGET));
    expect(kinds(events)).toContain("time_event_selected");
    expect(scene.charts[TARGET].slice_index).toBe(74);
  }, 30_000);

  it("rotation turns the chart", async () => {
    const before = scene.charts[TARGET].yaw_rad;
    const events = await run(scripter.emitGesture(scene, "rotation", TARGET));
    expect(kinds(events)).toContain("rotation_changed");
    expect(scene.charts[TARGET].yaw_rad).toBeGreaterThan(before + 1.5);
  }, 30_000);

  it("range selection applies and dims outside data", async () => {
    const events = await run(scripter.emitGesture(scene, "time_range_selection", TARGET));
    expect(kinds(events)).toContain("time_range_preview");
    expect(kinds(events)).toContain("time_range_applied");
    expect(scene.charts[TARGET].selected_range).toEqual([37, 112]);
    expect(styleFor(scene.charts[TARGET]).dimOutsideRange).toEqual([37, 112]); // hint
  }, 30_000);

  it("zoom in stretches the selection over the axis", async () => {
    const events = await run(scripter.emitGesture(scene, "zoom_in", TARGET));
    expect(kinds(events)).toContain("zoomed_in");
    expect(scene.charts[TARGET].visible_window).toEqual([37, 112]);
    expect(styleFor(scene.charts[TARGET]).dimOutsideRange).toBeNull();
  }, 30_000);

  it("zoom out pops the history", async () => {
    const events = await run(scripter.emitGesture(scene, "zoom_out", TARGET));
    expect(kinds(events)).toContain("zoomed_out");
    expect(scene.charts[TARGET].visible_window).toEqual([0, 149]);
  }, 30_000);

  it("second toggle reaches reconfigure/filter", async () => {
    const events = await run(scripter.emitGesture(scene, "mode_toggle", TARGET));
    expect(kinds(events)).toContain("mode_changed");
    expect(scene.charts[TARGET].mode).toBe("reconfigure_filter");
  }, 30_000);

  it("variable sort moves the last axis to the front", async () => {
    const before = [...scene.charts[TARGET].arrangement];
    const events = await run(scripter.emitGesture(scene, "variable_sort", TARGET));
    expect(kinds(events)).toContain("variable_sorted");
    const moved = before[before.length - 1];
    expect(scene.charts[TARGET].arrangement[0]).toBe(moved);
  }, 30_000);

  it("variable filter removes an axis", async () => {
    const victim = scene.charts[TARGET].arrangement[0];
    const events = await run(scripter.emitGesture(scene, "variable_filter", TARGET));
    expect(kinds(events)).toContain("variable_filtered");
    expect(scene.charts[TARGET].arrangement).not.toContain(victim);
    expect(scene.charts[TARGET].arrangement).toHaveLength(4);
  }, 30_000);

  it("reset restores the original configuration", async () => {
    const events = await run(scripter.emitGesture(scene, "reset", TARGET));
    expect(kinds(events)).toContain("chart_reset");
    expect(scene.charts[TARGET].arrangement).toEqual([0, 1, 2, 3, 4]);
    expect(scene.charts[TARGET].visible_window).toEqual([0, 149]);
  }, 30_000);

  it("pause then resume, with ghost hands in between", async () => {
    expect(handGhostAlpha(scene)).toBeCloseTo(0.9);
    let events = await run(scripter.emitGesture(scene, "pause_resume", TARGET));
    expect(kinds(events)).toContain("paused");
    expect(scene.paused).toBe(true);
    expect(scene.hands.left.semitransparent).toBe(true); // render hint
    expect(handGhostAlpha(scene)).toBeCloseTo(0.3);

    events = await run(scripter.emitGesture(scene, "pause_resume", TARGET));
    expect(kinds(events)).toContain("resumed");
    expect(scene.paused).toBe(false);
    expect(scene.hands.left.semitransparent).toBe(false);
  }, 30_000);

  it("every palette feature produced its event kind", () => {
    const seen = new Set(allEvents.map((e) => e.event));
    for (const kind of [
      "travel_armed", "travel_started", "travel_completed", "mode_changed",
      "time_event_selected", "rotation_changed", "time_range_preview",
      "time_range_applied", "zoomed_in", "zoomed_out", "variable_sorted",
      "variable_filtered", "chart_reset", "paused", "resumed",
    ]) {
      expect(seen, kind).toContain(kind);
    }
  });
});
