// Application wiring: connection lifecycle, the three input modes
// (exactly one active at a time), palette dispatch, scene fold, and the
// render/info loops.

import { Connection, ConnectionFailed, VersionMismatch } from "./connection.js";
import { GestureScripter, PALETTE_FEATURES, type PaletteFeature } from "./gestures.js";
import { parseTraceText, playTrace, type PlaybackControl } from "./playback.js";
import type { ServerMsg, TraceRecordWire, Vec3 } from "./protocol.js";
import { Renderer, infoPanelRows } from "./render.js";
import { applyDelta, sceneFromSnapshot, type ClientScene } from "./scene.js";
import { VirtualHand, postureForKeys, type VirtualHandState } from "./virtualhand.js";

export type InputModeName = "trace_playback" | "gesture_palette" | "virtual_hand";

/** Exactly one input mode is active; switching deactivates the previous. */
export class InputModeManager {
  private current: InputModeName = "gesture_palette";
  private onLeave: (() => void) | null = null;

  get active(): InputModeName {
    return this.current;
  }

  switch(mode: InputModeName, onLeave?: () => void): void {
    if (mode === this.current) return;
    this.onLeave?.();
    this.current = mode;
    this.onLeave = onLeave ?? null;
  }
}

export class App {
  conn: Connection | null = null;
  scene: ClientScene | null = null;
  scripter: GestureScripter | null = null;
  renderer: Renderer | null = null;
  modes = new InputModeManager();
  events: string[] = [];
  private playback: PlaybackControl | null = null;
  private virtualTimer: number | null = null;
  private heldKeys = new Set<string>();
  private lastHands: (TraceRecordWire["left"] | null)[] = [null, null];
  private headLocal: Vec3 = [0, 0, 1.6];

  constructor(private ui: {
    canvas: HTMLCanvasElement;
    banner: HTMLElement;
    status: HTMLElement;
    target: HTMLSelectElement;
    palette: HTMLElement;
    eventLog: HTMLElement;
    info: HTMLElement;
  }) {}

  async connect(url: string): Promise<void> {
    try {
      this.conn = await Connection.open(url);
    } catch (err) {
      if (err instanceof VersionMismatch) {
        this.showBanner(`protocol version mismatch: ${err.message}`);
      } else if (err instanceof ConnectionFailed) {
        this.showBanner(`connection failed: ${err.message}`);
      } else {
        this.showBanner(String(err));
      }
      return;
    }
    this.hideBanner();
    const welcome = this.conn.welcome;
    this.scripter = new GestureScripter(
      welcome.dataset, welcome.config.chart, welcome.config.engine,
    );
    this.renderer = new Renderer(
      this.ui.canvas, welcome.dataset, welcome.config.chart, welcome.config.engine,
    );
    const snap = await this.conn.untilSnapshot((m) => this.absorb(m));
    this.scene = sceneFromSnapshot(snap);
    this.ui.status.textContent =
      `session ${welcome.session_id}: ${welcome.dataset.entities.length} charts`;
    this.populateTargets(welcome.dataset.entities.map((e) => e.id));
    this.buildPalette();
    this.renderLoop();
  }

  private absorb(msg: ServerMsg): void {
    if (msg.type === "state_delta" && this.scene) {
      this.scene = applyDelta(this.scene, msg);
    } else if (msg.type === "event") {
      const r = msg.record;
      this.events.push(`${r.t_ms} ${r.event}${r.chart_id ? " @" + r.chart_id : ""}`);
      if (this.events.length > 200) this.events.shift();
      this.renderEventLog();
    } else if (msg.type === "error") {
      this.showBanner(`${msg.code}: ${msg.message}`);
    }
  }

  /** Stream records to the service, folding responses as they arrive. */
  async runRecords(records: TraceRecordWire[]): Promise<void> {
    if (!this.conn || !this.scene) return;
    for (const rec of records) {
      this.lastHands = [rec.left, rec.right];
      this.headLocal = rec.head.pos as Vec3;
      this.conn.sendInput(rec);
    }
    const snap = await this.conn.untilSnapshot((m) => this.absorb(m));
    this.scene = sceneFromSnapshot(snap);
  }

  // -- gesture palette mode ---------------------------------------------

  private buildPalette(): void {
    this.ui.palette.innerHTML = "";
    for (const feature of PALETTE_FEATURES) {
      const button = document.createElement("button");
      button.textContent = feature.replaceAll("_", " ");
      button.addEventListener("click", () => void this.firePalette(feature));
      this.ui.palette.appendChild(button);
    }
  }

  async firePalette(feature: PaletteFeature): Promise<void> {
    if (!this.scene || !this.scripter) return;
    this.modes.switch("gesture_palette");
    this.stopLocalModes();
    const target = this.ui.target.value;
    try {
      const records = this.scripter.emitGesture(this.scene, feature, target);
      await this.runRecords(records);
    } catch (err) {
      this.showBanner(String(err));
    }
  }

  // -- trace playback mode -------------------------------------------------

  startPlayback(text: string, speed: number): void {
    if (!this.conn) return;
    this.modes.switch("trace_playback", () => this.playback?.stop());
    this.stopLocalModes();
    const records = parseTraceText(text);
    this.playback = playTrace(records, speed, (rec) => {
      this.lastHands = [rec.left, rec.right];
      this.headLocal = rec.head.pos as Vec3;
      this.conn!.sendInput(rec);
      void this.pollScene();
    });
  }

  private async pollScene(): Promise<void> {
    // drain whatever the service produced without blocking playback
    if (!this.conn || !this.scene) return;
    const snap = await this.conn.untilSnapshot((m) => this.absorb(m));
    this.scene = sceneFromSnapshot(snap);
  }

  // -- virtual hand mode ----------------------------------------------------

  startVirtualHand(): void {
    if (!this.conn || !this.scripter) return;
    this.modes.switch("virtual_hand", () => {
      if (this.virtualTimer !== null) clearInterval(this.virtualTimer);
      this.virtualTimer = null;
    });
    this.stopLocalModes();
    const vh = new VirtualHand(this.scripter);
    vh.seedTime(this.scene?.t_ms ?? 0);
    const state: VirtualHandState = {
      pointerX: 0, pointerY: 0, posture: "none", bimanual: false, lift: 0,
    };
    this.ui.canvas.addEventListener("mousemove", (ev) => {
      const rect = this.ui.canvas.getBoundingClientRect();
      state.pointerX = ((ev.clientX - rect.left) / rect.width) * 2 - 1;
      state.pointerY = ((ev.clientY - rect.top) / rect.height) * 2 - 1;
    });
    window.addEventListener("keydown", (ev) => {
      this.heldKeys.add(ev.key.toLowerCase());
      if (ev.key === "w") state.lift += 0.02;
      if (ev.key === "x") state.lift -= 0.02;
    });
    window.addEventListener("keyup", (ev) => this.heldKeys.delete(ev.key.toLowerCase()));
    this.virtualTimer = setInterval(() => {
      if (!this.scene || this.modes.active !== "virtual_hand") return;
      state.posture = postureForKeys(this.heldKeys);
      state.bimanual = this.heldKeys.has("shift");
      const rec = vh.frame(this.scene, state);
      this.lastHands = [rec.left, rec.right];
      this.headLocal = rec.head.pos as Vec3;
      this.conn!.sendInput(rec);
      void this.pollScene();
    }, 11) as unknown as number;
  }

  private stopLocalModes(): void {
    this.playback?.stop();
    this.playback = null;
  }

  // -- presentation ------------------------------------------------------

  private renderLoop(): void {
    const tick = () => {
      if (this.scene && this.renderer) {
        this.renderer.draw(this.scene, this.headLocal, this.lastHands);
        this.renderInfo();
      }
      requestAnimationFrame(tick);
    };
    requestAnimationFrame(tick);
  }

  private renderInfo(): void {
    if (!this.scene || !this.conn) return;
    const target = this.ui.target.value;
    const panel = infoPanelRows(this.conn.welcome.dataset, this.scene, target);
    if (!panel) {
      this.ui.info.textContent = this.scene.paused ? "paused" : "";
      return;
    }
    const lines = panel.rows.map(
      (r) => `${r.name}: ${r.value.toFixed(1)} (${(r.radius * 100).toFixed(0)}%)`,
    );
    this.ui.info.textContent =
      `${panel.label}\n${lines.join("\n")}${this.scene.paused ? "\n[paused]" : ""}`;
  }

  private renderEventLog(): void {
    this.ui.eventLog.textContent = this.events.slice(-14).join("\n");
  }

  private populateTargets(ids: string[]): void {
    this.ui.target.innerHTML = "";
    for (const id of ids) {
      const opt = document.createElement("option");
      opt.value = id;
      opt.textContent = id;
      this.ui.target.appendChild(opt);
    }
  }

  private showBanner(text: string): void {
    this.ui.banner.textContent = text;
    this.ui.banner.style.display = "block";
  }

  private hideBanner(): void {
    this.ui.banner.style.display = "none";
  }
}
