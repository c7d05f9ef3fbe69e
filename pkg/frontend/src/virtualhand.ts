// Virtual hand input mode: the pointer steers one synthesized hand at a
// fixed depth in front of the head; held keys pick the posture.  Holding
// Shift mirrors the same posture onto a second hand slightly offset, which
// is enough to drive the bimanual gestures by hand.
//
//   g = grab    p = pinch    o = point forward    s = stop    i = index up
//   w/x = raise/lower hands   shift = second hand

import { localToWorld, normalized, worldToLocal } from "./chartmath.js";
import type { HandFrameWire, TraceRecordWire, Vec3 } from "./protocol.js";
import type { ClientScene } from "./scene.js";
import { GestureScripter } from "./gestures.js";

export type PostureKey = "none" | "grab" | "pinch" | "point" | "stop" | "index_up";

export interface VirtualHandState {
  pointerX: number; // -1 .. 1 across the canvas
  pointerY: number; // -1 .. 1 down the canvas
  posture: PostureKey;
  bimanual: boolean;
  lift: number; // meters added to hand height
}

const KEY_POSTURES: Record<string, PostureKey> = {
  g: "grab",
  p: "pinch",
  o: "point",
  s: "stop",
  i: "index_up",
};

export function postureForKeys(held: Set<string>): PostureKey {
  for (const [key, posture] of Object.entries(KEY_POSTURES)) {
    if (held.has(key)) return posture;
  }
  return "none";
}

export class VirtualHand {
  private t = 0;

  constructor(
    private scripter: GestureScripter,
    private headLocal: Vec3 = [0, 0, 1.6],
    readonly dtMs = 11,
  ) {}

  seedTime(t: number): void {
    this.t = t;
  }

  /** One synthesized record for the current pointer/posture state. */
  frame(scene: ClientScene, st: VirtualHandState): TraceRecordWire {
    this.t += this.dtMs;
    const vp = scene.viewpoint;
    // the hand rides a ray through the pointer at a fixed 0.45 m depth
    const dirLocal = normalized([1, -st.pointerX * 0.8, -st.pointerY * 0.6]);
    const handLocal: Vec3 = [
      this.headLocal[0] + dirLocal[0] * 0.45,
      this.headLocal[1] + dirLocal[1] * 0.45,
      this.headLocal[2] + dirLocal[2] * 0.45 + st.lift,
    ];
    const handWorld = localToWorld(vp, handLocal);
    const aimWorld = localToWorld(vp, [
      this.headLocal[0] + dirLocal[0] * 3,
      this.headLocal[1] + dirLocal[1] * 3,
      this.headLocal[2] + dirLocal[2] * 3,
    ]);

    const right = this.hand(scene, "right", handWorld, aimWorld, st.posture);
    let left: HandFrameWire | null = null;
    if (st.bimanual) {
      const offWorld = localToWorld(vp, [
        handLocal[0],
        handLocal[1] + 0.12,
        handLocal[2] + (st.posture === "stop" ? 0 : 0.12),
      ]);
      left = this.hand(scene, "left", offWorld, aimWorld, st.posture);
    }
    const quatTarget = worldToLocal(vp, aimWorld);
    const rec: TraceRecordWire = {
      t_ms: this.t,
      head: {
        pos: [...this.headLocal],
        quat: lookQuat(this.headLocal, quatTarget),
      },
      left,
      right,
    };
    if (left) left.t_ms = this.t;
    if (right) right.t_ms = this.t;
    return rec;
  }

  private hand(
    scene: ClientScene,
    side: "left" | "right",
    at: Vec3,
    aim: Vec3,
    posture: PostureKey,
  ): HandFrameWire {
    switch (posture) {
      case "grab":
        return this.scripter.fist(scene, side, at);
      case "pinch":
        return this.scripter.pinch(scene, side, at);
      case "point":
        return this.scripter.point(scene, side, at, aim);
      case "stop":
        return this.scripter.stopHand(scene, side, at, aim);
      case "index_up":
        return this.scripter.indexUp(scene, side, at, [0, 0]);
      default:
        return this.scripter.touchHand(scene, side, at);
    }
  }
}

function lookQuat(origin: Vec3, target: Vec3): number[] {
  const d: Vec3 = [target[0] - origin[0], target[1] - origin[1], target[2] - origin[2]];
  const yaw = Math.atan2(d[1], d[0]);
  const pitch = Math.atan2(-d[2], Math.hypot(d[0], d[1]));
  const cy = Math.cos(yaw / 2);
  const sy = Math.sin(yaw / 2);
  const cp = Math.cos(pitch / 2);
  const sp = Math.sin(pitch / 2);
  return [cy * cp, -sy * sp, cy * sp, sy * cp];
}
