// Trace playback input mode: parse a line-delimited trace file and feed
// its records at a wall-clock speed multiple (timestamps are untouched;
// only delivery pacing changes).

import type { TraceRecordWire } from "./protocol.js";

export function parseTraceText(text: string): TraceRecordWire[] {
  const records: TraceRecordWire[] = [];
  let prev = -Infinity;
  for (const line of text.split("\n")) {
    if (!line.trim()) continue;
    const rec = JSON.parse(line) as TraceRecordWire;
    if (typeof rec.t_ms !== "number" || !rec.head) {
      throw new Error("malformed trace line");
    }
    if (rec.t_ms <= prev) throw new Error(`non-monotonic trace at ${rec.t_ms} ms`);
    prev = rec.t_ms;
    records.push(rec);
  }
  return records;
}

export interface PlaybackControl {
  stop(): void;
  done: Promise<void>;
}

export function playTrace(
  records: TraceRecordWire[],
  speed: number,
  emit: (rec: TraceRecordWire) => void,
  setTimeoutFn: typeof setTimeout = setTimeout,
): PlaybackControl {
  let stopped = false;
  let resolveDone: () => void;
  const done = new Promise<void>((r) => (resolveDone = r));

  const run = (i: number) => {
    if (stopped || i >= records.length) {
      resolveDone();
      return;
    }
    emit(records[i]);
    if (i + 1 >= records.length) {
      resolveDone();
      return;
    }
    const gap = (records[i + 1].t_ms - records[i].t_ms) / Math.max(0.01, speed);
    setTimeoutFn(() => run(i + 1), gap);
  };
  run(0);
  return { stop: () => (stopped = true), done };
}
