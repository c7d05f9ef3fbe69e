// Websocket session: hello/welcome handshake, ordered message delivery,
// and a request helper that streams inputs and waits for a snapshot.
//
// Works in the browser (native WebSocket) and under node tests (pass the
// `ws` constructor in).

import type {
  ClientMsg,
  ServerMsg,
  SnapshotMsg,
  TraceRecordWire,
  WelcomeMsg,
} from "./protocol.js";
import { PROTOCOL_VERSION } from "./protocol.js";

type WebSocketLike = {
  send(data: string): void;
  close(): void;
  addEventListener(type: string, cb: (ev: any) => void): void;
};

type WebSocketCtor = new (url: string) => WebSocketLike;

export class ConnectionFailed extends Error {}
export class VersionMismatch extends Error {}

export class Connection {
  welcome!: WelcomeMsg;
  private ws!: WebSocketLike;
  private queue: ServerMsg[] = [];
  private waiters: ((msg: ServerMsg) => void)[] = [];
  private closed = false;
  onMessage: ((msg: ServerMsg) => void) | null = null;

  static async open(url: string, ctor?: WebSocketCtor): Promise<Connection> {
    const conn = new Connection();
    const WS = ctor ?? (globalThis as any).WebSocket;
    if (!WS) throw new ConnectionFailed("no WebSocket implementation available");
    conn.ws = new WS(url);
    await new Promise<void>((resolve, reject) => {
      conn.ws.addEventListener("open", () => resolve());
      conn.ws.addEventListener("error", () =>
        reject(new ConnectionFailed(`cannot reach ${url}`)),
      );
    });
    conn.ws.addEventListener("message", (ev: any) => {
      const msg = JSON.parse(String(ev.data)) as ServerMsg;
      conn.onMessage?.(msg);
      const waiter = conn.waiters.shift();
      if (waiter) waiter(msg);
      else conn.queue.push(msg);
    });
    conn.ws.addEventListener("close", () => {
      conn.closed = true;
    });
    conn.send({ type: "hello", protocol_version: PROTOCOL_VERSION });
    const first = await conn.next();
    if (first.type === "error" && first.code === "version_mismatch") {
      throw new VersionMismatch(first.message);
    }
    if (first.type !== "welcome") {
      throw new ConnectionFailed(`expected welcome, got ${first.type}`);
    }
    conn.welcome = first;
    return conn;
  }

  send(msg: ClientMsg): void {
    this.ws.send(JSON.stringify(msg));
  }

  next(): Promise<ServerMsg> {
    const queued = this.queue.shift();
    if (queued) return Promise.resolve(queued);
    if (this.closed) return Promise.reject(new ConnectionFailed("connection closed"));
    return new Promise((resolve) => this.waiters.push(resolve));
  }

  sendInput(record: TraceRecordWire): void {
    this.send({ type: "input", record });
  }

  /** Request a snapshot and drain messages (in order) until it arrives. */
  async untilSnapshot(each?: (msg: ServerMsg) => void): Promise<SnapshotMsg> {
    this.send({ type: "snapshot_request" });
    for (;;) {
      const msg = await this.next();
      if (msg.type === "snapshot") return msg;
      each?.(msg);
    }
  }

  close(): void {
    this.ws.close();
  }
}
