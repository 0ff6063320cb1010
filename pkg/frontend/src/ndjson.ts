/** Newline-delimited JSON connection handling, transport-agnostic. */

export class LineSplitter {
  private buf = "";

  /** Feed a chunk, get back every complete line it finished. */
  push(chunk: string): string[] {
    this.buf += chunk;
    const parts = this.buf.split("\n");
    this.buf = parts.pop() ?? "";
    return parts.filter((p) => p.length > 0);
  }
}

export interface Connection {
  send(data: string): void;
  close(): void;
}

export interface DialHandlers {
  onUp: () => void;
  onData: (chunk: string) => void;
  onDown: () => void;
}

export type Dial = (handlers: DialHandlers) => Connection;

export type ClientStatus = "idle" | "connecting" | "live" | "retrying";

export interface ClientOptions {
  retryMs?: number;
  schedule?: (fn: () => void, ms: number) => unknown;
  cancel?: (handle: unknown) => void;
}

/**
 * Keeps one NDJSON connection alive, redialing after it drops.
 * Lines are delivered in arrival order; sends while down are dropped
 * and reported, never queued (stale operator input must not burst out
 * after a reconnect).
 */
export class NdjsonClient {
  status: ClientStatus = "idle";
  droppedSends = 0;
  onLine: (line: string) => void = () => {};
  onStatus: (status: ClientStatus) => void = () => {};

  private conn: Connection | null = null;
  private splitter = new LineSplitter();
  private timer: unknown = null;
  private stopped = false;
  private readonly retryMs: number;
  private readonly schedule: (fn: () => void, ms: number) => unknown;
  private readonly cancelTimer: (handle: unknown) => void;

  constructor(private dial: Dial, opts: ClientOptions = {}) {
    this.retryMs = opts.retryMs ?? 500;
    this.schedule = opts.schedule ?? ((fn, ms) => setTimeout(fn, ms));
    this.cancelTimer = opts.cancel ?? ((h) => clearTimeout(h as never));
  }

  start(): void {
    this.stopped = false;
    this.connect();
  }

  stop(): void {
    this.stopped = true;
    if (this.timer !== null) {
      this.cancelTimer(this.timer);
      this.timer = null;
    }
    if (this.conn) {
      this.conn.close();
      this.conn = null;
    }
    this.setStatus("idle");
  }

  sendLine(line: string): boolean {
    if (this.status !== "live" || !this.conn) {
      this.droppedSends += 1;
      return false;
    }
    this.conn.send(line + "\n");
    return true;
  }

  private setStatus(s: ClientStatus): void {
    if (s !== this.status) {
      this.status = s;
      this.onStatus(s);
    }
  }

  private connect(): void {
    this.splitter = new LineSplitter();
    this.setStatus("connecting");
    this.conn = this.dial({
      onUp: () => this.setStatus("live"),
      onData: (chunk) => {
        for (const line of this.splitter.push(chunk)) this.onLine(line);
      },
      onDown: () => {
        this.conn = null;
        if (this.stopped) return;
        this.setStatus("retrying");
        this.timer = this.schedule(() => {
          this.timer = null;
          if (!this.stopped) this.connect();
        }, this.retryMs);
      },
    });
  }
}
