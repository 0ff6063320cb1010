import { describe, expect, it } from "vitest";
import { Connection, DialHandlers, LineSplitter, NdjsonClient } from "../src/ndjson.js";

describe("LineSplitter", () => {
  it("reassembles lines across arbitrary chunk boundaries", () => {
    const s = new LineSplitter();
    const out: string[] = [];
    for (const chunk of ['{"a"', ":1}\n{\"b\":2}\n{", '"c":', "3}\n"]) {
      out.push(...s.push(chunk));
    }
    expect(out).toEqual(['{"a":1}', '{"b":2}', '{"c":3}']);
  });

  it("drops blank lines and keeps the tail buffered", () => {
    const s = new LineSplitter();
    expect(s.push("\n\nhello")).toEqual([]);
    expect(s.push(" world\n")).toEqual(["hello world"]);
  });
});

class FakeWire {
  handlers: DialHandlers | null = null;
  sent: string[] = [];
  dials = 0;

  dial = (handlers: DialHandlers): Connection => {
    this.dials += 1;
    this.handlers = handlers;
    return {
      send: (data: string) => this.sent.push(data),
      close: () => {},
    };
  };
}

describe("NdjsonClient", () => {
  it("delivers lines and redials after a drop", () => {
    const wire = new FakeWire();
    const timers: (() => void)[] = [];
    const client = new NdjsonClient(wire.dial, {
      retryMs: 10,
      schedule: (fn) => (timers.push(fn), timers.length),
      cancel: () => {},
    });
    const lines: string[] = [];
    client.onLine = (l) => lines.push(l);

    client.start();
    expect(client.status).toBe("connecting");
    wire.handlers!.onUp();
    expect(client.status).toBe("live");
    wire.handlers!.onData('{"tick":1}\n{"ti');
    wire.handlers!.onData('ck":2}\n');
    expect(lines).toEqual(['{"tick":1}', '{"tick":2}']);

    wire.handlers!.onDown();
    expect(client.status).toBe("retrying");
    expect(wire.dials).toBe(1);
    timers.shift()!(); // the retry timer fires
    expect(wire.dials).toBe(2);
    wire.handlers!.onUp();
    expect(client.status).toBe("live");
  });

  it("drops sends while down instead of queueing stale input", () => {
    const wire = new FakeWire();
    const client = new NdjsonClient(wire.dial, { retryMs: 10, schedule: () => 0, cancel: () => {} });
    client.start(); // connecting, not yet up
    expect(client.sendLine("x")).toBe(false);
    wire.handlers!.onUp();
    expect(client.sendLine("y")).toBe(true);
    expect(wire.sent).toEqual(["y\n"]);
    expect(client.droppedSends).toBe(1);
  });

  it("does not redial after stop()", () => {
    const wire = new FakeWire();
    const timers: (() => void)[] = [];
    const client = new NdjsonClient(wire.dial, {
      retryMs: 10,
      schedule: (fn) => (timers.push(fn), timers.length),
      cancel: () => {},
    });
    client.start();
    wire.handlers!.onUp();
    client.stop();
    wire.handlers!.onDown();
    expect(timers).toHaveLength(0);
    expect(wire.dials).toBe(1);
    expect(client.status).toBe("idle");
  });
});
