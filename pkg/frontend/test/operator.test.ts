import { describe, expect, it } from "vitest";
import { PRESETS, VirtualOperator, quatFromEuler } from "../src/operator.js";
import { encodeInputFrame } from "../src/protocol.js";

describe("VirtualOperator", () => {
  it("stamps strictly monotonic times even when the clock misbehaves", () => {
    const op = new VirtualOperator();
    const stamps = [0.1, 0.2, 0.2, 0.15, 0.3].map((now) => op.nextFrame(now).t);
    for (let i = 1; i < stamps.length; i++) {
      expect(stamps[i]!).toBeGreaterThan(stamps[i - 1]!);
    }
    expect(stamps[4]).toBe(0.3); // a healthy clock passes through untouched
  });

  it("maps sliders linearly onto knuckle values", () => {
    const op = new VirtualOperator();
    op.setSlider(0, 0);
    op.setSlider(1, 25);
    op.setSlider(2, 50);
    op.setSlider(3, 75);
    op.setSlider(4, 100);
    expect(op.knuckles()).toEqual([0, 0.25, 0.5, 0.75, 1]);
    op.setSlider(0, 250);
    expect(op.knuckles()[0]).toBe(1); // clamped
    expect(() => op.setSlider(5, 10)).toThrow();
  });

  it("presets put every finger hard against its threshold side", () => {
    const op = new VirtualOperator();
    op.applyPreset("fist");
    expect(op.knuckles()).toEqual([1, 1, 1, 1, 1]);
    op.applyPreset("point");
    expect(op.knuckles()).toEqual([1, 0, 1, 1, 1]);
    expect(() => op.applyPreset("wave")).toThrow();
    expect(Object.keys(PRESETS)).toContain("two");
  });

  it("emits frames the encoder accepts, with unit quaternions", () => {
    const op = new VirtualOperator();
    op.nudgeHand(0.1, -0.05, 0.2);
    op.rotate(0.5, -0.3, 1.1);
    const frame = op.nextFrame(2.0);
    expect(() => encodeInputFrame(frame)).not.toThrow();
    const [w, x, y, z] = frame.hand_quat;
    expect(Math.hypot(w, x, y, z)).toBeCloseTo(1, 12);
    expect(frame.hand_pos[0]).toBeCloseTo(0.45, 12);
    expect(frame.hand_pos[1]).toBeCloseTo(-0.05, 12);
    expect(frame.hand_pos[2]).toBeCloseTo(1.6, 12);
  });

  it("euler conversion matches the axis-angle special cases", () => {
    const halfPi = Math.PI / 2;
    const [w, , y] = [quatFromEuler(0, halfPi, 0)[0], 0, quatFromEuler(0, halfPi, 0)[2]];
    expect(w).toBeCloseTo(Math.SQRT1_2, 12);
    expect(y).toBeCloseTo(Math.SQRT1_2, 12);
    const yaw = quatFromEuler(halfPi, 0, 0);
    expect(yaw[0]).toBeCloseTo(Math.SQRT1_2, 12);
    expect(yaw[3]).toBeCloseTo(Math.SQRT1_2, 12);
  });
});
