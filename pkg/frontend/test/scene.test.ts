import { describe, expect, it } from "vitest";
import { StateMsg } from "../src/protocol.js";
import { SceneModel, quatRotate, rgb } from "../src/scene.js";

function msg(overrides: Partial<StateMsg> = {}): StateMsg {
  return {
    type: "state",
    schema_version: 1,
    tick: 0,
    robot: { position: [1, 0, 1.4], orientation: [1, 0, 0, 0] },
    command: { position: [1, 0, 1.4], orientation: [1, 0, 0, 0] },
    hand: { position: [0.35, 0, 1.4], orientation: [1, 0, 0, 0] },
    shoulder: [0, 0, 1.4],
    mode_name: "Operation",
    color: [0, 200, 83],
    zones: {
      r: null,
      r_min: 0.5,
      r_max: 5,
      d_min: 0.25,
      d_max: 0.45,
      p_j: [0.3, 0, 1.4],
      d_threshold: 0.15,
    },
    ...overrides,
  };
}

describe("SceneModel", () => {
  it("banner always mirrors the latest message", () => {
    const scene = new SceneModel();
    expect(scene.banner().stale).toBe(true);
    scene.setLink(true);
    scene.apply(msg());
    expect(scene.banner()).toEqual({ text: "Operation", color: "rgb(0,200,83)", stale: false });
    scene.apply(msg({ mode_name: "Locking", color: [229, 57, 53], tick: 7 }));
    expect(scene.banner().text).toBe("Locking");
    expect(scene.banner().color).toBe("rgb(229,57,53)");
    expect(scene.received).toBe(2);
  });

  it("greys out when the link drops but keeps the last state", () => {
    const scene = new SceneModel();
    scene.setLink(true);
    scene.apply(msg({ tick: 3 }));
    scene.setLink(false);
    expect(scene.banner().stale).toBe(true);
    expect(scene.latest!.tick).toBe(3);
  });

  it("draws the polar ray only in radial flight, scaled to r", () => {
    const scene = new SceneModel();
    scene.apply(msg());
    expect(scene.polarRay()).toBeNull(); // no radial state yet
    scene.apply(
      msg({
        mode_name: "Spherical",
        zones: { ...msg().zones, r: 2 },
        hand: { position: [0.4, 0, 1.4], orientation: [1, 0, 0, 0] },
      }),
    );
    const ray = scene.polarRay()!;
    expect(ray.from).toEqual([0, 0, 1.4]);
    expect(ray.to[0]).toBeCloseTo(2, 12);
    expect(ray.to[2]).toBeCloseTo(1.4, 12);
  });

  it("exposes the stop zone only in step-wise flight", () => {
    const scene = new SceneModel();
    scene.apply(msg());
    expect(scene.stopZone()).toBeNull();
    scene.apply(msg({ mode_name: "Cartesian" }));
    expect(scene.stopZone()).toEqual({ center: [0.3, 0, 1.4], radius: 0.15 });
  });
});

describe("quatRotate", () => {
  it("rotates a vector by 90 degrees about z", () => {
    const q: [number, number, number, number] = [Math.SQRT1_2, 0, 0, Math.SQRT1_2];
    const [x, y, z] = quatRotate(q, [1, 0, 0]);
    expect(x).toBeCloseTo(0, 12);
    expect(y).toBeCloseTo(1, 12);
    expect(z).toBeCloseTo(0, 12);
  });

  it("identity leaves vectors alone and rgb formats css", () => {
    expect(quatRotate([1, 0, 0, 0], [0.3, -0.2, 0.9])).toEqual([0.3, -0.2, 0.9]);
    expect(rgb([251, 140, 0])).toBe("rgb(251,140,0)");
  });
});
