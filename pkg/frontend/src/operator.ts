/**
 * The virtual operator: a desk-scale stand-in for motion capture and a
 * data glove. Holds hand pose + finger slider state and stamps frames
 * with strictly monotonic timestamps regardless of UI clock jitter.
 */

import { InputFrameMsg, Quat, SCHEMA_VERSION, Vec3 } from "./protocol.js";

export const FINGER_COUNT = 5;

// Flexion percent per finger for the one-click gesture buttons. Values
// sit hard against the slider ends so threshold configs stay satisfied.
export const PRESETS: Record<string, number[]> = {
  fist: [100, 100, 100, 100, 100],
  open: [0, 0, 0, 0, 0],
  point: [100, 0, 100, 100, 100],
  two: [100, 0, 0, 100, 100],
  neutral: [50, 50, 50, 50, 50],
};

export function quatFromEuler(yaw: number, pitch: number, roll: number): Quat {
  const cy = Math.cos(yaw / 2), sy = Math.sin(yaw / 2);
  const cp = Math.cos(pitch / 2), sp = Math.sin(pitch / 2);
  const cr = Math.cos(roll / 2), sr = Math.sin(roll / 2);
  return [
    cy * cp * cr + sy * sp * sr,
    cy * cp * sr - sy * sp * cr,
    cy * sp * cr + sy * cp * sr,
    sy * cp * cr - cy * sp * sr,
  ];
}

export class VirtualOperator {
  handPos: Vec3 = [0.35, 0.0, 1.4];
  shoulder: Vec3 = [0.0, 0.0, 1.4];
  yaw = 0;
  pitch = 0;
  roll = 0;
  /** Flexion sliders, 0 (straight) to 100 (curled). */
  sliders: number[] = [...(PRESETS.neutral as number[])];

  private lastT = -Infinity;

  setSlider(finger: number, percent: number): void {
    if (finger < 0 || finger >= FINGER_COUNT) {
      throw new Error(`no finger ${finger}`);
    }
    this.sliders[finger] = Math.min(100, Math.max(0, percent));
  }

  applyPreset(name: string): void {
    const values = PRESETS[name];
    if (!values) throw new Error(`unknown preset ${name}`);
    this.sliders = [...values];
  }

  nudgeHand(dx: number, dy: number, dz: number): void {
    this.handPos = [this.handPos[0] + dx, this.handPos[1] + dy, this.handPos[2] + dz];
  }

  rotate(dyaw: number, dpitch: number, droll: number): void {
    this.yaw += dyaw;
    this.pitch += dpitch;
    this.roll += droll;
  }

  /** Percent sliders map linearly onto [0, 1] knuckle stretch values. */
  knuckles(): number[] {
    return this.sliders.map((s) => s / 100);
  }

  nextFrame(now: number): InputFrameMsg {
    // a UI clock that stalls or steps back must not produce frames the
    // engine would drop as out of order
    const t = now > this.lastT ? now : this.lastT + 1e-4;
    this.lastT = t;
    return {
      schema_version: SCHEMA_VERSION,
      t,
      hand_pos: [...this.handPos] as Vec3,
      hand_quat: quatFromEuler(this.yaw, this.pitch, this.roll),
      shoulder_pos: [...this.shoulder] as Vec3,
      knuckles: this.knuckles(),
    };
  }
}
