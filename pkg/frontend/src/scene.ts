/**
 * View-side model of the cockpit. It holds exactly two things: the
 * latest state message and whether the link is up. Every displayed
 * quantity comes out of that message; no control math happens here.
 */

import { Quat, StateMsg, Vec3 } from "./protocol.js";

export interface Banner {
  text: string;
  /** CSS color string for the banner background. */
  color: string;
  stale: boolean;
}

export function rgb(color: [number, number, number]): string {
  return `rgb(${color[0]},${color[1]},${color[2]})`;
}

/** Rotate a vector by a scalar-first unit quaternion. */
export function quatRotate(q: Quat, v: Vec3): Vec3 {
  const [w, x, y, z] = q;
  const [vx, vy, vz] = v;
  // t = 2 q_vec x v, v' = v + w t + q_vec x t
  const tx = 2 * (y * vz - z * vy);
  const ty = 2 * (z * vx - x * vz);
  const tz = 2 * (x * vy - y * vx);
  return [
    vx + w * tx + y * tz - z * ty,
    vy + w * ty + z * tx - x * tz,
    vz + w * tz + x * ty - y * tx,
  ];
}

export class SceneModel {
  latest: StateMsg | null = null;
  linkUp = false;
  received = 0;

  apply(msg: StateMsg): void {
    this.latest = msg;
    this.received += 1;
  }

  setLink(up: boolean): void {
    this.linkUp = up;
  }

  /** Banner text/color mirror the latest message, greyed while stale. */
  banner(): Banner {
    if (this.latest === null) {
      return { text: "waiting for stream", color: "rgb(80,80,80)", stale: true };
    }
    return {
      text: this.latest.mode_name,
      color: rgb(this.latest.color),
      stale: !this.linkUp,
    };
  }

  /** The polar ray to draw, or null outside radial flight. */
  polarRay(): { from: Vec3; to: Vec3 } | null {
    const msg = this.latest;
    if (!msg || msg.zones.r === null || msg.mode_name !== "Spherical") return null;
    const [sx, sy, sz] = msg.shoulder;
    const [hx, hy, hz] = msg.hand.position;
    const d: Vec3 = [hx - sx, hy - sy, hz - sz];
    const n = Math.hypot(...d);
    if (n === 0) return null;
    const r = msg.zones.r;
    return {
      from: msg.shoulder,
      to: [sx + (d[0] / n) * r, sy + (d[1] / n) * r, sz + (d[2] / n) * r],
    };
  }

  /** Wrist origin and stop-zone radius, drawn only in step-wise flight. */
  stopZone(): { center: Vec3; radius: number } | null {
    const msg = this.latest;
    if (!msg || msg.mode_name !== "Cartesian") return null;
    return { center: msg.zones.p_j, radius: msg.zones.d_threshold };
  }
}
