/** Wire schema shared with the engine gateway (newline-delimited JSON). */

export const SCHEMA_VERSION = 1;

export type Vec3 = [number, number, number];
export type Quat = [number, number, number, number]; // scalar first

export interface PoseMsg {
  position: Vec3;
  orientation: Quat;
}

export interface ZoneMsg {
  r: number | null;
  r_min: number;
  r_max: number;
  d_min: number;
  d_max: number;
  p_j: Vec3;
  d_threshold: number;
}

export interface StateMsg {
  type: "state";
  schema_version: number;
  tick: number;
  robot: PoseMsg;
  command: PoseMsg;
  hand: PoseMsg;
  shoulder: Vec3;
  mode_name: string;
  color: [number, number, number];
  zones: ZoneMsg;
}

export interface InputFrameMsg {
  schema_version: number;
  t: number;
  hand_pos: Vec3;
  hand_quat: Quat;
  shoulder_pos: Vec3;
  knuckles: number[];
}

function finiteArray(v: unknown, n: number | null): number[] | null {
  if (!Array.isArray(v)) return null;
  if (n !== null && v.length !== n) return null;
  if (n === null && v.length === 0) return null;
  for (const x of v) {
    if (typeof x !== "number" || !Number.isFinite(x)) return null;
  }
  return v as number[];
}

function pose(v: unknown): PoseMsg | null {
  if (typeof v !== "object" || v === null) return null;
  const o = v as Record<string, unknown>;
  const position = finiteArray(o.position, 3);
  const orientation = finiteArray(o.orientation, 4);
  if (!position || !orientation) return null;
  return { position: position as Vec3, orientation: orientation as Quat };
}

/** Parse one stream line into a StateMsg, or null if it is not one. */
export function parseStateLine(line: string): StateMsg | null {
  let doc: unknown;
  try {
    doc = JSON.parse(line);
  } catch {
    return null;
  }
  if (typeof doc !== "object" || doc === null) return null;
  const o = doc as Record<string, unknown>;
  if (o.type !== "state" || o.schema_version !== SCHEMA_VERSION) return null;
  const robot = pose(o.robot);
  const command = pose(o.command);
  const hand = pose(o.hand);
  const shoulder = finiteArray(o.shoulder, 3);
  const color = finiteArray(o.color, 3);
  if (!robot || !command || !hand || !shoulder || !color) return null;
  if (typeof o.tick !== "number" || typeof o.mode_name !== "string") return null;
  const z = o.zones;
  if (typeof z !== "object" || z === null) return null;
  const zo = z as Record<string, unknown>;
  const p_j = finiteArray(zo.p_j, 3);
  if (!p_j) return null;
  for (const k of ["r_min", "r_max", "d_min", "d_max", "d_threshold"]) {
    if (typeof zo[k] !== "number") return null;
  }
  if (zo.r !== null && typeof zo.r !== "number") return null;
  return {
    type: "state",
    schema_version: SCHEMA_VERSION,
    tick: o.tick,
    robot,
    command,
    hand,
    shoulder: shoulder as Vec3,
    mode_name: o.mode_name,
    color: color as [number, number, number],
    zones: {
      r: zo.r as number | null,
      r_min: zo.r_min as number,
      r_max: zo.r_max as number,
      d_min: zo.d_min as number,
      d_max: zo.d_max as number,
      p_j: p_j as Vec3,
      d_threshold: zo.d_threshold as number,
    },
  };
}

/**
 * Serialize an input frame for the gateway. Refuses frames the gateway
 * would drop (non-finite values, unnormalizable quaternion), so a bug
 * in the controls surfaces here instead of as silent packet loss.
 */
export function encodeInputFrame(msg: InputFrameMsg): string {
  const flat = [msg.t, ...msg.hand_pos, ...msg.hand_quat, ...msg.shoulder_pos, ...msg.knuckles];
  if (!flat.every(Number.isFinite)) {
    throw new Error("input frame contains non-finite values");
  }
  const [w, x, y, z] = msg.hand_quat;
  if (Math.hypot(w, x, y, z) <= 1e-6) {
    throw new Error("hand_quat is not normalizable");
  }
  if (msg.knuckles.length === 0) {
    throw new Error("knuckles must not be empty");
  }
  return JSON.stringify({
    schema_version: SCHEMA_VERSION,
    t: msg.t,
    hand_pos: msg.hand_pos,
    hand_quat: msg.hand_quat,
    shoulder_pos: msg.shoulder_pos,
    knuckles: msg.knuckles,
  });
}
