/** Canvas scene painter: fixed oblique projection, no camera controls. */

import { Quat, StateMsg, Vec3 } from "../protocol.js";
import { SceneModel, quatRotate, rgb } from "../scene.js";

const AZIMUTH = -0.6;
const ELEVATION = 0.42;
const SCALE = 150; // px per metre

// Scenery only: marks where the practice valve would hang. Not a
// telemetry quantity, so it lives here and not in the scene model.
const VALVE_PROP: Vec3 = [3.6, 0.0, 1.4];

export class Renderer {
  private ctx: CanvasRenderingContext2D;

  constructor(private canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (!ctx) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
  }

  private project(p: Vec3): [number, number] {
    const ca = Math.cos(AZIMUTH), sa = Math.sin(AZIMUTH);
    const ce = Math.cos(ELEVATION), se = Math.sin(ELEVATION);
    const x = p[0] * ca - p[1] * sa;
    const y = p[0] * sa + p[1] * ca;
    const u = x;
    const v = y * se - p[2] * ce;
    return [this.canvas.width * 0.28 + u * SCALE, this.canvas.height * 0.78 + v * SCALE];
  }

  private line(a: Vec3, b: Vec3, style: string, width = 1.5): void {
    const [ax, ay] = this.project(a);
    const [bx, by] = this.project(b);
    this.ctx.strokeStyle = style;
    this.ctx.lineWidth = width;
    this.ctx.beginPath();
    this.ctx.moveTo(ax, ay);
    this.ctx.lineTo(bx, by);
    this.ctx.stroke();
  }

  private dot(p: Vec3, style: string, radius = 4): void {
    const [x, y] = this.project(p);
    this.ctx.fillStyle = style;
    this.ctx.beginPath();
    this.ctx.arc(x, y, radius, 0, 2 * Math.PI);
    this.ctx.fill();
  }

  private circleXY(center: Vec3, radius: number, style: string): void {
    this.ctx.strokeStyle = style;
    this.ctx.lineWidth = 1;
    this.ctx.beginPath();
    for (let i = 0; i <= 24; i++) {
      const a = (i / 24) * 2 * Math.PI;
      const p: Vec3 = [center[0] + radius * Math.cos(a), center[1] + radius * Math.sin(a), center[2]];
      const [x, y] = this.project(p);
      if (i === 0) this.ctx.moveTo(x, y);
      else this.ctx.lineTo(x, y);
    }
    this.ctx.stroke();
  }

  private triad(origin: Vec3, q: Quat, size: number): void {
    const axes: [Vec3, string][] = [
      [[size, 0, 0], "#e05555"],
      [[0, size, 0], "#4fae4f"],
      [[0, 0, size], "#5577e0"],
    ];
    for (const [axis, color] of axes) {
      const tip = quatRotate(q, axis);
      this.line(origin, [origin[0] + tip[0], origin[1] + tip[1], origin[2] + tip[2]], color, 2);
    }
  }

  private robotBody(msg: StateMsg): void {
    const { position, orientation } = msg.robot;
    const s = 0.16;
    const corners: Vec3[] = [];
    for (const dx of [-s, s])
      for (const dy of [-s, s])
        for (const dz of [-0.05, 0.05]) {
          const r = quatRotate(orientation, [dx, dy, dz]);
          corners.push([position[0] + r[0], position[1] + r[1], position[2] + r[2]]);
        }
    const edges: [number, number][] = [
      [0, 1], [2, 3], [4, 5], [6, 7],
      [0, 2], [1, 3], [4, 6], [5, 7],
      [0, 4], [1, 5], [2, 6], [3, 7],
    ];
    for (const [a, b] of edges) this.line(corners[a] as Vec3, corners[b] as Vec3, "#cfd8e3", 1.2);
    // fork effector marker on the body's +z face
    const fork = quatRotate(orientation, [0, 0, 0.22]);
    this.line(position, [position[0] + fork[0], position[1] + fork[1], position[2] + fork[2]], "#f2c14e", 3);
    this.triad(position, orientation, 0.3);
  }

  private grid(): void {
    for (let i = -1; i <= 6; i++) {
      this.line([i, -2, 0], [i, 4, 0], "#20262e", 1);
      this.line([-1, i - 1, 0], [6, i - 1, 0], "#20262e", 1);
    }
  }

  draw(scene: SceneModel): void {
    const { ctx, canvas } = this;
    ctx.fillStyle = "#11151a";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    this.grid();
    this.dot(VALVE_PROP, "#8a6ad1", 5);

    const msg = scene.latest;
    if (!msg) return;

    this.dot(msg.shoulder, "#d0d0d0", 5);
    this.triad(msg.hand.position, msg.hand.orientation, 0.18);
    this.dot(msg.command.position, rgb(msg.color), 3);
    this.robotBody(msg);

    const ray = scene.polarRay();
    if (ray) {
      this.line(ray.from, ray.to, "#3aa0ff", 1.5);
      this.circleXY(ray.from, msg.zones.d_min, "#2a6");
      this.circleXY(ray.from, msg.zones.d_max, "#a62");
    }
    const zone = scene.stopZone();
    if (zone) {
      this.dot(zone.center, "#ffa24b", 3);
      this.circleXY(zone.center, zone.radius, "#ffa24b");
    }
    if (scene.banner().stale) {
      ctx.fillStyle = "rgba(40,40,40,0.55)";
      ctx.fillRect(0, 0, canvas.width, canvas.height);
    }
  }
}
