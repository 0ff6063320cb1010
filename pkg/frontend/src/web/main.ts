/** Browser entry: wires controls, the stream client, and the painter. */

import { Dial, NdjsonClient } from "../ndjson.js";
import { VirtualOperator, PRESETS } from "../operator.js";
import { encodeInputFrame, parseStateLine } from "../protocol.js";
import { SceneModel } from "../scene.js";
import { Renderer } from "./renderer.js";

const UI_RATE_MS = 20;

// Receives the relayed engine stream via fetch; sends frames back as
// fire-and-forget POSTs. The bridge copies lines verbatim either way.
const httpDial: Dial = (handlers) => {
  const aborter = new AbortController();
  let open = true;
  (async () => {
    try {
      const res = await fetch("/stream", { signal: aborter.signal });
      if (!res.ok || !res.body) throw new Error(`stream ${res.status}`);
      handlers.onUp();
      const reader = res.body.getReader();
      const decoder = new TextDecoder();
      for (;;) {
        const { done, value } = await reader.read();
        if (done) break;
        handlers.onData(decoder.decode(value, { stream: true }));
      }
    } catch {
      /* fall through to onDown */
    }
    if (open) handlers.onDown();
  })();
  return {
    send: (data: string) => {
      void fetch("/frames", { method: "POST", body: data }).catch(() => {});
    },
    close: () => {
      open = false;
      aborter.abort();
    },
  };
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("scene");
const banner = el<HTMLDivElement>("banner");
const renderer = new Renderer(canvas);
const scene = new SceneModel();
const operator = new VirtualOperator();

const client = new NdjsonClient(httpDial, { retryMs: 1000 });
client.onLine = (line) => {
  const msg = parseStateLine(line);
  if (msg) scene.apply(msg);
};
client.onStatus = (status) => scene.setLink(status === "live");
client.start();

// finger sliders
const sliders: HTMLInputElement[] = [];
for (let i = 0; i < 5; i++) {
  const slider = el<HTMLInputElement>(`finger${i}`);
  slider.addEventListener("input", () => operator.setSlider(i, Number(slider.value)));
  sliders.push(slider);
}
for (const name of Object.keys(PRESETS)) {
  el<HTMLButtonElement>(`preset-${name}`).addEventListener("click", () => {
    operator.applyPreset(name);
    operator.sliders.forEach((v, i) => {
      const s = sliders[i];
      if (s) s.value = String(v);
    });
  });
}

// orientation widget
for (const axis of ["yaw", "pitch", "roll"] as const) {
  const knob = el<HTMLInputElement>(axis);
  knob.addEventListener("input", () => {
    operator[axis] = (Number(knob.value) * Math.PI) / 180;
  });
}

// hand drag: plane motion, shift for height
let dragging = false;
let lastX = 0;
let lastY = 0;
canvas.addEventListener("mousedown", (e) => {
  dragging = true;
  lastX = e.clientX;
  lastY = e.clientY;
});
window.addEventListener("mouseup", () => (dragging = false));
window.addEventListener("mousemove", (e) => {
  if (!dragging) return;
  const dx = (e.clientX - lastX) / 150;
  const dy = (e.clientY - lastY) / 150;
  lastX = e.clientX;
  lastY = e.clientY;
  if (e.shiftKey) operator.nudgeHand(0, 0, -dy);
  else operator.nudgeHand(dx, -dy, 0);
});
const NUDGE: Record<string, [number, number, number]> = {
  a: [-0.02, 0, 0], d: [0.02, 0, 0],
  w: [0, 0.02, 0], s: [0, -0.02, 0],
  q: [0, 0, 0.02], e: [0, 0, -0.02],
};
window.addEventListener("keydown", (e) => {
  const step = NUDGE[e.key];
  if (step) operator.nudgeHand(...step);
});

// emit frames at a fixed UI rate with monotonic stamps
setInterval(() => {
  const frame = operator.nextFrame(performance.now() / 1000);
  client.sendLine(encodeInputFrame(frame));
}, UI_RATE_MS);

function paint(): void {
  renderer.draw(scene);
  const b = scene.banner();
  banner.textContent = b.stale ? `${b.text} (stale)` : b.text;
  banner.style.backgroundColor = b.color;
  banner.style.opacity = b.stale ? "0.45" : "1.0";
  requestAnimationFrame(paint);
}
requestAnimationFrame(paint);
