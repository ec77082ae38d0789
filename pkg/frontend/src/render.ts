/**
 * Canvas views: top-down world, side elevation, velocity bars, and the
 * deadzone gauge that shows where the head sits relative to the
 * thresholds. Pure drawing; all numbers come from the reduced state.
 */

import { ConsoleState } from "./state.js";
import { Snapshot } from "./protocol.js";

const COLORS = {
  grid: "#2a2f3a",
  robot: "#6fd3ff",
  trail: "#3b6f8a",
  ee: "#ffd166",
  object: "#ff8fa3",
  attached: "#c3f584",
  region: "rgba(111, 211, 255, 0.15)",
  regionEdge: "#4b90b5",
  text: "#aab3c0",
  deadzone: "#394150",
  ramp: "#546074",
  bar: "#6fd3ff",
  warn: "#ff6b6b",
};

interface Camera {
  scale: number;
  cx: number;
  cy: number;
}

function worldToCanvas(cam: Camera, x: number, y: number): [number, number] {
  // World x east, y north; canvas y grows downward.
  return [cam.cx + x * cam.scale, cam.cy - y * cam.scale];
}

export function drawTopDown(canvas: HTMLCanvasElement, state: ConsoleState): void {
  const ctx = canvas.getContext("2d")!;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const cam: Camera = { scale: 90, cx: width * 0.25, cy: height * 0.55 };

  ctx.strokeStyle = COLORS.grid;
  ctx.lineWidth = 1;
  for (let gx = -2; gx <= 6; gx++) {
    const [px] = worldToCanvas(cam, gx, 0);
    ctx.beginPath(); ctx.moveTo(px, 0); ctx.lineTo(px, height); ctx.stroke();
  }
  for (let gy = -3; gy <= 3; gy++) {
    const [, py] = worldToCanvas(cam, 0, gy);
    ctx.beginPath(); ctx.moveTo(0, py); ctx.lineTo(width, py); ctx.stroke();
  }

  for (const region of state.scene?.regions ?? []) {
    const [x0, y0] = worldToCanvas(cam, region.min.x, region.max.y);
    const [x1, y1] = worldToCanvas(cam, region.max.x, region.min.y);
    ctx.fillStyle = COLORS.region;
    ctx.strokeStyle = COLORS.regionEdge;
    ctx.fillRect(x0, y0, x1 - x0, y1 - y0);
    ctx.strokeRect(x0, y0, x1 - x0, y1 - y0);
    ctx.fillStyle = COLORS.text;
    ctx.font = "11px sans-serif";
    ctx.fillText(region.name, x0 + 3, y0 + 12);
  }

  if (state.trail.length > 1) {
    ctx.strokeStyle = COLORS.trail;
    ctx.beginPath();
    state.trail.forEach((p, i) => {
      const [px, py] = worldToCanvas(cam, p.x, p.y);
      if (i === 0) ctx.moveTo(px, py); else ctx.lineTo(px, py);
    });
    ctx.stroke();
  }

  const snap = state.snapshot;
  if (!snap) return;

  for (const [id, pose] of snap.objects) {
    const [px, py] = worldToCanvas(cam, pose.x, pose.y);
    ctx.fillStyle = snap.held === id ? COLORS.attached : COLORS.object;
    ctx.beginPath();
    ctx.arc(px, py, 5, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = COLORS.text;
    ctx.font = "10px sans-serif";
    ctx.fillText(id, px + 7, py + 3);
  }

  const [bx, by] = worldToCanvas(cam, snap.x, snap.y);
  ctx.save();
  ctx.translate(bx, by);
  ctx.rotate(-snap.heading);
  ctx.fillStyle = COLORS.robot;
  ctx.fillRect(-14, -10, 28, 20);
  ctx.fillStyle = "#0d1117";
  ctx.beginPath();
  ctx.moveTo(14, 0); ctx.lineTo(6, -6); ctx.lineTo(6, 6);
  ctx.closePath(); ctx.fill();
  ctx.restore();

  const [ex, ey] = worldToCanvas(cam, snap.ee.x, snap.ee.y);
  ctx.strokeStyle = COLORS.ee;
  ctx.beginPath(); ctx.moveTo(bx, by); ctx.lineTo(ex, ey); ctx.stroke();
  ctx.fillStyle = COLORS.ee;
  ctx.beginPath(); ctx.arc(ex, ey, 4, 0, 2 * Math.PI); ctx.fill();
}

export function drawSideView(canvas: HTMLCanvasElement, state: ConsoleState): void {
  const ctx = canvas.getContext("2d")!;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const snap = state.snapshot;
  if (!snap) return;

  const floor = height - 18;
  const scale = (height - 40) / 1.3;
  ctx.strokeStyle = COLORS.grid;
  ctx.beginPath(); ctx.moveTo(0, floor); ctx.lineTo(width, floor); ctx.stroke();

  const mastX = 46;
  const liftY = floor - snap.lift * scale;
  ctx.strokeStyle = COLORS.robot;
  ctx.lineWidth = 4;
  ctx.beginPath(); ctx.moveTo(mastX, floor); ctx.lineTo(mastX, floor - 1.1 * scale - 6); ctx.stroke();
  ctx.beginPath(); ctx.moveTo(mastX - 26, floor); ctx.lineTo(mastX + 26, floor); ctx.stroke();

  const armLen = (0.2 + snap.armExt) * scale * 0.9;
  ctx.strokeStyle = COLORS.ee;
  ctx.beginPath(); ctx.moveTo(mastX, liftY); ctx.lineTo(mastX + armLen, liftY); ctx.stroke();

  const gap = 4 + snap.grip * 12;
  ctx.lineWidth = 3;
  ctx.beginPath();
  ctx.moveTo(mastX + armLen, liftY - gap); ctx.lineTo(mastX + armLen + 12, liftY - gap);
  ctx.moveTo(mastX + armLen, liftY + gap); ctx.lineTo(mastX + armLen + 12, liftY + gap);
  ctx.stroke();
  ctx.lineWidth = 1;

  ctx.fillStyle = COLORS.text;
  ctx.font = "11px sans-serif";
  ctx.fillText(`lift ${snap.lift.toFixed(2)} m`, width - 110, 16);
  ctx.fillText(`arm ${snap.armExt.toFixed(2)} m`, width - 110, 30);
  ctx.fillText(`grip ${(snap.grip * 100).toFixed(0)}%`, width - 110, 44);
  if (snap.held) {
    ctx.fillStyle = COLORS.attached;
    ctx.fillText(`holding ${snap.held}`, width - 110, 58);
  }
}

const BAR_ACTUATORS = ["base_translate", "base_rotate", "lift", "arm_extend",
                       "wrist_pitch", "wrist_yaw", "gripper"];

export function drawVelocityBars(canvas: HTMLCanvasElement,
                                 state: ConsoleState, nowMs: number): void {
  const ctx = canvas.getContext("2d")!;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const snap = state.snapshot;
  const rowH = height / BAR_ACTUATORS.length;
  const mid = width * 0.62;
  const clampFresh = nowMs - state.clampedAtMs < 600;
  BAR_ACTUATORS.forEach((name, i) => {
    const y = i * rowH;
    const v = snap?.velocities.get(name) ?? 0;
    ctx.fillStyle = COLORS.text;
    ctx.font = "10px sans-serif";
    ctx.fillText(name, 4, y + rowH * 0.65);
    ctx.strokeStyle = COLORS.grid;
    ctx.strokeRect(mid - 60, y + 2, 120, rowH - 4);
    const clamped = clampFresh && state.clamped.includes(name);
    ctx.fillStyle = clamped ? COLORS.warn : COLORS.bar;
    const extent = Math.max(-1, Math.min(1, v / 1.0)) * 58;
    ctx.fillRect(mid, y + 4, extent, rowH - 8);
  });
}

/** Deadzone gauge: where each head axis sits relative to the thresholds. */
export function drawDeadzoneGauge(canvas: HTMLCanvasElement,
                                  state: ConsoleState): void {
  const ctx = canvas.getContext("2d")!;
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const snap = state.snapshot;
  const axes: Array<[string, number | null]> = [
    ["roll", snap?.rollDelta ?? null],
    ["pitch", snap?.pitchDelta ?? null],
  ];
  const rowH = height / axes.length;
  const half = width * 0.42;
  const mid = width * 0.55;
  const degToPx = half / 60;
  axes.forEach(([label, delta], i) => {
    const cy = i * rowH + rowH / 2;
    ctx.fillStyle = COLORS.ramp;
    ctx.fillRect(mid - 45 * degToPx, cy - 7, 90 * degToPx, 14);
    ctx.fillStyle = COLORS.deadzone;
    ctx.fillRect(mid - 15 * degToPx, cy - 7, 30 * degToPx, 14);
    ctx.fillStyle = COLORS.text;
    ctx.font = "11px sans-serif";
    ctx.fillText(label, 4, cy + 4);
    for (const t of [-45, -15, 15, 45]) {
      ctx.fillRect(mid + t * degToPx, cy - 9, 1, 18);
    }
    if (delta !== null) {
      const clampedDelta = Math.max(-60, Math.min(60, delta));
      ctx.fillStyle = Math.abs(delta) < 15 ? COLORS.text : COLORS.ee;
      ctx.beginPath();
      ctx.arc(mid + clampedDelta * degToPx, cy, 5, 0, 2 * Math.PI);
      ctx.fill();
    }
  });
}

export function statusLine(state: ConsoleState): string {
  if (!state.connected) return "disconnected - motion stopped";
  const phase = state.phase === "active"
    ? `mode: ${state.mode}` : "uncalibrated - shake, then say start";
  const listening = state.awaiting ? " | listening..." : "";
  const success = state.success ? " | TASK COMPLETE" : "";
  return `${phase}${listening}${success}`;
}

export function describeSnapshot(snap: Snapshot | null): string {
  if (!snap) return "";
  return `base (${snap.x.toFixed(2)}, ${snap.y.toFixed(2)}) ` +
         `heading ${(snap.heading * 180 / Math.PI).toFixed(0)} deg`;
}
