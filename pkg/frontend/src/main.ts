/**
 * Console wiring: one websocket, a 20 Hz sender loop, and a render loop
 * driven by animation frames. All control logic stays server-side; this
 * file only moves messages and pixels.
 */

import { encodeToken, RESET_MESSAGE } from "./protocol.js";
import { TiltPad } from "./tiltpad.js";
import { FrameStreamer, STREAM_INTERVAL_MS } from "./streamer.js";
import { applyMessage, initialState, noteTokenSent } from "./state.js";
import {
  describeSnapshot, drawDeadzoneGauge, drawSideView, drawTopDown,
  drawVelocityBars, statusLine,
} from "./render.js";

const state = initialState();
const pad = new TiltPad(
  document.getElementById("pad")!,
  document.getElementById("pad-knob")!,
);

const wsUrl = `ws://${location.host || "127.0.0.1:8765"}/ws`;
let ws: WebSocket | null = null;
let streamer: FrameStreamer | null = null;
let sender: number | null = null;

function connect(): void {
  ws = new WebSocket(wsUrl);
  ws.binaryType = "arraybuffer";
  ws.onopen = () => {
    state.connected = true;
    streamer = new FrameStreamer(performance.now());
    sender = window.setInterval(() => {
      if (ws?.readyState === WebSocket.OPEN) {
        ws.send(streamer!.next(performance.now(), pad.state));
      }
    }, STREAM_INTERVAL_MS);
  };
  ws.onmessage = (event: MessageEvent) => {
    if (typeof event.data === "string") {
      try {
        applyMessage(state, event.data, performance.now());
      } catch (err) {
        console.error("bad server message", err);
      }
    }
  };
  ws.onclose = () => {
    state.connected = false;
    if (sender !== null) window.clearInterval(sender);
    sender = null;
    setTimeout(connect, 1000);  // reconnect; server state is authoritative
  };
  ws.onerror = () => ws?.close();
}

function sendToken(value: string): void {
  if (ws?.readyState !== WebSocket.OPEN) return;
  streamer?.cancelShake();
  noteTokenSent(state, value);
  ws.send(encodeToken(value));
}

document.getElementById("btn-shake")!.addEventListener("click", () => {
  streamer?.beginShake(performance.now());
});
for (const [id, token] of [
  ["btn-start", "start"],
  ["btn-drive", "switch to drive"],
  ["btn-arm", "switch to arm"],
  ["btn-wrist", "switch to wrist"],
  ["btn-gripper", "switch to gripper"],
] as Array<[string, string]>) {
  document.getElementById(id)!.addEventListener("click", () => sendToken(token));
}
document.getElementById("btn-reset")!.addEventListener("click", () => {
  if (ws?.readyState === WebSocket.OPEN) ws.send(RESET_MESSAGE);
});

const topCanvas = document.getElementById("top-view") as HTMLCanvasElement;
const sideCanvas = document.getElementById("side-view") as HTMLCanvasElement;
const barsCanvas = document.getElementById("velocity-bars") as HTMLCanvasElement;
const gaugeCanvas = document.getElementById("deadzone-gauge") as HTMLCanvasElement;
const statusEl = document.getElementById("status")!;
const poseEl = document.getElementById("pose")!;
const confirmEl = document.getElementById("confirmations")!;
const sceneEl = document.getElementById("scene-label")!;

function render(): void {
  const now = performance.now();
  drawTopDown(topCanvas, state);
  drawSideView(sideCanvas, state);
  drawVelocityBars(barsCanvas, state, now);
  drawDeadzoneGauge(gaugeCanvas, state);
  statusEl.textContent = statusLine(state);
  statusEl.classList.toggle("stopped", !state.connected);
  statusEl.classList.toggle("success", state.success);
  poseEl.textContent = describeSnapshot(state.snapshot);
  sceneEl.textContent = state.scene
    ? `scenario: ${state.scene.scenario} (${state.scene.success})` : "";
  confirmEl.innerHTML = state.confirmations
    .map((c) => `<li class="${c.accepted ? "ok" : "rej"}">` +
                `${c.token} &rarr; ${c.reply}</li>`)
    .join("");
  requestAnimationFrame(render);
}

connect();
requestAnimationFrame(render);
