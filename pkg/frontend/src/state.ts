/**
 * Console state and the message reducer.
 *
 * The server is authoritative for phase, mode, success, and every pose;
 * applyMessage only folds its notices into a renderable state. The
 * confirmation log keeps token round-trips visible (including "repeat"
 * rejections) and checks they pair 1:1 with what was sent.
 */

import {
  parseScene, parseServerMessage, parseSnapshot, Scene, ServerMessage,
  Snapshot, field,
} from "./protocol.js";

export interface Confirmation {
  token: string;
  accepted: boolean;
  reply: string;
  reason?: string;
}

export interface ConsoleState {
  connected: boolean;
  scene: Scene | null;
  snapshot: Snapshot | null;
  phase: string;
  mode: string;
  awaiting: boolean;
  success: boolean;
  successAtMs: number | null;
  clamped: string[];
  clampedAtMs: number;
  confirmations: Confirmation[];
  trail: Array<{ x: number; y: number }>;
  pendingTokens: string[];
}

export function initialState(): ConsoleState {
  return {
    connected: false,
    scene: null,
    snapshot: null,
    phase: "uncalibrated",
    mode: "-",
    awaiting: false,
    success: false,
    successAtMs: null,
    clamped: [],
    clampedAtMs: 0,
    confirmations: [],
    trail: [],
    pendingTokens: [],
  };
}

export function noteTokenSent(state: ConsoleState, token: string): void {
  state.pendingTokens.push(token);
}

const TRAIL_LIMIT = 600;

export function applyMessage(state: ConsoleState, line: string,
                             nowMs: number): ServerMessage {
  const msg = parseServerMessage(line);
  switch (msg.kind) {
    case "scene":
      state.scene = parseScene(msg);
      break;
    case "snapshot": {
      const snap = parseSnapshot(msg);
      state.snapshot = snap;
      state.phase = snap.phase;
      state.mode = snap.mode;
      state.awaiting = snap.awaiting;
      state.success = snap.success;
      const last = state.trail[state.trail.length - 1];
      if (!last || last.x !== snap.x || last.y !== snap.y) {
        state.trail.push({ x: snap.x, y: snap.y });
        if (state.trail.length > TRAIL_LIMIT) state.trail.shift();
      }
      break;
    }
    case "phase":
      state.phase = field(msg, "phase") ?? state.phase;
      state.mode = field(msg, "mode") ?? state.mode;
      state.awaiting = field(msg, "awaiting") === "1";
      break;
    case "confirm": {
      const expected = state.pendingTokens.shift();
      const confirmation: Confirmation = {
        token: field(msg, "token") ?? "?",
        accepted: field(msg, "accepted") === "1",
        reply: field(msg, "reply") ?? "repeat",
        reason: field(msg, "reason"),
      };
      if (expected !== undefined && expected !== confirmation.token) {
        confirmation.reason = `confirmation out of order (sent ${expected})`;
      }
      state.confirmations.push(confirmation);
      if (state.confirmations.length > 8) state.confirmations.shift();
      break;
    }
    case "success":
      state.success = true;
      state.successAtMs = Number(field(msg, "t_ms") ?? nowMs);
      break;
    case "clamp":
      state.clamped = (field(msg, "actuators") ?? "").split(",").filter(Boolean);
      state.clampedAtMs = nowMs;
      break;
    default:
      break;
  }
  return msg;
}
