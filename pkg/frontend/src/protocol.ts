/**
 * Wire protocol: 20-byte binary orientation frames out, line-oriented
 * `kind|key=value|...` text messages in both directions.
 *
 * The console never computes velocities or success itself; everything
 * authoritative arrives in server messages and is only parsed here.
 */

export const FRAME_SIZE = 20;

/** Pack one orientation sample into the little-endian telemetry frame. */
export function encodeOrientationFrame(
  seq: number, tMs: number, roll: number, pitch: number, yaw: number,
): ArrayBuffer {
  const buffer = new ArrayBuffer(FRAME_SIZE);
  const view = new DataView(buffer);
  view.setUint32(0, seq >>> 0, true);
  view.setUint32(4, tMs >>> 0, true);
  view.setFloat32(8, roll, true);
  view.setFloat32(12, pitch, true);
  view.setFloat32(16, yaw, true);
  return buffer;
}

export interface ServerMessage {
  kind: string;
  fields: Array<[string, string]>;
}

export function parseServerMessage(line: string): ServerMessage {
  const parts = line.split("|");
  const kind = parts[0];
  if (!kind) throw new Error(`message missing kind: ${line}`);
  const fields: Array<[string, string]> = [];
  for (const part of parts.slice(1)) {
    if (!part) continue;
    const eq = part.indexOf("=");
    if (eq < 0) throw new Error(`field without '=': ${part}`);
    fields.push([part.slice(0, eq), part.slice(eq + 1)]);
  }
  return { kind, fields };
}

export function field(msg: ServerMessage, key: string): string | undefined {
  for (const [k, v] of msg.fields) if (k === key) return v;
  return undefined;
}

export function fields(msg: ServerMessage, key: string): string[] {
  return msg.fields.filter(([k]) => k === key).map(([, v]) => v);
}

export function encodeToken(value: string): string {
  return `token|value=${value}`;
}

export const RESET_MESSAGE = "reset";

export interface Snapshot {
  tMs: number;
  phase: string;
  mode: string;
  awaiting: boolean;
  x: number;
  y: number;
  heading: number;
  lift: number;
  armExt: number;
  wristPitch: number;
  wristYaw: number;
  grip: number;
  held: string | null;
  ee: { x: number; y: number; z: number };
  success: boolean;
  rollDelta: number | null;
  pitchDelta: number | null;
  velocities: Map<string, number>;
  objects: Map<string, { x: number; y: number; z: number }>;
}

function num(msg: ServerMessage, key: string): number {
  const raw = field(msg, key);
  if (raw === undefined) throw new Error(`snapshot missing ${key}`);
  const value = Number(raw);
  if (!Number.isFinite(value)) throw new Error(`bad number for ${key}: ${raw}`);
  return value;
}

export function parseSnapshot(msg: ServerMessage): Snapshot {
  const velocities = new Map<string, number>();
  for (const entry of fields(msg, "vel")) {
    const [name, v] = entry.split(":");
    velocities.set(name, Number(v));
  }
  const objects = new Map<string, { x: number; y: number; z: number }>();
  for (const entry of fields(msg, "obj")) {
    const [name, coords] = entry.split(":");
    const [x, y, z] = coords.split(",").map(Number);
    objects.set(name, { x, y, z });
  }
  const rollDelta = field(msg, "roll_delta");
  const pitchDelta = field(msg, "pitch_delta");
  const held = field(msg, "held");
  return {
    tMs: num(msg, "t_ms"),
    phase: field(msg, "phase") ?? "uncalibrated",
    mode: field(msg, "mode") ?? "-",
    awaiting: field(msg, "awaiting") === "1",
    x: num(msg, "x"),
    y: num(msg, "y"),
    heading: num(msg, "heading"),
    lift: num(msg, "lift"),
    armExt: num(msg, "arm_ext"),
    wristPitch: num(msg, "wrist_pitch"),
    wristYaw: num(msg, "wrist_yaw"),
    grip: num(msg, "grip"),
    held: held === "-" || held === undefined ? null : held,
    ee: { x: num(msg, "ee_x"), y: num(msg, "ee_y"), z: num(msg, "ee_z") },
    success: field(msg, "success") === "1",
    rollDelta: rollDelta === undefined ? null : Number(rollDelta),
    pitchDelta: pitchDelta === undefined ? null : Number(pitchDelta),
    velocities,
    objects,
  };
}

export interface SceneObject {
  id: string;
  x: number;
  y: number;
  z: number;
  attachable: boolean;
}

export interface SceneRegion {
  name: string;
  min: { x: number; y: number; z: number };
  max: { x: number; y: number; z: number };
}

export interface Scene {
  scenario: string;
  timeLimitS: number;
  success: string;
  objects: SceneObject[];
  regions: SceneRegion[];
}

export function parseScene(msg: ServerMessage): Scene {
  const objects: SceneObject[] = fields(msg, "object").map((entry) => {
    const [id, coords, attachable] = entry.split(":");
    const [x, y, z] = coords.split(",").map(Number);
    return { id, x, y, z, attachable: attachable === "1" };
  });
  const regions: SceneRegion[] = fields(msg, "region").map((entry) => {
    const [name, coords] = entry.split(":");
    const [x0, y0, z0, x1, y1, z1] = coords.split(",").map(Number);
    return { name, min: { x: x0, y: y0, z: z0 }, max: { x: x1, y: y1, z: z1 } };
  });
  return {
    scenario: field(msg, "scenario") ?? "?",
    timeLimitS: Number(field(msg, "time_limit_s") ?? "840"),
    success: field(msg, "success") ?? "?",
    objects,
    regions,
  };
}
