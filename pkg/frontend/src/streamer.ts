/**
 * The 20 Hz outbound frame source.
 *
 * While the pad is engaged the stream carries its deflection; released,
 * it carries the neutral (calibrated-center) pose, which drives the
 * robot to a stop through the ordinary deadzone path, and keeps the
 * server's link watchdog fed either way. A running shake gesture
 * overlays the yaw channel.
 */

import { encodeOrientationFrame } from "./protocol.js";
import { padToAngles, PadState } from "./tiltpad.js";
import { ShakeGesture } from "./shake.js";

export const STREAM_INTERVAL_MS = 50;

export class FrameStreamer {
  private seq = 0;
  private shake: ShakeGesture | null = null;

  constructor(private readonly startedAtMs: number) {}

  beginShake(nowMs: number): ShakeGesture {
    // The server takes its yaw baseline from the first sample it sees, so
    // a gesture must never occupy the very first frame of the stream.
    const startMs = this.seq === 0 ? nowMs + STREAM_INTERVAL_MS : nowMs;
    this.shake = new ShakeGesture(startMs);
    return this.shake;
  }

  /** Stop any running gesture: a head goes still before the mouth speaks.
   * Calibration reads the yaw at the token, so a wiggle tail would skew
   * the baseline the next shake is judged against. */
  cancelShake(): void {
    this.shake = null;
  }

  shakeActive(nowMs: number): boolean {
    if (this.shake === null) return false;
    if (this.shake.done(nowMs)) {
      this.shake = null;
      return false;
    }
    return true;
  }

  /** Build the next frame for the wall-clock time `nowMs`. */
  next(nowMs: number, pad: PadState): ArrayBuffer {
    const { roll, pitch } = pad.engaged
      ? padToAngles(pad.x, pad.y)
      : { roll: 0, pitch: 0 };
    const yaw = this.shakeActive(nowMs) ? this.shake!.yawAt(nowMs) : 0;
    return encodeOrientationFrame(
      this.seq++, Math.max(0, Math.round(nowMs - this.startedAtMs)),
      roll, pitch, yaw);
  }
}
