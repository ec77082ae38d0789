/**
 * Synthesized yaw shake: a 2 Hz, +/-15 degree wiggle lasting 1.5 s.
 *
 * The wiggle rides the outgoing yaw channel so the *server-side* shake
 * detector fires from the stream, exactly as a physical head shake
 * would; the console never opens the command window by itself.
 */

export const SHAKE_AMPLITUDE_DEG = 15;
export const SHAKE_FREQ_HZ = 2;
export const SHAKE_DURATION_S = 1.5;

export class ShakeSynth {
  constructor(
    readonly amplitudeDeg: number = SHAKE_AMPLITUDE_DEG,
    readonly freqHz: number = SHAKE_FREQ_HZ,
    readonly durationS: number = SHAKE_DURATION_S,
  ) {}

  /** Yaw offset at t seconds since the gesture started. */
  yawAt(tS: number): number {
    if (tS < 0 || tS >= this.durationS) return 0;
    return this.amplitudeDeg * Math.sin(2 * Math.PI * this.freqHz * tS);
  }

  done(tS: number): boolean {
    return tS >= this.durationS;
  }
}

/** One running shake gesture keyed to a start timestamp. */
export class ShakeGesture {
  constructor(readonly startedAtMs: number,
              readonly synth: ShakeSynth = new ShakeSynth()) {}

  yawAt(nowMs: number): number {
    return this.synth.yawAt((nowMs - this.startedAtMs) / 1000);
  }

  done(nowMs: number): boolean {
    return this.synth.done((nowMs - this.startedAtMs) / 1000);
  }
}
