/**
 * The virtual tilt pad: the browser stand-in for physical head tilt.
 *
 * Pad deflection maps linearly onto +/-60 degrees, which spans the whole
 * server-side curve: deadzone (to 15), ramp (15..45), and saturation
 * (past 45). Releasing the pad snaps it back to center, so the streamed
 * pose returns to the calibrated center and the robot stops.
 */

export const PAD_RANGE_DEG = 60;

export interface PadState {
  x: number;
  y: number;
  engaged: boolean;
}

function clamp(value: number): number {
  return Math.max(-1, Math.min(1, value));
}

/** Map normalized pad deflection onto head roll/pitch degrees. */
export function padToAngles(x: number, y: number): { roll: number; pitch: number } {
  return { roll: clamp(x) * PAD_RANGE_DEG, pitch: clamp(y) * PAD_RANGE_DEG };
}

/**
 * Pointer-driven pad bound to a square element. Up/forward on the pad is
 * positive pitch (head down, robot forward); right is positive roll.
 */
export class TiltPad {
  readonly state: PadState = { x: 0, y: 0, engaged: false };
  private pointerId: number | null = null;

  constructor(private readonly element: HTMLElement,
              private readonly knob: HTMLElement) {
    element.addEventListener("pointerdown", (e) => this.grab(e));
    element.addEventListener("pointermove", (e) => this.track(e));
    element.addEventListener("pointerup", (e) => this.release(e));
    element.addEventListener("pointercancel", (e) => this.release(e));
    this.draw();
  }

  private grab(e: PointerEvent): void {
    if (this.pointerId !== null) return;
    this.pointerId = e.pointerId;
    this.element.setPointerCapture(e.pointerId);
    this.state.engaged = true;
    this.track(e);
  }

  private track(e: PointerEvent): void {
    if (e.pointerId !== this.pointerId) return;
    const rect = this.element.getBoundingClientRect();
    const half = rect.width / 2;
    this.state.x = clamp((e.clientX - rect.left - half) / half);
    // Screen y grows downward; pushing the pad up is "head down, go".
    this.state.y = clamp(-(e.clientY - rect.top - half) / half);
    this.draw();
  }

  private release(e: PointerEvent): void {
    if (e.pointerId !== this.pointerId) return;
    this.pointerId = null;
    this.state.engaged = false;
    this.state.x = 0;
    this.state.y = 0;
    this.draw();
  }

  private draw(): void {
    const half = this.element.clientWidth / 2;
    this.knob.style.left = `${half + this.state.x * half * 0.8 - 14}px`;
    this.knob.style.top = `${half - this.state.y * half * 0.8 - 14}px`;
    this.knob.classList.toggle("engaged", this.state.engaged);
  }
}
