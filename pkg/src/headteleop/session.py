"""Mode state machine, shake-triggered command intake, and 10 Hz dispatch.

A session owns one operator's control state: calibration, the active mode
(drive/arm/wrist/gripper), the shake detector that opens the command
window, and the latest orientation sample. ``tick`` runs on a fixed
100 ms cadence and converts the latest 20 Hz sample (latest-wins) into a
per-actuator velocity frame.

Safety gates, in order: an uncalibrated session, an open command window
(listening pauses motion), a stale telemetry link (watchdog), and the
two-axis deadzone all force the all-zero frame.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from .angles import normalize_delta
from .mapping import (Actuator, ActuatorParams, AxisThresholds,
                      CalibrationState, axis_velocity, calibrate,
                      default_actuators, in_deadzone)
from .protocol import ControlEvent, EventKind, OrientationSample

__all__ = [
    "Mode", "CommandFrame", "ControlParams", "ShakeParams", "ShakeDetector",
    "Session", "dispatch", "stop_all", "MODE_AXES", "EVENT_TO_MODE",
]


class Mode(Enum):
    DRIVE = "drive"
    ARM = "arm"
    WRIST = "wrist"
    GRIPPER = "gripper"


# Per-mode (roll-axis actuator, pitch-axis actuator). Gripper ignores roll.
MODE_AXES: dict[Mode, tuple[Actuator | None, Actuator]] = {
    Mode.DRIVE: (Actuator.BASE_ROTATE, Actuator.BASE_TRANSLATE),
    Mode.ARM: (Actuator.ARM_EXTEND, Actuator.LIFT),
    Mode.WRIST: (Actuator.WRIST_YAW, Actuator.WRIST_PITCH),
    Mode.GRIPPER: (None, Actuator.GRIPPER),
}

EVENT_TO_MODE = {
    EventKind.SWITCH_DRIVE: Mode.DRIVE,
    EventKind.SWITCH_ARM: Mode.ARM,
    EventKind.SWITCH_WRIST: Mode.WRIST,
    EventKind.SWITCH_GRIPPER: Mode.GRIPPER,
}


@dataclass(frozen=True)
class CommandFrame:
    """One 10 Hz per-actuator velocity bundle; absent actuator means zero."""

    t_ms: int
    velocities: Mapping[Actuator, float]

    def is_zero(self) -> bool:
        return not self.velocities

    def get(self, actuator: Actuator) -> float:
        return self.velocities.get(actuator, 0.0)


def stop_all(t_ms: int = 0) -> CommandFrame:
    """The all-zero frame: emitted on every safety gate."""
    return CommandFrame(t_ms, {})


def dispatch(mode: Mode, roll_v: float, pitch_v: float) -> dict[Actuator, float]:
    """Route the two axis velocities onto the active mode's actuators.

    Zero velocities are omitted, so a frame never carries more than the
    mode's two actuators and never mixes modes.
    """
    roll_act, pitch_act = MODE_AXES[mode]
    velocities: dict[Actuator, float] = {}
    if roll_act is not None and roll_v != 0.0:
        velocities[roll_act] = roll_v
    if pitch_v != 0.0:
        velocities[pitch_act] = pitch_v
    return velocities


@dataclass(frozen=True)
class ShakeParams:
    """Tuning for the Z-axis shake trigger; all four knobs are config."""

    amplitude_deg: float = 10.0
    min_reversals: int = 3
    window_ms: int = 1500
    refractory_ms: int = 1000


class ShakeDetector:
    """Detects a light left-right head shake on the yaw axis.

    Fires when, inside the trailing window, the yaw delta from the
    session baseline swung past both +amplitude and -amplitude with at
    least ``min_reversals`` direction reversals. Slow deliberate turns
    (looking at an object) produce at most one reversal and never fire.
    After firing the window clears and a refractory period suppresses
    retriggering.
    """

    def __init__(self, params: ShakeParams) -> None:
        self.params = params
        self._window: deque[tuple[int, float]] = deque()
        self._refractory_until: int | None = None

    def reset(self) -> None:
        self._window.clear()
        self._refractory_until = None

    def push(self, sample: OrientationSample, yaw_ref: float) -> bool:
        """Feed one sample; True means a shake completed on this sample."""
        t = sample.t_ms
        self._window.append((t, normalize_delta(sample.yaw, yaw_ref)))
        horizon = t - self.params.window_ms
        while self._window and self._window[0][0] < horizon:
            self._window.popleft()
        if self._refractory_until is not None and t < self._refractory_until:
            return False
        deltas = [d for _, d in self._window]
        if (max(deltas) < self.params.amplitude_deg
                or min(deltas) > -self.params.amplitude_deg):
            return False
        if self._reversals(deltas) < self.params.min_reversals:
            return False
        self._window.clear()
        self._refractory_until = t + self.params.refractory_ms
        return True

    @staticmethod
    def _reversals(deltas: list[float]) -> int:
        count = 0
        prev_dir = 0
        for a, b in zip(deltas, deltas[1:]):
            step = b - a
            if step == 0.0:
                continue
            direction = 1 if step > 0 else -1
            if prev_dir != 0 and direction != prev_dir:
                count += 1
            prev_dir = direction
        return count


def _control_defaults() -> dict[Actuator, ActuatorParams]:
    return default_actuators()


@dataclass(frozen=True)
class ControlParams:
    """Everything a session needs to turn head angles into commands."""

    actuators: Mapping[Actuator, ActuatorParams] = field(
        default_factory=_control_defaults)
    roll_thresholds: AxisThresholds = field(default_factory=AxisThresholds)
    pitch_thresholds: AxisThresholds = field(default_factory=AxisThresholds)
    shake: ShakeParams = field(default_factory=ShakeParams)
    watchdog_ms: int = 300
    recalibrate_on_start: bool = True


class Session:
    """One operator's control session.

    Single logical owner: sample ingestion, event handling, and ticks must
    be serialized by the caller (one session per connection or replay).
    The session is uncalibrated until a ``start`` event succeeds; while
    uncalibrated, and while a command window is open, every tick emits the
    all-zero frame.
    """

    def __init__(self, params: ControlParams | None = None) -> None:
        self.params = params if params is not None else ControlParams()
        self.calibration: CalibrationState | None = None
        self.mode: Mode | None = None
        self.awaiting_command = False
        self.latest_sample: OrientationSample | None = None
        self.last_rx_ms: int | None = None
        self.yaw_ref: float | None = None
        self.shake = ShakeDetector(self.params.shake)

    @property
    def active(self) -> bool:
        return self.calibration is not None

    def ingest_sample(self, sample: OrientationSample,
                      rx_ms: int | None = None) -> bool:
        """Accept one valid, in-order sample.

        ``rx_ms`` is the arrival time on the session clock and feeds the
        link watchdog; it defaults to the sample's own timestamp (replay).
        Returns True when this sample completed a shake gesture, which
        opens the command window and pauses motion.
        """
        self.latest_sample = sample
        self.last_rx_ms = sample.t_ms if rx_ms is None else rx_ms
        if self.yaw_ref is None:
            self.yaw_ref = sample.yaw
        fired = self.shake.push(sample, self.yaw_ref)
        if fired:
            self.awaiting_command = True
        return fired

    def begin_command_window(self) -> None:
        """Open the command window explicitly (listening pauses motion)."""
        self.awaiting_command = True

    def handle_event(self, event: ControlEvent) -> bool:
        """Apply a command token; returns True iff it changed the session.

        The caller enforces shake gating in live mode; trace replay feeds
        events unconditionally. The command window closes in every case.
        ``start`` calibrates from the latest sample and lands in drive
        mode; ``switch to X`` keeps the calibration; ``unrecognized``
        changes nothing (the "repeat" reply).

        Raises NoSampleYet when ``start`` arrives before any sample; the
        session stays uncalibrated.
        """
        self.awaiting_command = False
        kind = event.kind
        if kind is EventKind.START:
            if self.active and not self.params.recalibrate_on_start:
                return False
            self.calibration = calibrate(self.latest_sample)
            self.yaw_ref = self.latest_sample.yaw
            self.shake.reset()
            self.mode = Mode.DRIVE
            return True
        target = EVENT_TO_MODE.get(kind)
        if target is not None and self.active:
            self.mode = target
            return True
        return False

    def watchdog_expired(self, now_ms: int) -> bool:
        """True when no valid sample arrived within the watchdog period."""
        return (self.last_rx_ms is None
                or now_ms - self.last_rx_ms > self.params.watchdog_ms)

    def tick(self, now_ms: int) -> CommandFrame:
        """Produce the 10 Hz command frame from the latest sample.

        Latest-wins: of the two nominal 50 ms samples per tick, only the
        most recent one matters. Sign conventions: a positive pitch delta
        (head down) drives the base forward, lowers the lift, and opens
        the gripper; a positive roll delta (tilt right) turns the base
        clockwise and extends the arm.
        """
        if (not self.active or self.awaiting_command
                or self.latest_sample is None
                or self.watchdog_expired(now_ms)):
            return stop_all(now_ms)
        assert self.mode is not None and self.calibration is not None
        sample = self.latest_sample
        p = self.params
        if in_deadzone(sample.roll, sample.pitch, self.calibration,
                       p.roll_thresholds, p.pitch_thresholds):
            return stop_all(now_ms)
        roll_act, pitch_act = MODE_AXES[self.mode]
        roll_v = 0.0
        if roll_act is not None:
            roll_v = axis_velocity(sample.roll, self.calibration.theta_c_roll,
                                   p.roll_thresholds, p.actuators[roll_act])
        pitch_v = axis_velocity(sample.pitch, self.calibration.theta_c_pitch,
                                p.pitch_thresholds, p.actuators[pitch_act])
        # Heading is CCW-positive in the world frame, so clockwise rotation
        # on tilt-right needs the sign flipped; same for head-down = lift-down.
        if self.mode is Mode.DRIVE:
            roll_v = -roll_v
        elif self.mode is Mode.ARM:
            pitch_v = -pitch_v
        return CommandFrame(now_ms, dispatch(self.mode, roll_v, pitch_v))
