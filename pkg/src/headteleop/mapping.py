"""Calibration and the piecewise head-angle to actuator-velocity map.

The map is symmetric around a calibrated center pose: a deadzone where the
robot holds still, a linear ramp, and saturation at the actuator's velocity
limit. Defaults put the deadzone edge at 15 degrees from center and
saturation at 45 degrees, with the ramp gain chosen so the ramp meets the
limit exactly at the saturation edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .angles import normalize_delta, wrap_degrees
from .protocol import OrientationSample

__all__ = [
    "Actuator", "AxisThresholds", "ActuatorParams", "CalibrationState",
    "NoSampleYet", "axis_velocity", "in_deadzone", "calibrate",
    "normalize_delta", "wrap_degrees", "default_actuators",
]


class Actuator(Enum):
    BASE_TRANSLATE = "base_translate"
    BASE_ROTATE = "base_rotate"
    LIFT = "lift"
    ARM_EXTEND = "arm_extend"
    WRIST_PITCH = "wrist_pitch"
    WRIST_YAW = "wrist_yaw"
    GRIPPER = "gripper"


class NoSampleYet(RuntimeError):
    """A "start" token arrived before any orientation sample.

    The session must stay uncalibrated until telemetry flows.
    """


@dataclass(frozen=True)
class CalibrationState:
    """Head orientation captured at the "start" event.

    All velocity mapping is relative to this center; it is set exactly
    once per start event.
    """

    theta_c_roll: float
    theta_c_pitch: float


@dataclass(frozen=True)
class AxisThresholds:
    """Deadzone and saturation corners for one head axis.

    Values are degrees relative to the calibrated center, so a single
    instance applies at any calibration. Asymmetric corners are allowed
    (useful for users with a limited range on one side) but must stay
    well-ordered: t_high_neg < t_low_neg < t_low_pos < t_high_pos.
    """

    t_low_pos: float = 15.0
    t_high_pos: float = 45.0
    t_low_neg: float = -15.0
    t_high_neg: float = -45.0

    def __post_init__(self) -> None:
        if not (self.t_high_neg < self.t_low_neg < self.t_low_pos < self.t_high_pos):
            raise ValueError(
                "thresholds must satisfy t_high_neg < t_low_neg < "
                f"t_low_pos < t_high_pos, got {self}")


@dataclass(frozen=True)
class ActuatorParams:
    """Per-actuator ramp gain and velocity limit.

    ``k`` is in velocity-units per degree. When left as None it defaults
    to v_max / (t_high_pos - t_low_pos) of the driving axis, which makes
    the ramp reach v_max exactly at the saturation edge (continuity).
    """

    actuator: Actuator
    v_max: float
    k: float | None = None

    def __post_init__(self) -> None:
        if self.v_max <= 0:
            raise ValueError(f"v_max must be positive, got {self.v_max}")
        if self.k is not None and self.k <= 0:
            raise ValueError(f"k must be positive, got {self.k}")

    def gain(self, thresholds: AxisThresholds) -> float:
        if self.k is not None:
            return self.k
        return self.v_max / (thresholds.t_high_pos - thresholds.t_low_pos)


# Plausible safe speeds for a small mobile manipulator; config, not ground
# truth. Units: m/s, rad/s, and aperture-fraction/s for the gripper.
DEFAULT_V_MAX = {
    Actuator.BASE_TRANSLATE: 0.3,
    Actuator.BASE_ROTATE: 0.5,
    Actuator.LIFT: 0.1,
    Actuator.ARM_EXTEND: 0.1,
    Actuator.WRIST_PITCH: 0.8,
    Actuator.WRIST_YAW: 0.8,
    Actuator.GRIPPER: 1.0,
}


def default_actuators() -> dict[Actuator, ActuatorParams]:
    return {a: ActuatorParams(a, v_max) for a, v_max in DEFAULT_V_MAX.items()}


def axis_velocity(theta: float, theta_c: float, thresholds: AxisThresholds,
                  params: ActuatorParams) -> float:
    """Five-case piecewise map from one head angle to one actuator velocity.

    Evaluated on the wrap-normalized delta so crossing the +/-180 seam
    never produces a spurious full-speed command. The ramp value is
    clamped to +/-v_max, which only matters when a custom gain overshoots
    the limit before the saturation corner.
    """
    d = normalize_delta(theta, theta_c)
    t = thresholds
    if d < t.t_high_neg:
        return -params.v_max
    if d <= t.t_low_neg:
        return max(params.gain(t) * (d - t.t_low_neg), -params.v_max)
    if d < t.t_low_pos:
        return 0.0
    if d <= t.t_high_pos:
        return min(params.gain(t) * (d - t.t_low_pos), params.v_max)
    return params.v_max


def in_deadzone(roll: float, pitch: float, cal: CalibrationState,
                thr_roll: AxisThresholds, thr_pitch: AxisThresholds) -> bool:
    """True iff both head axes sit strictly inside their deadzone.

    Both-inside means the robot stops all motion; the boundary itself
    belongs to the ramp (where the commanded velocity is still zero).
    """
    d_roll = normalize_delta(roll, cal.theta_c_roll)
    d_pitch = normalize_delta(pitch, cal.theta_c_pitch)
    return (thr_roll.t_low_neg < d_roll < thr_roll.t_low_pos
            and thr_pitch.t_low_neg < d_pitch < thr_pitch.t_low_pos)


def calibrate(sample: OrientationSample | None) -> CalibrationState:
    """Capture the calibration center from the sample at the start event.

    Raises NoSampleYet when no orientation sample has arrived yet.
    """
    if sample is None:
        raise NoSampleYet("start received before any orientation sample")
    return CalibrationState(sample.roll, sample.pitch)
