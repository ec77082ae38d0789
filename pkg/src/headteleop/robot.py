"""Kinematic simulator of a Stretch-class mobile manipulator.

Differential base, vertical lift, telescoping arm extending to the robot's
right, 2-DOF wrist, and a 1-DOF gripper, integrated with explicit Euler at
the 10 Hz command cadence. Pure kinematics: joints clamp at their limits,
and grasping is a hysteretic attach/release model instead of contact
physics. World frame: x/y meters, heading in radians, CCW-positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from .mapping import Actuator
from .session import CommandFrame

__all__ = [
    "Pose3", "RobotState", "RobotLimits", "WorldObject", "KinematicSim",
    "NonFiniteCommand", "step", "end_effector_pose", "end_effector_orientation",
    "clamp_report", "DEFAULT_LIMITS",
]


class NonFiniteCommand(ValueError):
    """A frame carried a NaN/Inf velocity; the state stays unchanged."""


@dataclass(frozen=True)
class Pose3:
    x: float
    y: float
    z: float

    def distance_to(self, other: "Pose3") -> float:
        return math.sqrt((self.x - other.x) ** 2 + (self.y - other.y) ** 2
                         + (self.z - other.z) ** 2)


@dataclass(frozen=True)
class RobotLimits:
    """Joint limits, arm geometry, and the grasp model parameters.

    Plausible values for a small mobile manipulator; config-overridable,
    not ground truth. Grasp hysteresis: attach while closing below
    ``grasp_close_threshold`` near an attachable object, release when the
    aperture rises above ``grasp_release_threshold``.
    """

    lift_max: float = 1.1
    ext_max: float = 0.52
    wrist_pitch_min: float = -math.pi / 2
    wrist_pitch_max: float = math.pi / 2
    wrist_yaw_min: float = -math.pi / 2
    wrist_yaw_max: float = math.pi / 2
    arm_base_offset: float = 0.2
    grasp_close_threshold: float = 0.3
    grasp_release_threshold: float = 0.7
    grasp_radius: float = 0.08

    def __post_init__(self) -> None:
        if self.lift_max <= 0 or self.ext_max <= 0:
            raise ValueError("lift_max and ext_max must be positive")
        if (self.wrist_pitch_min >= self.wrist_pitch_max
                or self.wrist_yaw_min >= self.wrist_yaw_max):
            raise ValueError("wrist ranges must be non-degenerate")


DEFAULT_LIMITS = RobotLimits()


@dataclass(frozen=True)
class RobotState:
    """Full kinematic state; defaults are the homed start pose.

    ``grip`` is the aperture fraction (0 closed, 1 open). ``held_object``
    co-moves with the end effector until released.
    """

    base_x: float = 0.0
    base_y: float = 0.0
    heading: float = 0.0
    lift: float = 0.5
    arm_ext: float = 0.0
    wrist_pitch: float = 0.0
    wrist_yaw: float = 0.0
    grip: float = 0.5
    held_object: str | None = None


def _clamp(value: float, lo: float, hi: float) -> float:
    if value < lo:
        return lo
    if value > hi:
        return hi
    return value


def step(state: RobotState, frame: CommandFrame, dt: float,
         limits: RobotLimits = DEFAULT_LIMITS) -> RobotState:
    """Integrate one command frame over dt seconds (explicit Euler).

    Joints clamp at their limit intervals; the base is unbounded. Raises
    NonFiniteCommand (leaving the state untouched) if any velocity is
    NaN or infinite. Object attachment lives in :class:`KinematicSim`;
    this function is the pure joint/base update.
    """
    v = frame.velocities
    for value in v.values():
        if not math.isfinite(value):
            raise NonFiniteCommand(f"non-finite velocity in frame: {v}")
    translate = v.get(Actuator.BASE_TRANSLATE, 0.0)
    rotate = v.get(Actuator.BASE_ROTATE, 0.0)
    return RobotState(
        base_x=state.base_x + translate * math.cos(state.heading) * dt,
        base_y=state.base_y + translate * math.sin(state.heading) * dt,
        heading=state.heading + rotate * dt,
        lift=_clamp(state.lift + v.get(Actuator.LIFT, 0.0) * dt,
                    0.0, limits.lift_max),
        arm_ext=_clamp(state.arm_ext + v.get(Actuator.ARM_EXTEND, 0.0) * dt,
                       0.0, limits.ext_max),
        wrist_pitch=_clamp(
            state.wrist_pitch + v.get(Actuator.WRIST_PITCH, 0.0) * dt,
            limits.wrist_pitch_min, limits.wrist_pitch_max),
        wrist_yaw=_clamp(
            state.wrist_yaw + v.get(Actuator.WRIST_YAW, 0.0) * dt,
            limits.wrist_yaw_min, limits.wrist_yaw_max),
        grip=_clamp(state.grip + v.get(Actuator.GRIPPER, 0.0) * dt, 0.0, 1.0),
        held_object=state.held_object,
    )


def end_effector_pose(state: RobotState,
                      limits: RobotLimits = DEFAULT_LIMITS) -> Pose3:
    """World position of the end effector.

    The arm extends perpendicular to the drive direction on the robot's
    right: lateral offset (0, -(arm_base_offset + arm_ext)) in the robot
    frame, rotated by the heading; z is the lift height. Wrist angles
    affect orientation only.
    """
    d = limits.arm_base_offset + state.arm_ext
    return Pose3(state.base_x + d * math.sin(state.heading),
                 state.base_y - d * math.cos(state.heading),
                 state.lift)


def end_effector_orientation(state: RobotState) -> tuple[float, float]:
    """(pitch, world yaw) of the end effector from the wrist joints."""
    return state.wrist_pitch, state.heading + state.wrist_yaw


_JOINT_BOUNDS = {
    Actuator.LIFT: lambda s, lim: (s.lift, 0.0, lim.lift_max),
    Actuator.ARM_EXTEND: lambda s, lim: (s.arm_ext, 0.0, lim.ext_max),
    Actuator.WRIST_PITCH: lambda s, lim: (s.wrist_pitch, lim.wrist_pitch_min,
                                          lim.wrist_pitch_max),
    Actuator.WRIST_YAW: lambda s, lim: (s.wrist_yaw, lim.wrist_yaw_min,
                                        lim.wrist_yaw_max),
    Actuator.GRIPPER: lambda s, lim: (s.grip, 0.0, 1.0),
}


def clamp_report(before: RobotState, after: RobotState,
                 limits: RobotLimits = DEFAULT_LIMITS) -> set[Actuator]:
    """Actuators that moved into a limit boundary this step (UI indicator)."""
    saturated: set[Actuator] = set()
    for actuator, extract in _JOINT_BOUNDS.items():
        value_after, lo, hi = extract(after, limits)
        value_before, _, _ = extract(before, limits)
        if value_before != value_after and value_after in (lo, hi):
            saturated.add(actuator)
    return saturated


@dataclass
class WorldObject:
    """A scenario object the simulator can carry around."""

    object_id: str
    pose: Pose3
    attachable: bool = False


class KinematicSim:
    """Single-owner simulator state: robot, world objects, grasping.

    Only the owning session's tick loop advances it; consumers read
    immutable snapshots (RobotState and Pose3 are frozen). While an
    object is held, its pose equals the end-effector pose every step.
    """

    def __init__(self, limits: RobotLimits = DEFAULT_LIMITS,
                 objects: Iterable[WorldObject] = (),
                 state: RobotState | None = None) -> None:
        self.limits = limits
        self.state = state if state is not None else RobotState()
        self.objects: dict[str, WorldObject] = {
            o.object_id: WorldObject(o.object_id, o.pose, o.attachable)
            for o in objects
        }
        self.last_clamped: set[Actuator] = set()

    def object_poses(self) -> dict[str, Pose3]:
        return {oid: o.pose for oid, o in self.objects.items()}

    def reset(self, state: RobotState | None = None,
              objects: Iterable[WorldObject] = ()) -> None:
        """Restore the robot pose and object poses (never the clock)."""
        self.state = state if state is not None else RobotState()
        self.objects = {
            o.object_id: WorldObject(o.object_id, o.pose, o.attachable)
            for o in objects
        }
        self.last_clamped = set()

    def step(self, frame: CommandFrame, dt: float) -> RobotState:
        """Advance one frame: integrate, handle grasping, co-move cargo.

        A non-finite frame is rejected and the previous state stands.
        """
        before = self.state
        try:
            after = step(before, frame, dt, self.limits)
        except NonFiniteCommand:
            return before
        after = self._update_grasp(before, after)
        if after.held_object is not None:
            held = self.objects.get(after.held_object)
            if held is not None:
                held.pose = end_effector_pose(after, self.limits)
        self.last_clamped = clamp_report(before, after, self.limits)
        self.state = after
        return after

    def _update_grasp(self, before: RobotState, after: RobotState) -> RobotState:
        lim = self.limits
        if after.held_object is None:
            closing = after.grip < before.grip
            if closing and after.grip < lim.grasp_close_threshold:
                ee = end_effector_pose(after, lim)
                target = self._nearest_attachable(ee, lim.grasp_radius)
                if target is not None:
                    return replace(after, held_object=target)
        elif after.grip > lim.grasp_release_threshold:
            held = self.objects.get(after.held_object)
            if held is not None:
                held.pose = end_effector_pose(after, lim)
            return replace(after, held_object=None)
        return after

    def _nearest_attachable(self, ee: Pose3, radius: float) -> str | None:
        best_id = None
        best_dist = radius
        for oid, obj in self.objects.items():
            if not obj.attachable:
                continue
            dist = obj.pose.distance_to(ee)
            if dist <= best_dist:
                best_id = oid
                best_dist = dist
        return best_id
