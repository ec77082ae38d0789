import math

import pytest
from hypothesis import given, strategies as st

from headteleop.mapping import Actuator
from headteleop.robot import (DEFAULT_LIMITS, KinematicSim, NonFiniteCommand,
                              Pose3, RobotLimits, RobotState, WorldObject,
                              clamp_report, end_effector_pose, step)
from headteleop.session import CommandFrame


def frame(t_ms=0, **velocities):
    return CommandFrame(t_ms, {Actuator[k.upper()]: v
                               for k, v in velocities.items()})


def test_zero_frame_leaves_state_identical():
    state = RobotState(base_x=1.0, heading=0.3, lift=0.7, grip=0.2)
    assert step(state, CommandFrame(0, {}), 0.1) == state


def test_straight_drive_integrates():
    state = RobotState()
    for _ in range(10):
        state = step(state, frame(base_translate=0.3), 0.1)
    assert state.base_x == pytest.approx(0.3, abs=1e-12)
    assert state.base_y == 0.0
    assert state.heading == 0.0


def test_rotation_then_drive_follows_heading():
    state = RobotState()
    for _ in range(10):
        state = step(state, frame(base_rotate=math.pi / 2), 0.1)
    assert state.heading == pytest.approx(math.pi / 2)
    for _ in range(10):
        state = step(state, frame(base_translate=0.2), 0.1)
    assert state.base_x == pytest.approx(0.0, abs=1e-9)
    assert state.base_y == pytest.approx(0.2, abs=1e-9)


def test_lift_clamps_at_floor():
    state = RobotState(lift=0.05)
    for _ in range(10):
        state = step(state, frame(lift=-0.1), 0.1)
    assert state.lift == 0.0


def test_all_joints_clamp_at_limits():
    state = RobotState()
    big = frame(lift=10.0, arm_extend=10.0, wrist_pitch=10.0, wrist_yaw=10.0,
                gripper=10.0)
    for _ in range(5):
        state = step(state, big, 0.1)
    lim = DEFAULT_LIMITS
    assert state.lift == lim.lift_max
    assert state.arm_ext == lim.ext_max
    assert state.wrist_pitch == lim.wrist_pitch_max
    assert state.wrist_yaw == lim.wrist_yaw_max
    assert state.grip == 1.0


def test_non_finite_command_rejected():
    state = RobotState()
    with pytest.raises(NonFiniteCommand):
        step(state, frame(lift=math.nan), 0.1)
    with pytest.raises(NonFiniteCommand):
        step(state, frame(base_translate=math.inf), 0.1)


def test_end_effector_geometry():
    lim = DEFAULT_LIMITS
    ee = end_effector_pose(RobotState(lift=0.4), lim)
    assert (ee.x, ee.y, ee.z) == (0.0, pytest.approx(-0.2), 0.4)

    ee = end_effector_pose(RobotState(heading=math.pi / 2, lift=0.4), lim)
    assert ee.x == pytest.approx(0.2)
    assert ee.y == pytest.approx(0.0, abs=1e-12)

    ee = end_effector_pose(RobotState(arm_ext=0.5, lift=0.4), lim)
    assert ee.y == pytest.approx(-0.7)


velocity = st.floats(-2.0, 2.0, allow_nan=False)
joint_frames = st.builds(
    lambda lift, ext, wp, wy, grip: CommandFrame(0, {
        Actuator.LIFT: lift, Actuator.ARM_EXTEND: ext,
        Actuator.WRIST_PITCH: wp, Actuator.WRIST_YAW: wy,
        Actuator.GRIPPER: grip}),
    velocity, velocity, velocity, velocity, velocity)


@given(st.lists(joint_frames, max_size=40))
def test_joints_never_leave_limits(frames):
    state = RobotState()
    lim = DEFAULT_LIMITS
    for f in frames:
        state = step(state, f, 0.1)
        assert 0.0 <= state.lift <= lim.lift_max
        assert 0.0 <= state.arm_ext <= lim.ext_max
        assert lim.wrist_pitch_min <= state.wrist_pitch <= lim.wrist_pitch_max
        assert lim.wrist_yaw_min <= state.wrist_yaw <= lim.wrist_yaw_max
        assert 0.0 <= state.grip <= 1.0


@given(st.floats(-0.5, 0.5, allow_nan=False),
       st.floats(-0.5, 0.5, allow_nan=False))
def test_joint_moves_reverse_away_from_clamps(lift_v, ext_v):
    # Start mid-range with small commands so no clamp is hit.
    state = RobotState(lift=0.5, arm_ext=0.25)
    forward = step(state, frame(lift=lift_v, arm_extend=ext_v), 0.1)
    back = step(forward, frame(lift=-lift_v, arm_extend=-ext_v), 0.1)
    assert back.lift == pytest.approx(state.lift, abs=1e-9)
    assert back.arm_ext == pytest.approx(state.arm_ext, abs=1e-9)


@given(st.floats(-0.3, 0.3, allow_nan=False))
def test_pure_translation_reverses(v):
    state = RobotState(heading=0.7)
    forward = step(state, frame(base_translate=v), 0.1)
    back = step(forward, frame(base_translate=-v), 0.1)
    assert back.base_x == pytest.approx(state.base_x, abs=1e-9)
    assert back.base_y == pytest.approx(state.base_y, abs=1e-9)


@given(st.floats(-1.0, 1.0, allow_nan=False))
def test_pure_rotation_reverses(omega):
    state = RobotState(heading=0.2)
    forward = step(state, frame(base_rotate=omega), 0.1)
    back = step(forward, frame(base_rotate=-omega), 0.1)
    assert back.heading == pytest.approx(state.heading, abs=1e-9)


def test_determinism_bit_for_bit():
    frames = [frame(base_translate=0.13, base_rotate=-0.21, lift=0.05),
              frame(arm_extend=0.07, gripper=-0.4)] * 25
    runs = []
    for _ in range(2):
        state = RobotState()
        for f in frames:
            state = step(state, f, 0.1)
        runs.append(state)
    assert runs[0] == runs[1]


def test_clamp_report():
    before = RobotState(lift=0.05)
    after = step(before, frame(lift=-0.1), 1.0)
    assert clamp_report(before, after) == {Actuator.LIFT}

    quiet = step(before, CommandFrame(0, {}), 0.1)
    assert clamp_report(before, quiet) == set()

    both_before = RobotState(lift=0.05, arm_ext=0.5)
    both_after = step(both_before, frame(lift=-0.1, arm_extend=0.1), 1.0)
    assert clamp_report(both_before, both_after) == {Actuator.LIFT,
                                                     Actuator.ARM_EXTEND}


# --- grasp model --------------------------------------------------------------

def sim_with_cup(grip=0.5):
    cup = WorldObject("cup", Pose3(0.0, -0.2, 0.5), attachable=True)
    sim = KinematicSim(objects=[cup], state=RobotState(grip=grip))
    return sim


def close_until(sim, target):
    while sim.state.grip > target:
        sim.step(frame(gripper=-1.0), 0.1)


def test_attach_on_closing_near_object():
    sim = sim_with_cup()
    close_until(sim, 0.2)
    assert sim.state.held_object == "cup"


def test_no_attach_when_object_out_of_reach():
    far = WorldObject("cup", Pose3(1.0, 0.0, 0.5), attachable=True)
    sim = KinematicSim(objects=[far])
    close_until(sim, 0.1)
    assert sim.state.held_object is None


def test_no_attach_for_non_attachable():
    fixture = WorldObject("tape", Pose3(0.0, -0.2, 0.5), attachable=False)
    sim = KinematicSim(objects=[fixture])
    close_until(sim, 0.1)
    assert sim.state.held_object is None


def test_held_object_tracks_end_effector():
    sim = sim_with_cup()
    close_until(sim, 0.2)
    for _ in range(10):
        sim.step(frame(base_translate=0.3, lift=0.1), 0.1)
        assert sim.objects["cup"].pose == end_effector_pose(sim.state)


def test_release_places_object_and_hysteresis_holds_in_between():
    sim = sim_with_cup()
    close_until(sim, 0.2)
    # Opening into the hysteresis band keeps the grasp.
    for _ in range(3):
        sim.step(frame(gripper=1.0), 0.1)
    assert 0.3 < sim.state.grip <= 0.7
    assert sim.state.held_object == "cup"
    # Past the release threshold the object stays where it was let go.
    while sim.state.grip <= 0.75:
        sim.step(frame(gripper=1.0), 0.1)
    assert sim.state.held_object is None
    drop = sim.objects["cup"].pose
    sim.step(frame(base_translate=0.3), 0.1)
    assert sim.objects["cup"].pose == drop


def test_closed_gripper_does_not_grab_in_passing():
    sim = sim_with_cup(grip=0.1)
    sim.objects["cup"].pose = Pose3(0.3, -0.2, 0.5)
    for _ in range(20):  # drive past the cup with the gripper parked shut
        sim.step(frame(base_translate=0.3), 0.1)
    assert sim.state.held_object is None


def test_reset_restores_world():
    cup = WorldObject("cup", Pose3(0.0, -0.2, 0.5), attachable=True)
    sim = KinematicSim(objects=[cup])
    close_until(sim, 0.2)
    sim.step(frame(base_translate=0.3), 0.1)
    sim.reset(RobotState(), [cup])
    assert sim.state == RobotState()
    assert sim.state.held_object is None
    assert sim.objects["cup"].pose == Pose3(0.0, -0.2, 0.5)


def test_limits_validation():
    with pytest.raises(ValueError):
        RobotLimits(lift_max=0.0)
    with pytest.raises(ValueError):
        RobotLimits(wrist_pitch_min=1.0, wrist_pitch_max=-1.0)
