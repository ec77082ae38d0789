"""Head-orientation teleoperation of a simulated mobile manipulator.

The pipeline: a 20 Hz orientation stream (roll/pitch/yaw of the head) is
calibrated against a center pose, mapped through a deadzone/ramp/
saturation curve to actuator velocities, dispatched by the active mode
(drive, arm, wrist, gripper), and pushed at 10 Hz into a kinematic
simulator. Mode switches are gated by a yaw-axis head shake followed by a
command token. Sessions record to text traces that replay
deterministically into task metrics.
"""

from .angles import normalize_delta, wrap_degrees
from .config import ServiceConfig, load_config
from .mapping import (Actuator, ActuatorParams, AxisThresholds,
                      CalibrationState, NoSampleYet, axis_velocity,
                      calibrate, default_actuators, in_deadzone)
from .protocol import (ControlEvent, EventKind, NonFiniteAngle,
                       OrientationSample, ProtocolError, SampleStream,
                       SequenceStatus, WrongLength, check_sequence,
                       decode_sample, encode_sample, parse_token)
from .replay import ReplayResult, TaskMetrics, compute_metrics, replay
from .robot import (KinematicSim, NonFiniteCommand, Pose3, RobotLimits,
                    RobotState, WorldObject, clamp_report, end_effector_pose,
                    step)
from .scenarios import (MalformedScenario, PlaceInRegion, Region,
                        RemoveFromRegion, Scenario, ScenarioObject,
                        TaskProgress, WipeContacts, check_success,
                        load_scenario)
from .session import (CommandFrame, ControlParams, Mode, Session,
                      ShakeDetector, ShakeParams, dispatch, stop_all)
from .simulate import MalformedScript, Script, parse_script, simulate
from .trace import CorruptTrace, Trace, TraceRecorder, load_trace, write_trace

__version__ = "0.1.0"
