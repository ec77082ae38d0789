#!/usr/bin/env python3
"""The mode state machine and the shake trigger.

Mode switching is a two-step gesture: a light left-right head shake on
the yaw axis opens a command window (and pauses all motion), then a
command token picks the mode. Slow, deliberate head turns never open the
window, so the operator can look around freely.
"""

import math

from headteleop import ControlEvent, EventKind, Mode, Session
from headteleop.protocol import OrientationSample
from headteleop.session import ShakeDetector, ShakeParams


def feed(detector, description, yaw_at, duration_s):
    fired = None
    for i in range(int(duration_s * 20) + 1):
        t = i / 20
        sample = OrientationSample(i, int(t * 1000), 0.0, 0.0, yaw_at(t))
        if detector.push(sample, 0.0) and fired is None:
            fired = t
    verdict = f"fired at {fired:.2f}s" if fired is not None else "no trigger"
    print(f"  {description:<42} {verdict}")


print("shake detector on synthetic yaw signals:")
feed(ShakeDetector(ShakeParams()), "steady gaze (constant yaw)",
     lambda t: 2.0, 2.0)
feed(ShakeDetector(ShakeParams()), "slow 30 deg look to the side",
     lambda t: 15.0 * t, 2.0)
feed(ShakeDetector(ShakeParams()), "light 2 Hz shake, +/-15 deg",
     lambda t: 15.0 * math.sin(2 * math.pi * 2 * t), 2.0)
feed(ShakeDetector(ShakeParams()), "tiny 2 Hz wiggle, +/-6 deg",
     lambda t: 6.0 * math.sin(2 * math.pi * 2 * t), 2.0)

# The session itself: uncalibrated until "start", then one mode at a time.
print("\nsession walkthrough:")
session = Session()
session.ingest_sample(OrientationSample(0, 0, 4.0, -2.0, 0.0))
print(f"  before start: active={session.active}, "
      f"tick -> {session.tick(0).velocities or 'all zero'}")

session.handle_event(ControlEvent(0, EventKind.START))
print(f"  after start: mode={session.mode.value}, "
      f"center=({session.calibration.theta_c_roll}, "
      f"{session.calibration.theta_c_pitch})")

for kind in (EventKind.SWITCH_ARM, EventKind.UNRECOGNIZED,
             EventKind.SWITCH_GRIPPER):
    applied = session.handle_event(ControlEvent(0, kind))
    print(f"  {kind.value:<15} applied={applied}, mode={session.mode.value}")

# While the command window is open, motion is suppressed.
session.handle_event(ControlEvent(0, EventKind.SWITCH_DRIVE))
session.ingest_sample(OrientationSample(1, 50, 0.0, 60.0, 0.0))
print(f"\n  head down 60 deg in {session.mode.value}: "
      f"tick -> {dict(session.tick(100).velocities)}")
session.begin_command_window()
print(f"  same pose while listening: tick -> "
      f"{session.tick(200).velocities or 'all zero'}")
assert session.mode is Mode.DRIVE
