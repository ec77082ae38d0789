#!/usr/bin/env python3
"""Walkthrough of the head-angle to velocity mapping.

A head axis angle is measured relative to the calibrated center. Within
15 degrees of center nothing moves (the deadzone), from 15 to 45 degrees
the commanded velocity ramps linearly, and past 45 degrees it saturates
at the actuator's velocity limit.
"""

from headteleop import (ActuatorParams, Actuator, AxisThresholds,
                        CalibrationState, axis_velocity, calibrate,
                        in_deadzone)
from headteleop.protocol import OrientationSample

params = ActuatorParams(Actuator.BASE_TRANSLATE, v_max=0.3)
thresholds = AxisThresholds()

print("angle -> base velocity (calibrated at 0)")
print(f"{'angle':>8} {'velocity':>10}")
for angle in range(-90, 95, 5):
    v = axis_velocity(angle, 0.0, thresholds, params)
    bar = "#" * int(round(abs(v) / params.v_max * 20))
    side = bar.rjust(20) if v < 0 else bar.ljust(20)
    print(f"{angle:>8} {v:>10.3f}  {'-' if v < 0 else '+'}|{side}|")

# Calibration re-centers the whole curve: a user who starts with their
# head tilted 10 degrees right gets the same feel as one starting level.
print("\ncalibration shifts the curve, not the user:")
sample = OrientationSample(seq=0, t_ms=0, roll=10.0, pitch=-3.0, yaw=0.0)
cal = calibrate(sample)
for angle in (10.0, 25.0, 55.0):
    v = axis_velocity(angle, cal.theta_c_roll, thresholds, params)
    print(f"  roll {angle:5.1f} deg with center {cal.theta_c_roll} "
          f"-> {v:.3f} m/s")

# The full stop: both axes inside the deadzone.
print("\nfull-stop deadzone check (roll, pitch):")
for roll, pitch in ((5, -5), (20, 0), (14.9, 14.9)):
    stopped = in_deadzone(roll, pitch, CalibrationState(0.0, 0.0),
                          thresholds, thresholds)
    print(f"  ({roll:5.1f}, {pitch:5.1f}) -> {'stop' if stopped else 'move'}")

# The wrap seam never produces a runaway command: calibrated at 170
# degrees, a reading of -175 is a 15 degree tilt, not a -345 degree one.
print("\nwrap-aware delta near +/-180:")
v = axis_velocity(-175.0, 170.0, thresholds, params)
print(f"  center 170, reading -175 -> velocity {v:.3f} (ramp start, zero)")
