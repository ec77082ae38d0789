import pytest
from hypothesis import given, strategies as st

from headteleop.angles import normalize_delta, wrap_degrees
from headteleop.mapping import (Actuator, ActuatorParams, AxisThresholds,
                                CalibrationState, NoSampleYet, axis_velocity,
                                calibrate, in_deadzone)
from headteleop.protocol import OrientationSample

PARAMS = ActuatorParams(Actuator.BASE_TRANSLATE, v_max=0.3)  # k -> 0.01/deg
THR = AxisThresholds()
CAL0 = CalibrationState(0.0, 0.0)


def reference_velocity(theta, theta_c, k, v_max):
    """Straight-line transcription of the five-case piecewise map; the
    independent oracle the implementation is checked against."""
    t_la = 15.0 + theta_c
    t_ha = 45.0 + theta_c
    t_lb = -15.0 + theta_c
    t_hb = -45.0 + theta_c
    if t_hb > theta:
        return -v_max
    if t_lb >= theta >= t_hb:
        return k * (theta - t_lb)
    if t_lb < theta < t_la:
        return 0.0
    if t_la <= theta <= t_ha:
        return k * (theta - t_la)
    return v_max


def minimal_delta_oracle(theta, theta_c):
    """Wrap by scanning whole-turn candidates for the smallest magnitude."""
    raw = theta - theta_c
    candidates = [raw + 360.0 * k for k in range(-5, 6)]
    best = min(candidates, key=abs)
    if best == -180.0:
        best = 180.0
    return best


def test_normalize_delta_examples():
    assert normalize_delta(30.0, 0.0) == 30.0
    assert normalize_delta(-175.0, 170.0) == pytest.approx(15.0)
    for theta in (-180.0, -90.0, 0.0, 45.0, 180.0):
        assert normalize_delta(theta, theta) == 0.0


@given(st.floats(-720, 720, allow_nan=False),
       st.floats(-720, 720, allow_nan=False))
def test_normalize_delta_matches_minimal_oracle(theta, theta_c):
    got = normalize_delta(theta, theta_c)
    assert -180.0 < got <= 180.0
    expected = minimal_delta_oracle(theta, theta_c)
    # The two agree except exactly on the seam, where both ends are valid.
    if abs(abs(expected) - 180.0) > 1e-6:
        assert got == pytest.approx(expected, abs=1e-9)


def test_deadzone_and_saturation_constants():
    assert axis_velocity(0.0, 0.0, THR, PARAMS) == 0.0
    assert axis_velocity(10.0, 0.0, THR, PARAMS) == 0.0
    assert axis_velocity(15.0, 0.0, THR, PARAMS) == 0.0
    assert axis_velocity(45.0, 0.0, THR, PARAMS) == pytest.approx(0.3)
    assert axis_velocity(60.0, 0.0, THR, PARAMS) == 0.3
    assert axis_velocity(-60.0, 0.0, THR, PARAMS) == -0.3


def test_ramp_values():
    assert axis_velocity(30.0, 0.0, THR, PARAMS) == pytest.approx(0.15)
    assert axis_velocity(-30.0, 0.0, THR, PARAMS) == pytest.approx(-0.15)
    assert axis_velocity(20.0, 0.0, THR, PARAMS) == pytest.approx(0.05)


def test_wrap_aware_evaluation():
    # Calibrated near the seam: a small physical tilt must stay small.
    assert axis_velocity(-175.0, 170.0, THR, PARAMS) == 0.0  # delta 15
    assert axis_velocity(-160.0, 170.0, THR, PARAMS) == pytest.approx(0.15)


@given(st.floats(-179.9, 179.9, allow_nan=False))
def test_odd_symmetry(d):
    plus = axis_velocity(d, 0.0, THR, PARAMS)
    minus = axis_velocity(-d, 0.0, THR, PARAMS)
    assert plus == pytest.approx(-minus, abs=1e-9)


@given(st.floats(-180, 180, exclude_min=True, allow_nan=False),
       st.floats(-180, 180, exclude_min=True, allow_nan=False))
def test_monotone_in_delta(d1, d2):
    lo, hi = sorted((d1, d2))
    assert (axis_velocity(lo, 0.0, THR, PARAMS)
            <= axis_velocity(hi, 0.0, THR, PARAMS) + 1e-12)


@given(st.floats(-1e6, 1e6, allow_nan=False),
       st.floats(-1e6, 1e6, allow_nan=False))
def test_saturation_bound(theta, theta_c):
    assert abs(axis_velocity(theta, theta_c, THR, PARAMS)) <= PARAMS.v_max


@given(st.floats(-179.9, 179.9, allow_nan=False),
       st.floats(-180, 180, exclude_min=True, allow_nan=False),
       st.floats(-180, 180, allow_nan=False))
def test_calibration_shift_invariance(d, theta_c, shift):
    theta = wrap_degrees(theta_c + d)
    base = axis_velocity(theta, theta_c, THR, PARAMS)
    shifted = axis_velocity(wrap_degrees(theta + shift),
                            wrap_degrees(theta_c + shift), THR, PARAMS)
    assert shifted == pytest.approx(base, abs=1e-9)


@given(st.floats(-180, 180, exclude_min=True, allow_nan=False))
def test_deadzone_exactness(d):
    v = axis_velocity(d, 0.0, THR, PARAMS)
    # Zero exactly on the closed band between the ramp zeros.
    assert (v == 0.0) == (THR.t_low_neg <= d <= THR.t_low_pos)


def test_continuity_on_fine_grid():
    # Index-based grid over (-180, 180] so float accumulation never steps
    # across the wrap seam, where the map legitimately jumps 2*v_max.
    k = PARAMS.gain(THR)
    prev = axis_velocity(-180.0 + 0.01, 0.0, THR, PARAMS)
    max_jump = 0.0
    for i in range(2, 36_001):
        cur = axis_velocity(-180.0 + i * 0.01, 0.0, THR, PARAMS)
        max_jump = max(max_jump, abs(cur - prev))
        prev = cur
    assert max_jump <= k * 0.011


def test_matches_reference_oracle_on_uniform_grid():
    import numpy as np
    rng = np.random.default_rng(7)
    thetas = rng.uniform(-180.0, 180.0, size=10_000)
    k = PARAMS.gain(THR)
    for theta in thetas:
        got = axis_velocity(float(theta), 0.0, THR, PARAMS)
        want = reference_velocity(float(theta), 0.0, k, PARAMS.v_max)
        assert abs(got - want) <= 1e-9


def test_asymmetric_thresholds_supported():
    thr = AxisThresholds(t_low_pos=10.0, t_high_pos=30.0,
                         t_low_neg=-20.0, t_high_neg=-50.0)
    assert axis_velocity(5.0, 0.0, thr, PARAMS) == 0.0
    assert axis_velocity(-15.0, 0.0, thr, PARAMS) == 0.0
    assert axis_velocity(35.0, 0.0, thr, PARAMS) == PARAMS.v_max
    with pytest.raises(ValueError):
        AxisThresholds(t_low_pos=10.0, t_high_pos=5.0)


def test_custom_gain_still_bounded():
    hot = ActuatorParams(Actuator.LIFT, v_max=0.1, k=1.0)
    assert axis_velocity(44.0, 0.0, THR, hot) == hot.v_max
    assert axis_velocity(-44.0, 0.0, THR, hot) == -hot.v_max


def test_in_deadzone():
    assert in_deadzone(5.0, -5.0, CAL0, THR, THR)
    assert not in_deadzone(20.0, 0.0, CAL0, THR, THR)
    assert not in_deadzone(15.0, 0.0, CAL0, THR, THR)  # boundary -> ramp
    assert not in_deadzone(0.0, -15.0, CAL0, THR, THR)
    # Wrapped: calibrated at 170, tilted to -175 is a 15 degree delta.
    cal = CalibrationState(170.0, 0.0)
    assert not in_deadzone(-175.0, 0.0, cal, THR, THR)
    assert in_deadzone(-176.0, 0.0, cal, THR, THR)


def test_calibrate_recenters():
    sample = OrientationSample(0, 0, 10.0, -3.0, 25.0)
    cal = calibrate(sample)
    assert cal == CalibrationState(10.0, -3.0)
    assert axis_velocity(10.0, cal.theta_c_roll, THR, PARAMS) == 0.0


def test_calibrate_across_seam():
    cal = calibrate(OrientationSample(0, 0, 170.0, 0.0, 0.0))
    # 170 -> -175 is a +15 degree delta: exactly the ramp start, velocity 0.
    assert normalize_delta(-175.0, cal.theta_c_roll) == pytest.approx(15.0)
    assert axis_velocity(-175.0, cal.theta_c_roll, THR, PARAMS) == pytest.approx(0.0)


def test_calibrate_requires_sample():
    with pytest.raises(NoSampleYet):
        calibrate(None)
