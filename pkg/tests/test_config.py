import pytest

from headteleop.config import MalformedConfig, ServiceConfig, parse_config
from headteleop.mapping import Actuator

FULL = """
listen_host = 0.0.0.0
listen_port = 9001
scenario = blanket
watchdog_ms = 450
strict_gating = false
recalibrate_on_start = false
trace_dir = /tmp/traces

[actuator base_translate]
v_max = 0.5

[actuator gripper]
v_max = 2.0
k = 0.05

[thresholds roll]
t_low_pos = 10
t_high_pos = 30
t_low_neg = -20
t_high_neg = -50

[shake]
amplitude_deg = 12
min_reversals = 4
window_ms = 2000
refractory_ms = 500

[limits]
lift_max = 1.3
grasp_radius = 0.1
"""


def test_defaults():
    config = ServiceConfig()
    assert config.port == 8765
    assert config.scenario == "cup"
    assert config.control.watchdog_ms == 300
    assert config.control.actuators[Actuator.BASE_TRANSLATE].v_max == 0.3
    assert config.strict_gating


def test_parse_full_config():
    config = parse_config(FULL)
    assert (config.host, config.port) == ("0.0.0.0", 9001)
    assert config.scenario == "blanket"
    assert config.control.watchdog_ms == 450
    assert not config.strict_gating
    assert not config.control.recalibrate_on_start
    assert config.trace_dir == "/tmp/traces"
    assert config.control.actuators[Actuator.BASE_TRANSLATE].v_max == 0.5
    assert config.control.actuators[Actuator.GRIPPER].k == 0.05
    assert config.control.actuators[Actuator.LIFT].v_max == 0.1  # untouched
    assert config.control.roll_thresholds.t_low_pos == 10
    assert config.control.pitch_thresholds.t_low_pos == 15  # untouched
    assert config.control.shake.min_reversals == 4
    assert config.limits.lift_max == 1.3
    assert config.limits.grasp_radius == 0.1
    assert config.limits.ext_max == 0.52  # untouched


def test_empty_config_is_default_parameters():
    config = parse_config("")
    assert config.hash_hex() == ServiceConfig().hash_hex()


@pytest.mark.parametrize("text,needle", [
    ("listen_port = 99999", "out of range"),
    ("watchdog_ms = -5", "positive"),
    ("[actuator warp_drive]\nv_max = 1", "actuator"),
    ("[actuator lift]\nv_max = -1", "positive"),
    ("[thresholds diagonal]\nt_low_pos = 1", "roll|pitch"),
    ("[thresholds roll]\nt_low_pos = 90", "t_low_pos"),
    ("[shake]\nbounce = 3", "unknown shake field"),
    ("[limits]\nwarp = 9", "unknown limit"),
    ("[mystery]\nx = 1", "unknown section"),
    ("what is this line", "key = value"),
])
def test_malformed_configs(text, needle):
    with pytest.raises(MalformedConfig, match=needle):
        parse_config(text)


def test_hash_is_stable_and_sensitive():
    assert ServiceConfig().hash_hex() == ServiceConfig().hash_hex()
    assert len(ServiceConfig().hash_hex()) == 64
    changed = parse_config("[actuator lift]\nv_max = 0.2")
    assert changed.hash_hex() != ServiceConfig().hash_hex()
    # Server-only knobs do not affect replay semantics or the hash.
    moved = parse_config("listen_port = 9999\nscenario = trash")
    assert moved.hash_hex() == ServiceConfig().hash_hex()
