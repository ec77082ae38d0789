import subprocess
import sys
from pathlib import Path

import pytest

from headteleop.cli import main
from headteleop.config import ServiceConfig
from headteleop.replay import replay
from headteleop.scenarios import load_scenario
from headteleop.simulate import (MalformedScript, load_script, parse_script,
                                 simulate, synthesize_trace)
from headteleop.trace import load_trace

DATA = Path(__file__).resolve().parents[1] / "src" / "headteleop" / "data"
CONFIG = ServiceConfig()

DRIVE_SCRIPT = """
pose 0 0 0
event 0.2 start
pose 0.95 0 0
pose 1.0 0 30
pose 2.95 0 30
pose 3.0 0 0
end 3.5
"""


def test_parse_script_basics():
    script = parse_script(DRIVE_SCRIPT)
    assert script.end_ms == 3500
    assert len(script.poses) == 5
    assert script.events[0].t_ms == 200


@pytest.mark.parametrize("text,needle", [
    ("pose 0 0", "pose needs"),
    ("pose -1 0 0", "negative time"),
    ("pose 1 0 0\npose 1 5 5", "strictly increase"),
    ("event 0 levitate", "unknown event kind"),
    ("teleport 0", "unknown directive"),
    ("pose 5 0 0\nend 2", "end time precedes"),
    ("pose 0 a b", "bad pose angles"),
])
def test_malformed_scripts(text, needle):
    with pytest.raises(MalformedScript, match=needle):
        parse_script(text)


def test_hold_pitch_30_for_two_seconds_drives_030():
    script = parse_script(DRIVE_SCRIPT)
    result, _ = simulate(script, load_scenario("cup"), CONFIG)
    assert result.metrics.commanded_distance == pytest.approx(0.3, abs=1e-9)


def test_script_without_start_never_moves():
    script = parse_script("pose 0 0 60\npose 5 0 60\n")
    result, _ = simulate(script, load_scenario("cup"), CONFIG)
    assert result.final_state.base_x == 0.0
    assert not result.metrics.completed
    assert result.metrics.nonzero_command_fraction == 0.0


def test_synthesized_trace_interpolates_at_20hz():
    script = parse_script("pose 0 0 0\npose 1 0 40\n")
    trace = synthesize_trace(script, "cup", CONFIG)
    samples = trace.records
    assert [s.t_ms for s in samples] == list(range(0, 1050, 50))
    assert samples[10].pitch == pytest.approx(20.0)  # halfway up the ramp


def test_simulate_equals_replay_of_emitted_trace(tmp_path):
    script = load_script(DATA / "scripts" / "trash.script")
    out = tmp_path / "trash.trace"
    result, _ = simulate(script, load_scenario("trash"), CONFIG,
                         emit_trace_path=out)
    reloaded = replay(load_trace(out), CONFIG)
    assert reloaded.metrics == result.metrics
    assert reloaded.final_state == result.final_state


def test_bundled_scripts_complete_their_scenarios():
    for scenario_id in ("cup", "trash", "blanket", "cleaning", "practice"):
        script = load_script(DATA / "scripts" / f"{scenario_id}.script")
        result, _ = simulate(script, load_scenario(scenario_id), CONFIG)
        assert result.metrics.completed, scenario_id


# --- command line ---------------------------------------------------------------

def run_cli(*args, env=None):
    import os
    merged = dict(os.environ)
    if env:
        merged.update(env)
    return subprocess.run([sys.executable, "-m", "headteleop.cli", *args],
                          capture_output=True, text=True, timeout=120,
                          env=merged)


def test_cli_replay_bundled_cup_exits_zero():
    proc = run_cli("replay", str(DATA / "traces" / "cup.trace"))
    assert proc.returncode == 0, proc.stderr
    lines = dict(line.split("=", 1) for line in proc.stdout.splitlines())
    assert lines["completed"] == "true"
    assert float(lines["task_time_s"]) < 840.0


def test_cli_replay_empty_trace_exits_one(tmp_path):
    empty = tmp_path / "empty.trace"
    empty.write_text("")
    proc = run_cli("replay", str(empty))
    assert proc.returncode == 1
    assert "task_time_s=840.0" in proc.stdout
    assert "completed=false" in proc.stdout


def test_cli_replay_bad_path_exits_two_without_partial_output():
    proc = run_cli("replay", "/nonexistent/file.trace")
    assert proc.returncode == 2
    assert proc.stdout == ""
    assert "error:" in proc.stderr


def test_cli_replay_corrupt_trace_exits_two(tmp_path):
    bad = tmp_path / "bad.trace"
    bad.write_text("garbage\n")
    proc = run_cli("replay", str(bad))
    assert proc.returncode == 2
    assert "error:" in proc.stderr


def test_cli_metrics_prints_key_values():
    proc = run_cli("metrics", str(DATA / "traces" / "practice.trace"))
    assert proc.returncode == 0
    for key in ("completed", "task_time_s", "mode_switches", "resets",
                "commanded_distance", "nonzero_command_fraction"):
        assert any(line.startswith(f"{key}=")
                   for line in proc.stdout.splitlines()), key


def test_cli_simulate_blanket_script_exits_zero(tmp_path):
    out = tmp_path / "blanket.trace"
    proc = run_cli("simulate", "--scenario", "blanket",
                   "--script", str(DATA / "scripts" / "blanket.script"),
                   "--emit-trace", str(out))
    assert proc.returncode == 0, proc.stderr
    assert "completed=true" in proc.stdout
    assert out.exists()
    proc2 = run_cli("replay", str(out))
    assert proc2.returncode == 0


def test_cli_simulate_malformed_script_exits_two(tmp_path):
    bad = tmp_path / "bad.script"
    bad.write_text("warp 9\n")
    proc = run_cli("simulate", "--scenario", "cup", "--script", str(bad))
    assert proc.returncode == 2


def test_cli_respects_config_file(tmp_path):
    config = tmp_path / "slow.conf"
    config.write_text("[actuator base_translate]\nv_max = 0.15\n")
    script = tmp_path / "drive.script"
    script.write_text(DRIVE_SCRIPT)
    proc = run_cli("simulate", "--scenario", "cup", "--script", str(script),
                   "--config", str(config))
    assert proc.returncode == 1  # runs, but the cup is never placed
    lines = dict(line.split("=", 1) for line in proc.stdout.splitlines())
    # Half the default ramp gain: same pose now commands half the speed.
    assert float(lines["commanded_distance"]) == pytest.approx(0.15, abs=1e-9)


def test_config_env_var_is_honored(tmp_path):
    config = tmp_path / "slow.conf"
    config.write_text("[actuator base_translate]\nv_max = 0.15\n")
    script = tmp_path / "drive.script"
    script.write_text(DRIVE_SCRIPT)
    proc = run_cli("simulate", "--scenario", "cup", "--script", str(script),
                   env={"HEADTELEOP_CONFIG": str(config)})
    lines = dict(line.split("=", 1) for line in proc.stdout.splitlines())
    assert float(lines["commanded_distance"]) == pytest.approx(0.15, abs=1e-9)


def test_addr_env_var_must_be_host_port():
    proc = run_cli("metrics", str(DATA / "traces" / "cup.trace"),
                   env={"HEADTELEOP_ADDR": "nonsense"})
    assert proc.returncode == 2
    proc = run_cli("metrics", str(DATA / "traces" / "cup.trace"),
                   env={"HEADTELEOP_ADDR": "0.0.0.0:9900"})
    assert proc.returncode == 0


def test_main_entry_returns_int():
    assert main(["replay", str(DATA / "traces" / "cup.trace")]) == 0
