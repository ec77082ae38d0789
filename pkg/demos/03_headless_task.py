#!/usr/bin/env python3
"""Run the bundled blanket-removal script through the whole pipeline.

The script is the classic five-phase sequence: turn toward the legs,
extend the arm, open the gripper (then grab), lift, and drive forward to
drag the blanket clear. Synthesis turns the scripted poses into a 20 Hz
stream; the replay engine does the rest.
"""

from pathlib import Path

from headteleop import ServiceConfig, load_scenario
from headteleop.simulate import load_script, simulate

DATA = Path(__file__).resolve().parents[1] / "src" / "headteleop" / "data"

scenario = load_scenario("blanket")
script = load_script(DATA / "scripts" / "blanket.script")
print(f"scenario: {scenario.scenario_id}, "
      f"{len(scenario.objects)} object(s), "
      f"time limit {scenario.time_limit_s:.0f}s")
print(f"script: {len(script.poses)} pose keyframes, "
      f"{len(script.events)} events, {script.end_ms / 1000:.1f}s long")

result, trace = simulate(script, scenario, ServiceConfig())

print("\nmetrics:")
for line in result.metrics.as_lines():
    print(f"  {line}")

state = result.final_state
print(f"\nfinal robot state: base=({state.base_x:.2f}, {state.base_y:.2f}) "
      f"heading={state.heading:.2f} lift={state.lift:.2f} "
      f"grip={state.grip:.2f} holding={state.held_object}")
blanket = result.final_objects["blanket"]
print(f"blanket ended at ({blanket.x:.2f}, {blanket.y:.2f}, {blanket.z:.2f})")
assert result.metrics.completed
