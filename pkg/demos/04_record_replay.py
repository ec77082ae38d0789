#!/usr/bin/env python3
"""Traces: record a session to text, replay it deterministically.

A trace is a plain text file of timestamped samples, events, and resets.
Replaying one reruns the identical pipeline, so two replays agree bit for
bit, and a trace survives being written to disk and read back.
"""

import tempfile
from pathlib import Path

from headteleop import ServiceConfig, load_scenario, load_trace, replay, write_trace
from headteleop.simulate import parse_script, simulate
from headteleop.trace import CorruptTrace, parse_trace

config = ServiceConfig()
script = parse_script("""
pose 0 0 0
event 0.3 start
pose 0.95 0 0
pose 1.0 0 50        # head down: drive forward at full speed
pose 3.95 0 50
pose 4.0 0 0
event 4.3 switch_arm
pose 4.95 0 0
pose 5.0 0 -50       # head up in arm mode: raise the lift
pose 6.95 0 -50
pose 7.0 0 0
end 7.5
""")
result, trace = simulate(script, load_scenario("practice"), config)
print(f"recorded {len(trace.records)} records "
      f"({result.ticks} ticks of simulation)")

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "demo.trace"
    write_trace(trace, path)
    text = path.read_text()
    print("\nfirst lines of the trace file:")
    for line in text.splitlines()[:4]:
        print(f"  {line}")

    again = replay(load_trace(path), config)
    print(f"\nreplay of the file matches the live run bit for bit: "
          f"{again.final_state == result.final_state and again.metrics == result.metrics}")

    third = replay(load_trace(path), config)
    print(f"replaying twice is identical: {third.metrics == again.metrics}")

    # Corruption is a typed error, not a crash.
    lines = text.splitlines()
    lines[5], lines[20] = lines[20], lines[5]  # shuffle two records
    try:
        parse_trace("\n".join(lines))
    except CorruptTrace as err:
        print(f"\ntampered trace is rejected: {err}")
