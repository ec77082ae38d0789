#!/usr/bin/env python3
"""Regenerate the bundled expert scripts and traces.

Each task is authored as a sequence of held head poses with mode-switch
events in between, rendered to a script file, run through the headless
simulator, and saved as a replayable trace. Pose transitions are placed
50 ms before tick-aligned segment starts so every 100 ms tick sees either
the neutral pose or the held pose, never a mid-ramp interpolant; that
makes segment displacements exact multiples of v * duration.

Run from the repo root:  python3 tools/build_traces.py
"""

from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from headteleop.config import ServiceConfig
from headteleop.scenarios import load_scenario
from headteleop.simulate import parse_script, simulate
from headteleop.trace import write_trace

SCRIPT_DIR = REPO / "src" / "headteleop" / "data" / "scripts"
TRACE_DIR = REPO / "src" / "headteleop" / "data" / "traces"

TRANSITION_S = 0.05  # one 20 Hz sample; keeps ticks off the ramp


class ScriptAuthor:
    """Builds a script from tick-aligned held-pose segments."""

    def __init__(self) -> None:
        self.t = 0.0
        self._segments: list[tuple[float, float, float, float]] = []
        self._events: list[tuple[float, str]] = []
        self._notes: list[tuple[float, str]] = []

    def pause(self, dur_s: float) -> "ScriptAuthor":
        self.t = round(self.t + dur_s, 3)
        return self

    def event(self, kind: str) -> "ScriptAuthor":
        self._events.append((self.t, kind))
        return self.pause(0.4)

    def hold(self, roll: float, pitch: float, dur_s: float,
             note: str = "") -> "ScriptAuthor":
        start = self.t
        end = round(start + dur_s, 3)
        self._segments.append((start, end, roll, pitch))
        if note:
            self._notes.append((start, note))
        self.t = end
        return self.pause(0.4)

    def render(self, title: str) -> str:
        keys: list[tuple[float, float, float]] = [(0.0, 0.0, 0.0)]
        for start, end, roll, pitch in self._segments:
            keys.append((round(start - TRANSITION_S, 3), 0.0, 0.0))
            keys.append((start, roll, pitch))
            keys.append((round(end - TRANSITION_S, 3), roll, pitch))
            keys.append((end, 0.0, 0.0))
        notes = dict(self._notes)
        lines = [f"# {title}", ""]
        directives: list[tuple[float, int, str]] = []
        for t, roll, pitch in keys:
            comment = f"  # {notes[t]}" if t in notes else ""
            directives.append((t, 0, f"pose {t:g} {roll:g} {pitch:g}{comment}"))
        for t, kind in self._events:
            directives.append((t, 1, f"event {t:g} {kind}"))
        directives.sort(key=lambda d: (d[0], d[1]))
        lines.extend(text for _, _, text in directives)
        lines.append(f"end {round(self.t + 1.0, 3):g}")
        return "\n".join(lines) + "\n"


def author_cup() -> tuple[str, str]:
    a = ScriptAuthor()
    a.pause(0.5).event("start")
    a.hold(0, 50, 5.0, "drive to the counter")
    a.event("switch_arm")
    a.hold(0, -50, 2.5, "raise the lift to counter height")
    a.hold(50, 0, 1.5, "extend over the cup")
    a.event("switch_gripper")
    a.hold(0, -50, 0.4, "close on the cup")
    a.event("switch_arm")
    a.hold(0, -50, 0.5, "lift the cup clear")
    a.event("switch_drive")
    a.hold(0, 50, 5.0, "carry to the side table")
    a.event("switch_gripper")
    a.hold(0, 50, 0.7, "open to place the cup")
    return "cup retrieval", a.render("cup retrieval")


def author_trash() -> tuple[str, str]:
    a = ScriptAuthor()
    a.pause(0.5).event("start")
    a.hold(0, 50, 3.0, "drive alongside the trash")
    a.event("switch_arm")
    a.hold(50, 0, 2.5, "extend over the trash")
    a.hold(0, 50, 5.5, "lower to the floor")
    a.event("switch_gripper")
    a.hold(0, -50, 0.4, "close on the trash")
    a.event("switch_arm")
    a.hold(0, -50, 5.0, "lift to bin height")
    a.event("switch_drive")
    a.hold(0, 50, 5.0, "carry to the bin")
    a.event("switch_gripper")
    a.hold(0, 50, 0.7, "open to drop it in")
    return "trash pickup", a.render("trash pickup")


def author_blanket() -> tuple[str, str]:
    a = ScriptAuthor()
    a.pause(0.5).event("start")
    a.hold(-50, 0, 3.2, "turn left toward the legs")
    a.event("switch_arm")
    a.hold(50, 0, 3.0, "extend over the blanket")
    a.event("switch_gripper")
    a.hold(0, 50, 0.6, "open the gripper")
    a.hold(0, -50, 0.8, "close on the blanket")
    a.event("switch_arm")
    a.hold(0, -50, 1.0, "lift the blanket")
    a.event("switch_drive")
    a.hold(0, 50, 4.0, "drive forward to drag it off")
    return "blanket removal", a.render("blanket removal")


def author_cleaning() -> tuple[str, str]:
    a = ScriptAuthor()
    a.pause(0.5).event("start")
    a.hold(0, 50, 2.0, "drive to the side table")
    a.event("switch_arm")
    a.hold(50, 0, 3.0, "extend over the towel")
    a.hold(0, -50, 1.0, "raise to towel height")
    a.event("switch_gripper")
    a.hold(0, -50, 0.4, "close on the towel")
    a.event("switch_drive")
    a.hold(0, 50, 4.0, "sweep the towel along the leg")
    return "leg cleaning", a.render("leg cleaning")


def author_practice() -> tuple[str, str]:
    a = ScriptAuthor()
    a.pause(0.5).event("start")
    a.hold(0, 50, 3.0, "drive to the counter")
    a.event("switch_arm")
    a.hold(0, -50, 2.5, "raise the lift")
    a.hold(50, 0, 1.5, "extend over the block")
    a.event("switch_gripper")
    a.hold(0, -50, 0.4, "close on the block")
    a.event("switch_arm")
    a.hold(0, -50, 1.5, "lift the block off the counter")
    return "practice grab", a.render("practice grab")


AUTHORS = {
    "cup": author_cup,
    "trash": author_trash,
    "blanket": author_blanket,
    "cleaning": author_cleaning,
    "practice": author_practice,
}


def main() -> int:
    SCRIPT_DIR.mkdir(parents=True, exist_ok=True)
    TRACE_DIR.mkdir(parents=True, exist_ok=True)
    config = ServiceConfig()
    failures = 0
    for scenario_id, author in AUTHORS.items():
        title, text = author()
        script_path = SCRIPT_DIR / f"{scenario_id}.script"
        script_path.write_text(text, encoding="utf-8")
        script = parse_script(text, name=str(script_path))
        scenario = load_scenario(scenario_id)
        result, trace = simulate(script, scenario, config)
        trace_path = TRACE_DIR / f"{scenario_id}.trace"
        write_trace(trace, trace_path)
        m = result.metrics
        status = "ok" if m.completed else "FAILED"
        print(f"{scenario_id:10s} {status:6s} time={m.task_time_s:6.1f}s "
              f"switches={m.mode_switches} dist={m.commanded_distance:.2f}m "
              f"({title})")
        if not m.completed:
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
