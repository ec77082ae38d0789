"""Headless simulation from a timed head-pose script.

A script declares pose keyframes (piecewise-linear between them), control
events, and optional resets; synthesis turns it into a 20 Hz sample
stream, which then runs through the ordinary replay engine. This is the
CI harness: the same pipeline a live operator drives, minus the human.

Script format, one directive per line (``#`` comments allowed):

    pose <t_s> <roll> <pitch> [<yaw>]
    event <t_s> <kind>
    reset <t_s>
    end <t_s>
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import ServiceConfig
from .protocol import ControlEvent, EventKind, OrientationSample
from .replay import ReplayResult, SAMPLE_MS, replay
from .scenarios import Scenario
from .trace import Trace, TraceRecord, ResetRecord, sort_records

__all__ = ["Script", "PoseKey", "MalformedScript", "parse_script",
           "load_script", "synthesize_trace", "simulate"]


class MalformedScript(ValueError):
    """Script text failed validation; the message carries the location."""


@dataclass(frozen=True)
class PoseKey:
    t_ms: int
    roll: float
    pitch: float
    yaw: float


@dataclass(frozen=True)
class Script:
    poses: tuple[PoseKey, ...]
    events: tuple[ControlEvent, ...]
    resets: tuple[int, ...]
    end_ms: int


def load_script(path: str | Path) -> Script:
    return parse_script(Path(path).read_text(encoding="utf-8"), name=str(path))


def parse_script(text: str, name: str = "<script>") -> Script:
    poses: list[PoseKey] = []
    events: list[ControlEvent] = []
    resets: list[int] = []
    end_ms: int | None = None

    def as_ms(token: str, where: str) -> int:
        try:
            t = float(token)
        except ValueError:
            raise MalformedScript(f"{where}: bad time {token!r}") from None
        if t < 0:
            raise MalformedScript(f"{where}: negative time {token!r}")
        return round(t * 1000.0)

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{name}: line {line_no}"
        parts = line.split()
        directive = parts[0]
        if directive == "pose":
            if len(parts) not in (4, 5):
                raise MalformedScript(f"{where}: pose needs t roll pitch [yaw]")
            t_ms = as_ms(parts[1], where)
            try:
                roll, pitch = float(parts[2]), float(parts[3])
                yaw = float(parts[4]) if len(parts) == 5 else 0.0
            except ValueError:
                raise MalformedScript(f"{where}: bad pose angles") from None
            if poses and t_ms <= poses[-1].t_ms:
                raise MalformedScript(f"{where}: pose times must strictly increase")
            poses.append(PoseKey(t_ms, roll, pitch, yaw))
        elif directive == "event":
            if len(parts) != 3:
                raise MalformedScript(f"{where}: event needs t kind")
            t_ms = as_ms(parts[1], where)
            try:
                kind = EventKind(parts[2])
            except ValueError:
                raise MalformedScript(f"{where}: unknown event kind {parts[2]!r}") from None
            events.append(ControlEvent(t_ms, kind))
        elif directive == "reset":
            if len(parts) != 2:
                raise MalformedScript(f"{where}: reset needs t")
            resets.append(as_ms(parts[1], where))
        elif directive == "end":
            if len(parts) != 2:
                raise MalformedScript(f"{where}: end needs t")
            end_ms = as_ms(parts[1], where)
        else:
            raise MalformedScript(f"{where}: unknown directive {directive!r}")

    times = ([k.t_ms for k in poses] + [e.t_ms for e in events] + resets)
    if end_ms is None:
        end_ms = max(times, default=0)
    elif times and end_ms < max(times):
        raise MalformedScript(f"{name}: end time precedes the last directive")
    return Script(tuple(poses), tuple(events), tuple(resets), end_ms)


def synthesize_trace(script: Script, scenario_id: str,
                     config: ServiceConfig) -> Trace:
    """Sample the scripted pose timeline at 20 Hz into a replayable trace.

    Angles are quantized to the 4 decimal places the trace format carries,
    so in-memory replay and a written-then-parsed trace agree exactly.
    """
    grid = np.arange(0, script.end_ms + SAMPLE_MS, SAMPLE_MS)
    if script.poses:
        key_t = np.array([k.t_ms for k in script.poses], dtype=float)
        rolls = np.interp(grid, key_t, [k.roll for k in script.poses])
        pitches = np.interp(grid, key_t, [k.pitch for k in script.poses])
        yaws = np.interp(grid, key_t, [k.yaw for k in script.poses])
    else:
        rolls = pitches = yaws = np.zeros_like(grid, dtype=float)

    records: list[TraceRecord] = [
        OrientationSample.normalized(seq, int(t_ms),
                                     round(float(r), 4),
                                     round(float(p), 4),
                                     round(float(y), 4))
        for seq, (t_ms, r, p, y) in enumerate(zip(grid, rolls, pitches, yaws))
    ]
    records.extend(script.events)
    records.extend(ResetRecord(t) for t in script.resets)
    return Trace(scenario_id, config.hash_hex(), sort_records(records))


def simulate(script: Script, scenario: Scenario,
             config: ServiceConfig | None = None,
             emit_trace_path: str | Path | None = None
             ) -> tuple[ReplayResult, Trace]:
    """Run a script through the full pipeline; optionally save the trace."""
    if config is None:
        config = ServiceConfig()
    trace = synthesize_trace(script, scenario.scenario_id, config)
    result = replay(trace, config, scenario)
    if emit_trace_path is not None:
        from .trace import write_trace
        write_trace(trace, emit_trace_path)
    return result, trace
