"""The deterministic replay engine and task metrics.

Replay feeds a trace through the same session and simulator code the live
service uses: ingest every record up to the tick time, tick at 10 Hz, step
the simulator, then latch the first success. Identical trace and config
always produce identical metrics and final state, bit for bit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .config import ServiceConfig
from .mapping import Actuator, NoSampleYet
from .protocol import ControlEvent, OrientationSample, SampleStream, SWITCH_EVENTS
from .robot import KinematicSim, Pose3, RobotState
from .scenarios import (Scenario, TaskProgress, check_success, load_scenario,
                        update_progress)
from .session import Session
from .trace import ResetRecord, Trace

__all__ = ["TaskMetrics", "ReplayResult", "replay", "compute_metrics",
           "TICK_MS", "SAMPLE_MS"]

logger = logging.getLogger(__name__)

TICK_MS = 100
SAMPLE_MS = 50
_DT = TICK_MS / 1000.0


@dataclass(frozen=True)
class TaskMetrics:
    """Accounting for one run; an unfinished task costs the full limit."""

    task_time_s: float
    completed: bool
    mode_switches: int
    resets: int
    commanded_distance: float
    nonzero_command_fraction: float

    def as_lines(self) -> list[str]:
        return [
            f"completed={'true' if self.completed else 'false'}",
            f"task_time_s={self.task_time_s!r}",
            f"mode_switches={self.mode_switches}",
            f"resets={self.resets}",
            f"commanded_distance={self.commanded_distance!r}",
            f"nonzero_command_fraction={self.nonzero_command_fraction!r}",
        ]


@dataclass(frozen=True)
class ReplayResult:
    metrics: TaskMetrics
    final_state: RobotState
    final_objects: dict[str, Pose3]
    success_t_ms: int | None
    ticks: int


def replay(trace: Trace, config: ServiceConfig | None = None,
           scenario: Scenario | None = None) -> ReplayResult:
    """Replay a trace to its end and compute metrics.

    The scenario defaults to the one named in the trace header. A config
    hash mismatch warns (parameter exploration is allowed) but never
    fails. Events are taken at face value: traces are self-describing, so
    no shake gating applies here.
    """
    if config is None:
        config = ServiceConfig()
    if scenario is None:
        scenario = load_scenario(trace.scenario_id)
    if trace.config_hash and trace.config_hash != config.hash_hex():
        logger.warning("trace %s was recorded under a different config; "
                       "replaying with current parameters", trace.scenario_id)

    session = Session(config.control)
    sim = KinematicSim(config.limits, scenario.world_objects(),
                       scenario.start_state)
    stream = SampleStream()
    progress = TaskProgress()

    mode_switches = 0
    resets = 0
    commanded_distance = 0.0
    nonzero_ticks = 0
    success_t_ms: int | None = None

    records = trace.records
    index = 0
    end_ms = trace.end_ms()
    tick_count = 0 if not records else end_ms // TICK_MS + 1

    for tick_no in range(tick_count):
        now_ms = tick_no * TICK_MS
        while index < len(records) and records[index].t_ms <= now_ms:
            record = records[index]
            index += 1
            if isinstance(record, OrientationSample):
                accepted = stream.accept(record)
                if accepted is not None:
                    session.ingest_sample(accepted)
            elif isinstance(record, ControlEvent):
                try:
                    applied = session.handle_event(record)
                except NoSampleYet:
                    applied = False
                if applied and record.kind in SWITCH_EVENTS:
                    mode_switches += 1
            elif isinstance(record, ResetRecord):
                resets += 1
                sim.reset(scenario.start_state, scenario.world_objects())
                progress.reset()

        frame = session.tick(now_ms)
        sim.step(frame, _DT)
        commanded_distance += abs(frame.get(Actuator.BASE_TRANSLATE)) * _DT
        if not frame.is_zero():
            nonzero_ticks += 1
        poses = sim.object_poses()
        update_progress(progress, scenario, sim.state, poses)
        if success_t_ms is None and check_success(scenario, sim.state, poses,
                                                  progress):
            success_t_ms = now_ms + TICK_MS

    completed = (success_t_ms is not None
                 and success_t_ms / 1000.0 <= scenario.time_limit_s)
    task_time_s = (success_t_ms / 1000.0 if completed
                   else scenario.time_limit_s)
    metrics = TaskMetrics(
        task_time_s=task_time_s,
        completed=completed,
        mode_switches=mode_switches,
        resets=resets,
        commanded_distance=commanded_distance,
        nonzero_command_fraction=(nonzero_ticks / tick_count
                                  if tick_count else 0.0),
    )
    return ReplayResult(metrics, sim.state, sim.object_poses(),
                        success_t_ms, tick_count)


def compute_metrics(trace: Trace, config: ServiceConfig | None = None,
                    scenario: Scenario | None = None) -> TaskMetrics:
    return replay(trace, config, scenario).metrics
