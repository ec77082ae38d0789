"""WebSocket service: one isolated pipeline per connected client.

Each connection owns a session, a simulator instance of the configured
scenario, and (when a trace directory is configured) a streaming trace
recorder flushed on disconnect. Binary frames carry telemetry; text lines
carry tokens and notices (see :mod:`headteleop.wire`). The tick loop runs
at 10 Hz wall time and publishes a state snapshot every tick.

Sessions share nothing; the config is immutable after startup.
"""

from __future__ import annotations

import asyncio
import logging
import time
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .config import ServiceConfig
from .mapping import NoSampleYet
from .protocol import ControlEvent, EventKind, SampleStream, parse_token
from .replay import TICK_MS
from .robot import KinematicSim, end_effector_pose
from .scenarios import (Region, Scenario, TaskProgress, check_success,
                        load_scenario, update_progress)
from .session import Session
from .trace import TraceRecorder
from .wire import WireError, encode_message, parse_message

logger = logging.getLogger(__name__)

_DT = TICK_MS / 1000.0


def _fmt(value: float) -> str:
    return f"{value:.6f}"


def _region_field(region: Region) -> str:
    lo, hi = region.min_corner, region.max_corner
    return (f"{region.name}:{_fmt(lo.x)},{_fmt(lo.y)},{_fmt(lo.z)},"
            f"{_fmt(hi.x)},{_fmt(hi.y)},{_fmt(hi.z)}")


class ClientSession:
    """Everything one websocket client owns."""

    def __init__(self, config: ServiceConfig, scenario: Scenario,
                 client_id: str) -> None:
        self.config = config
        self.scenario = scenario
        self.client_id = client_id
        self.session = Session(config.control)
        self.sim = KinematicSim(config.limits, scenario.world_objects(),
                                scenario.start_state)
        self.stream = SampleStream()
        self.progress = TaskProgress()
        self.succeeded = False
        self.recorder: TraceRecorder | None = None
        self._t0 = time.monotonic()
        if config.trace_dir:
            directory = Path(config.trace_dir)
            directory.mkdir(parents=True, exist_ok=True)
            path = directory / f"session-{client_id}.trace"
            self.recorder = TraceRecorder(path, scenario.scenario_id,
                                          config.hash_hex(),
                                          started_at_ms=int(time.time() * 1000))

    def now_ms(self) -> int:
        return int((time.monotonic() - self._t0) * 1000)

    def stream_ms(self) -> int:
        """Clock for trace records: the latest sample's own timestamp."""
        sample = self.session.latest_sample
        return sample.t_ms if sample is not None else 0

    def close(self) -> None:
        if self.recorder is not None:
            self.recorder.close()

    # -- message handling ---------------------------------------------------

    def on_frame(self, payload: bytes) -> list[str]:
        """Binary telemetry frame; corrupt or stale frames are dropped."""
        sample = self.stream.push(payload)
        if sample is None:
            return []
        was_awaiting = self.session.awaiting_command
        self.session.ingest_sample(sample, rx_ms=self.now_ms())
        if self.recorder is not None:
            self.recorder.record_sample(sample)
        if self.session.awaiting_command and not was_awaiting:
            return [self._phase_message()]
        return []

    def on_text(self, line: str) -> list[str]:
        try:
            message = parse_message(line)
        except WireError as err:
            echo = line.replace("|", "/").replace("\n", " ")[:64]
            return [encode_message("confirm", [("token", echo),
                                               ("accepted", "0"),
                                               ("reply", "repeat"),
                                               ("reason", str(err))])]
        if message.kind == "token":
            return self._on_token(message.get("value", ""))
        if message.kind == "reset":
            return self._on_reset()
        return [encode_message("confirm", [("token", message.kind),
                                           ("accepted", "0"),
                                           ("reply", "repeat"),
                                           ("reason", "unknown message kind")])]

    def _on_token(self, text: str) -> list[str]:
        """Apply a command token; exactly one confirm per token."""
        if self.config.strict_gating and not self.session.awaiting_command:
            return [encode_message("confirm", [
                ("token", text), ("accepted", "0"), ("reply", "repeat"),
                ("reason", "not listening: shake first")])]
        kind = parse_token(text)
        event = ControlEvent(self.stream_ms(), kind)
        try:
            applied = self.session.handle_event(event)
        except NoSampleYet:
            return [encode_message("confirm", [
                ("token", text), ("accepted", "0"), ("reply", "repeat"),
                ("reason", "no telemetry yet")])]
        if self.recorder is not None:
            self.recorder.record_event(event)
        reply = kind.value if kind is not EventKind.UNRECOGNIZED else "repeat"
        accepted = "1" if applied else "0"
        return [encode_message("confirm", [("token", text),
                                           ("accepted", accepted),
                                           ("reply", reply)]),
                self._phase_message()]

    def _on_reset(self) -> list[str]:
        self.sim.reset(self.scenario.start_state, self.scenario.world_objects())
        self.progress.reset()
        self.succeeded = False
        if self.recorder is not None:
            self.recorder.record_reset(self.stream_ms())
        return [self.snapshot_message(self.now_ms())]

    # -- tick ---------------------------------------------------------------

    def tick(self) -> list[str]:
        now_ms = self.now_ms()
        frame = self.session.tick(now_ms)
        self.sim.step(frame, _DT)
        poses = self.sim.object_poses()
        update_progress(self.progress, self.scenario, self.sim.state, poses)
        out = []
        if not self.succeeded and check_success(self.scenario, self.sim.state,
                                                poses, self.progress):
            self.succeeded = True
            out.append(encode_message("success", [("t_ms", str(now_ms))]))
        if self.sim.last_clamped:
            names = ",".join(sorted(a.value for a in self.sim.last_clamped))
            out.append(encode_message("clamp", [("actuators", names)]))
        out.append(self.snapshot_message(now_ms, frame.velocities))
        return out

    # -- outbound messages ----------------------------------------------------

    def scene_message(self) -> str:
        fields: list[tuple[str, str]] = [
            ("scenario", self.scenario.scenario_id),
            ("time_limit_s", _fmt(self.scenario.time_limit_s)),
            ("success", type(self.scenario.success).__name__),
        ]
        for obj in self.scenario.objects:
            fields.append(("object",
                           f"{obj.object_id}:{_fmt(obj.pose.x)},"
                           f"{_fmt(obj.pose.y)},{_fmt(obj.pose.z)}:"
                           f"{1 if obj.attachable else 0}"))
        for region in self.scenario.regions:
            fields.append(("region", _region_field(region)))
        return encode_message("scene", fields)

    def _phase_message(self) -> str:
        session = self.session
        return encode_message("phase", [
            ("phase", "active" if session.active else "uncalibrated"),
            ("mode", session.mode.value if session.mode else "-"),
            ("awaiting", "1" if session.awaiting_command else "0"),
        ])

    def snapshot_message(self, now_ms: int, velocities=None) -> str:
        state = self.sim.state
        session = self.session
        ee = end_effector_pose(state, self.config.limits)
        fields = [
            ("t_ms", str(now_ms)),
            ("phase", "active" if session.active else "uncalibrated"),
            ("mode", session.mode.value if session.mode else "-"),
            ("awaiting", "1" if session.awaiting_command else "0"),
            ("x", _fmt(state.base_x)), ("y", _fmt(state.base_y)),
            ("heading", _fmt(state.heading)),
            ("lift", _fmt(state.lift)), ("arm_ext", _fmt(state.arm_ext)),
            ("wrist_pitch", _fmt(state.wrist_pitch)),
            ("wrist_yaw", _fmt(state.wrist_yaw)),
            ("grip", _fmt(state.grip)),
            ("held", state.held_object or "-"),
            ("ee_x", _fmt(ee.x)), ("ee_y", _fmt(ee.y)), ("ee_z", _fmt(ee.z)),
            ("success", "1" if self.succeeded else "0"),
        ]
        sample = session.latest_sample
        if session.calibration is not None and sample is not None:
            from .angles import normalize_delta
            fields.append(("roll_delta", _fmt(normalize_delta(
                sample.roll, session.calibration.theta_c_roll))))
            fields.append(("pitch_delta", _fmt(normalize_delta(
                sample.pitch, session.calibration.theta_c_pitch))))
        for actuator, value in (velocities or {}).items():
            fields.append(("vel", f"{actuator.value}:{_fmt(value)}"))
        for oid, pose in self.sim.object_poses().items():
            fields.append(("obj", f"{oid}:{_fmt(pose.x)},{_fmt(pose.y)},"
                                  f"{_fmt(pose.z)}"))
        return encode_message("snapshot", fields)


def create_app(config: ServiceConfig | None = None,
               static_dir: str | Path | None = None) -> FastAPI:
    """Build the service app; one isolated ClientSession per connection."""
    if config is None:
        config = ServiceConfig()
    app = FastAPI(title="headteleop")
    counter = {"clients": 0}

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        counter["clients"] += 1
        client_id = f"{int(time.time())}-{counter['clients']}"
        scenario = load_scenario(config.scenario)
        client = ClientSession(config, scenario, client_id)

        # One sender task owns the socket's outbound side; the ticker and
        # the receive loop only enqueue, so messages never interleave.
        outbox: asyncio.Queue[str] = asyncio.Queue()
        outbox.put_nowait(client.scene_message())

        async def sender() -> None:
            while True:
                await ws.send_text(await outbox.get())

        async def ticker() -> None:
            next_t = time.monotonic()
            while True:
                next_t += _DT
                await asyncio.sleep(max(0.0, next_t - time.monotonic()))
                for line in client.tick():
                    outbox.put_nowait(line)

        tasks = [asyncio.create_task(sender()), asyncio.create_task(ticker())]
        try:
            while True:
                message = await ws.receive()
                if message.get("type") == "websocket.disconnect":
                    break
                if message.get("bytes") is not None:
                    replies = client.on_frame(message["bytes"])
                elif message.get("text") is not None:
                    replies = client.on_text(message["text"])
                else:
                    continue
                for line in replies:
                    outbox.put_nowait(line)
        except WebSocketDisconnect:
            pass
        finally:
            for task in tasks:
                task.cancel()
            client.close()
            logger.info("client %s disconnected", client_id)

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=str(static_dir), html=True),
                  name="console")
    return app


def serve(config: ServiceConfig, static_dir: str | Path | None = None) -> None:
    """Run the service until terminated."""
    import uvicorn
    app = create_app(config, static_dir)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
