"""Service configuration: mapping constants, robot limits, server knobs.

One immutable config drives sessions, the simulator, and the service. The
config hash (sha256 over a canonical dump of every behavior-relevant
field) is stamped into trace headers so replays can warn when parameters
changed since recording.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from pathlib import Path

from .blockfile import parse_blocks, parse_bool, parse_float
from .mapping import Actuator, ActuatorParams, AxisThresholds, default_actuators
from .robot import RobotLimits
from .session import ControlParams, ShakeParams

__all__ = ["ServiceConfig", "MalformedConfig", "load_config", "parse_config",
           "ENV_CONFIG", "ENV_ADDR"]

ENV_CONFIG = "HEADTELEOP_CONFIG"
ENV_ADDR = "HEADTELEOP_ADDR"


class MalformedConfig(ValueError):
    """Config file failed validation; the message carries the location."""


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8765
    scenario: str = "cup"
    control: ControlParams = field(default_factory=ControlParams)
    limits: RobotLimits = field(default_factory=RobotLimits)
    strict_gating: bool = True
    trace_dir: str | None = None

    def hash_hex(self) -> str:
        """64-hex digest over everything that affects replay semantics."""
        lines = []
        c = self.control
        for actuator in Actuator:
            params = c.actuators[actuator]
            k = "default" if params.k is None else repr(params.k)
            lines.append(f"actuator.{actuator.value}={repr(params.v_max)},{k}")
        for axis, thr in (("roll", c.roll_thresholds),
                          ("pitch", c.pitch_thresholds)):
            lines.append(f"thresholds.{axis}={repr(thr.t_low_pos)},"
                         f"{repr(thr.t_high_pos)},{repr(thr.t_low_neg)},"
                         f"{repr(thr.t_high_neg)}")
        lines.append(f"shake={repr(c.shake.amplitude_deg)},"
                     f"{c.shake.min_reversals},{c.shake.window_ms},"
                     f"{c.shake.refractory_ms}")
        lines.append(f"watchdog_ms={c.watchdog_ms}")
        lines.append(f"recalibrate_on_start={c.recalibrate_on_start}")
        lim = self.limits
        lines.append(f"limits={repr(lim.lift_max)},{repr(lim.ext_max)},"
                     f"{repr(lim.wrist_pitch_min)},{repr(lim.wrist_pitch_max)},"
                     f"{repr(lim.wrist_yaw_min)},{repr(lim.wrist_yaw_max)},"
                     f"{repr(lim.arm_base_offset)}")
        lines.append(f"grasp={repr(lim.grasp_close_threshold)},"
                     f"{repr(lim.grasp_release_threshold)},"
                     f"{repr(lim.grasp_radius)}")
        return hashlib.sha256("\n".join(lines).encode("utf-8")).hexdigest()


_ACTUATOR_BY_NAME = {a.value: a for a in Actuator}


def load_config(path: str | Path) -> ServiceConfig:
    path = Path(path)
    if not path.exists():
        raise MalformedConfig(f"config file not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"), name=str(path))


def parse_config(text: str, name: str = "<config>") -> ServiceConfig:
    """Parse the block-format config; every field is optional."""
    doc = parse_blocks(text, MalformedConfig)
    top = doc.top

    def top_float(key: str, default: float) -> float:
        if key not in top:
            return default
        return parse_float(top[key], f"{name}: {key}", MalformedConfig)

    def top_bool(key: str, default: bool) -> bool:
        if key not in top:
            return default
        return parse_bool(top[key], f"{name}: {key}", MalformedConfig)

    host = top.get("listen_host", "127.0.0.1")
    port = int(top_float("listen_port", 8765))
    if not 0 < port < 65536:
        raise MalformedConfig(f"{name}: listen_port out of range")
    scenario = top.get("scenario", "cup")
    watchdog_ms = int(top_float("watchdog_ms", 300))
    if watchdog_ms <= 0:
        raise MalformedConfig(f"{name}: watchdog_ms must be positive")
    strict_gating = top_bool("strict_gating", True)
    recalibrate = top_bool("recalibrate_on_start", True)
    trace_dir = top.get("trace_dir") or None

    actuators = default_actuators()
    thresholds = {"roll": AxisThresholds(), "pitch": AxisThresholds()}
    shake = ShakeParams()
    limit_values: dict[str, float] = {}

    for block in doc.blocks:
        where = f"{name}: line {block.line_no}"
        kind = block.header[0]
        if kind == "actuator":
            if len(block.header) != 2 or block.header[1] not in _ACTUATOR_BY_NAME:
                raise MalformedConfig(
                    f"{where}: expected [actuator <name>] with name one of "
                    f"{', '.join(sorted(_ACTUATOR_BY_NAME))}")
            actuator = _ACTUATOR_BY_NAME[block.header[1]]
            v_max = actuators[actuator].v_max
            if "v_max" in block.values:
                v_max = parse_float(block.values["v_max"], f"{where}: v_max",
                                    MalformedConfig)
            k = None
            if "k" in block.values:
                k = parse_float(block.values["k"], f"{where}: k", MalformedConfig)
            try:
                actuators[actuator] = ActuatorParams(actuator, v_max, k)
            except ValueError as err:
                raise MalformedConfig(f"{where}: {err}") from None
        elif kind == "thresholds":
            if len(block.header) != 2 or block.header[1] not in thresholds:
                raise MalformedConfig(f"{where}: expected [thresholds roll|pitch]")
            base = thresholds[block.header[1]]
            values = {
                "t_low_pos": base.t_low_pos, "t_high_pos": base.t_high_pos,
                "t_low_neg": base.t_low_neg, "t_high_neg": base.t_high_neg,
            }
            for key in block.values:
                if key not in values:
                    raise MalformedConfig(f"{where}: unknown threshold {key!r}")
                values[key] = parse_float(block.values[key], f"{where}: {key}",
                                          MalformedConfig)
            try:
                thresholds[block.header[1]] = AxisThresholds(**values)
            except ValueError as err:
                raise MalformedConfig(f"{where}: {err}") from None
        elif kind == "shake":
            fields = {
                "amplitude_deg": shake.amplitude_deg,
                "min_reversals": float(shake.min_reversals),
                "window_ms": float(shake.window_ms),
                "refractory_ms": float(shake.refractory_ms),
            }
            for key in block.values:
                if key not in fields:
                    raise MalformedConfig(f"{where}: unknown shake field {key!r}")
                fields[key] = parse_float(block.values[key], f"{where}: {key}",
                                          MalformedConfig)
                if fields[key] <= 0:
                    raise MalformedConfig(f"{where}: {key} must be positive")
            shake = ShakeParams(fields["amplitude_deg"],
                                int(fields["min_reversals"]),
                                int(fields["window_ms"]),
                                int(fields["refractory_ms"]))
        elif kind == "limits":
            known = {"lift_max", "ext_max", "wrist_pitch_min", "wrist_pitch_max",
                     "wrist_yaw_min", "wrist_yaw_max", "arm_base_offset",
                     "grasp_close_threshold", "grasp_release_threshold",
                     "grasp_radius"}
            for key in block.values:
                if key not in known:
                    raise MalformedConfig(f"{where}: unknown limit {key!r}")
                limit_values[key] = parse_float(block.values[key],
                                                f"{where}: {key}", MalformedConfig)
        else:
            raise MalformedConfig(f"{where}: unknown section {kind!r}")

    try:
        limits = replace(RobotLimits(), **limit_values)
    except ValueError as err:
        raise MalformedConfig(f"{name}: {err}") from None
    control = ControlParams(actuators=actuators,
                            roll_thresholds=thresholds["roll"],
                            pitch_thresholds=thresholds["pitch"],
                            shake=shake, watchdog_ms=watchdog_ms,
                            recalibrate_on_start=recalibrate)
    return ServiceConfig(host=host, port=port, scenario=scenario,
                         control=control, limits=limits,
                         strict_gating=strict_gating, trace_dir=trace_dir)
