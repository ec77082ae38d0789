"""Command-line entry points: serve, replay, simulate, metrics.

Exit codes encode task completion so CI can assert scenarios end to end:
0 means the task completed, 1 means it did not, 2 means the input was
unusable (missing file, corrupt trace, malformed script or config).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .config import (ENV_ADDR, ENV_CONFIG, MalformedConfig, ServiceConfig,
                     load_config)
from .replay import TaskMetrics, compute_metrics
from .scenarios import MalformedScenario, load_scenario
from .simulate import MalformedScript, load_script, simulate
from .trace import CorruptTrace, Trace, load_trace

EXIT_OK = 0
EXIT_INCOMPLETE = 1
EXIT_ERROR = 2


def _resolve_config(path: str | None) -> ServiceConfig:
    if path is None:
        path = os.environ.get(ENV_CONFIG)
    config = load_config(path) if path else ServiceConfig()
    addr = os.environ.get(ENV_ADDR)
    if addr:
        host, _, port = addr.rpartition(":")
        if not host or not port.isdigit():
            raise MalformedConfig(f"{ENV_ADDR} must be host:port, got {addr!r}")
        config = ServiceConfig(host=host, port=int(port),
                               scenario=config.scenario, control=config.control,
                               limits=config.limits,
                               strict_gating=config.strict_gating,
                               trace_dir=config.trace_dir)
    return config


def _load_trace_or_empty(path: str, config: ServiceConfig) -> Trace:
    trace_path = Path(path)
    if not trace_path.exists():
        raise CorruptTrace(f"trace file not found: {path}")
    text = trace_path.read_text(encoding="utf-8")
    if not text.strip():
        # An empty file replays as an empty session of the configured
        # scenario: nothing happened, so the task costs the full limit.
        return Trace(config.scenario, config.hash_hex(), ())
    from .trace import parse_trace
    return parse_trace(text, name=path)


def _print_metrics(metrics: TaskMetrics) -> None:
    for line in metrics.as_lines():
        print(line)


def _cmd_serve(args: argparse.Namespace) -> int:
    config = _resolve_config(args.config)
    from .server import serve
    static_dir = args.console_dir
    if static_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static_dir = candidate if candidate.is_dir() else None
    print(f"serving on ws://{config.host}:{config.port}/ws "
          f"(scenario: {config.scenario})")
    serve(config, static_dir)
    return EXIT_OK


def _cmd_replay(args: argparse.Namespace) -> int:
    config = _resolve_config(args.config)
    trace = _load_trace_or_empty(args.trace, config)
    metrics = compute_metrics(trace, config)
    _print_metrics(metrics)
    return EXIT_OK if metrics.completed else EXIT_INCOMPLETE


def _cmd_metrics(args: argparse.Namespace) -> int:
    config = _resolve_config(args.config)
    trace = _load_trace_or_empty(args.trace, config)
    _print_metrics(compute_metrics(trace, config))
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = _resolve_config(args.config)
    scenario = load_scenario(args.scenario)
    script = load_script(args.script)
    result, _ = simulate(script, scenario, config,
                         emit_trace_path=args.emit_trace)
    _print_metrics(result.metrics)
    return EXIT_OK if result.metrics.completed else EXIT_INCOMPLETE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="headteleop",
        description="Head-orientation teleoperation pipeline against a "
                    "simulated mobile manipulator.")
    sub = parser.add_subparsers(dest="command", required=True)

    serve_p = sub.add_parser("serve", help="run the websocket service")
    serve_p.add_argument("--config", help="config file path")
    serve_p.add_argument("--console-dir",
                         help="static directory with the web console build")
    serve_p.set_defaults(func=_cmd_serve)

    replay_p = sub.add_parser("replay",
                              help="replay a trace; exit 0 iff completed")
    replay_p.add_argument("trace")
    replay_p.add_argument("--config", help="config file path")
    replay_p.set_defaults(func=_cmd_replay)

    metrics_p = sub.add_parser("metrics", help="print metrics for a trace")
    metrics_p.add_argument("trace")
    metrics_p.add_argument("--config", help="config file path")
    metrics_p.set_defaults(func=_cmd_metrics)

    sim_p = sub.add_parser("simulate",
                           help="run a scripted session headlessly")
    sim_p.add_argument("--scenario", required=True,
                       help="bundled scenario id or scenario file")
    sim_p.add_argument("--script", required=True, help="script file path")
    sim_p.add_argument("--emit-trace", help="write the synthesized trace here")
    sim_p.add_argument("--config", help="config file path")
    sim_p.set_defaults(func=_cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CorruptTrace, MalformedScenario, MalformedScript,
            MalformedConfig, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
