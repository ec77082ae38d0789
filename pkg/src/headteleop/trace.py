"""Line-delimited session traces: record once, replay deterministically.

A trace is UTF-8 text, one record per line, sorted by time:

    #HAT-TRACE v1 scenario=<id> cfg=<hex64> [t0=<unix_ms>]
    S <t_ms> <seq> <roll> <pitch> <yaw>     orientation sample (4 decimals)
    E <t_ms> <kind>                         control event token
    R <t_ms>                                environment reset

Text was chosen over binary for diffability and append-on-crash safety:
the recorder flushes every line as it lands.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Union

from .protocol import ControlEvent, EventKind, OrientationSample

__all__ = [
    "Trace", "ResetRecord", "TraceRecord", "CorruptTrace", "TraceRecorder",
    "parse_trace", "load_trace", "format_trace", "write_trace",
    "TRACE_HEADER_PREFIX",
]

TRACE_HEADER_PREFIX = "#HAT-TRACE v1"

_HEADER_RE = re.compile(r"^#HAT-TRACE v1((?: [a-z0-9_]+=\S+)+)$")
_HEX64_RE = re.compile(r"^[0-9a-f]{64}$")


class CorruptTrace(ValueError):
    """Trace text violates the format or its ordering invariants."""


@dataclass(frozen=True)
class ResetRecord:
    t_ms: int


TraceRecord = Union[OrientationSample, ControlEvent, ResetRecord]


def _record_t(record: TraceRecord) -> int:
    return record.t_ms


@dataclass(frozen=True)
class Trace:
    """A replayable session: header metadata plus time-sorted records."""

    scenario_id: str
    config_hash: str
    records: tuple[TraceRecord, ...]
    started_at_ms: int | None = None

    def end_ms(self) -> int:
        return _record_t(self.records[-1]) if self.records else 0


def format_trace(trace: Trace) -> str:
    out = io.StringIO()
    _write_header(out, trace.scenario_id, trace.config_hash, trace.started_at_ms)
    for record in trace.records:
        out.write(_format_record(record))
    return out.getvalue()


def write_trace(trace: Trace, path: str | Path) -> None:
    Path(path).write_text(format_trace(trace), encoding="utf-8")


def _write_header(out: IO[str], scenario_id: str, config_hash: str,
                  started_at_ms: int | None) -> None:
    header = f"{TRACE_HEADER_PREFIX} scenario={scenario_id} cfg={config_hash}"
    if started_at_ms is not None:
        header += f" t0={started_at_ms}"
    out.write(header + "\n")


def _format_record(record: TraceRecord) -> str:
    if isinstance(record, OrientationSample):
        return (f"S {record.t_ms} {record.seq} {record.roll:.4f} "
                f"{record.pitch:.4f} {record.yaw:.4f}\n")
    if isinstance(record, ControlEvent):
        return f"E {record.t_ms} {record.kind.value}\n"
    return f"R {record.t_ms}\n"


def load_trace(path: str | Path) -> Trace:
    return parse_trace(Path(path).read_text(encoding="utf-8"), name=str(path))


def parse_trace(text: str, name: str = "<trace>") -> Trace:
    """Parse and validate trace text.

    Raises CorruptTrace on format errors, out-of-order timestamps, or
    non-monotone sample sequence numbers.
    """
    lines = text.splitlines()
    if not lines:
        raise CorruptTrace(f"{name}: empty trace file (missing header)")
    header = _parse_header(lines[0], name)
    records: list[TraceRecord] = []
    last_t = 0
    last_seq: int | None = None
    for line_no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        where = f"{name}: line {line_no}"
        parts = line.split()
        record = _parse_record(parts, where)
        if record.t_ms < last_t:
            raise CorruptTrace(f"{where}: records out of order "
                               f"({record.t_ms} after {last_t})")
        last_t = record.t_ms
        if isinstance(record, OrientationSample):
            if last_seq is not None and record.seq <= last_seq:
                raise CorruptTrace(f"{where}: sample seq must increase "
                                   f"({record.seq} after {last_seq})")
            last_seq = record.seq
        records.append(record)
    scenario_id, config_hash, started = header
    return Trace(scenario_id, config_hash, tuple(records), started)


def _parse_header(line: str, name: str) -> tuple[str, str, int | None]:
    match = _HEADER_RE.match(line.strip())
    if not match:
        raise CorruptTrace(f"{name}: line 1: bad header, expected "
                           f"'{TRACE_HEADER_PREFIX} scenario=<id> cfg=<hex64>'")
    fields = dict(token.split("=", 1) for token in match.group(1).split())
    scenario_id = fields.get("scenario")
    config_hash = fields.get("cfg")
    if not scenario_id:
        raise CorruptTrace(f"{name}: line 1: header missing scenario=")
    if not config_hash or not _HEX64_RE.match(config_hash):
        raise CorruptTrace(f"{name}: line 1: header cfg= must be 64 hex chars")
    started = None
    if "t0" in fields:
        try:
            started = int(fields["t0"])
        except ValueError:
            raise CorruptTrace(f"{name}: line 1: bad t0=") from None
    return scenario_id, config_hash, started


def _parse_record(parts: list[str], where: str) -> TraceRecord:
    tag = parts[0]
    try:
        if tag == "S":
            if len(parts) != 6:
                raise CorruptTrace(f"{where}: sample needs 5 fields")
            t_ms, seq = int(parts[1]), int(parts[2])
            roll, pitch, yaw = (float(parts[3]), float(parts[4]),
                                float(parts[5]))
            if t_ms < 0 or seq < 0:
                raise CorruptTrace(f"{where}: negative t_ms/seq")
            return OrientationSample.normalized(seq, t_ms, roll, pitch, yaw)
        if tag == "E":
            if len(parts) != 3:
                raise CorruptTrace(f"{where}: event needs 2 fields")
            t_ms = int(parts[1])
            try:
                kind = EventKind(parts[2])
            except ValueError:
                raise CorruptTrace(f"{where}: unknown event kind {parts[2]!r}") from None
            return ControlEvent(t_ms, kind)
        if tag == "R":
            if len(parts) != 2:
                raise CorruptTrace(f"{where}: reset needs 1 field")
            return ResetRecord(int(parts[1]))
    except ValueError as err:
        raise CorruptTrace(f"{where}: {err}") from None
    raise CorruptTrace(f"{where}: unknown record tag {tag!r}")


def sort_records(records: Iterable[TraceRecord]) -> tuple[TraceRecord, ...]:
    """Stable time-order with samples before resets before events at a tie,
    so an event at time t always sees the sample at time t."""
    priority = {OrientationSample: 0, ResetRecord: 1, ControlEvent: 2}
    return tuple(sorted(records, key=lambda r: (r.t_ms, priority[type(r)])))


class TraceRecorder:
    """Append-only streaming trace writer; every record is flushed.

    Timestamps are clamped to be non-decreasing so a recorded file always
    satisfies the trace ordering invariant.
    """

    def __init__(self, sink: IO[str] | str | Path, scenario_id: str,
                 config_hash: str, started_at_ms: int | None = None) -> None:
        if isinstance(sink, (str, Path)):
            self._file: IO[str] = open(sink, "w", encoding="utf-8")
            self._owns_file = True
        else:
            self._file = sink
            self._owns_file = False
        self._last_t = 0
        self._last_seq: int | None = None
        _write_header(self._file, scenario_id, config_hash, started_at_ms)
        self._file.flush()

    def _clamp_t(self, t_ms: int) -> int:
        self._last_t = max(self._last_t, t_ms)
        return self._last_t

    def record_sample(self, sample: OrientationSample) -> None:
        if self._last_seq is not None and sample.seq <= self._last_seq:
            return
        self._last_seq = sample.seq
        t_ms = self._clamp_t(sample.t_ms)
        if t_ms != sample.t_ms:
            sample = OrientationSample(sample.seq, t_ms, sample.roll,
                                       sample.pitch, sample.yaw)
        self._file.write(_format_record(sample))
        self._file.flush()

    def record_event(self, event: ControlEvent) -> None:
        event = ControlEvent(self._clamp_t(event.t_ms), event.kind)
        self._file.write(_format_record(event))
        self._file.flush()

    def record_reset(self, t_ms: int) -> None:
        self._file.write(_format_record(ResetRecord(self._clamp_t(t_ms))))
        self._file.flush()

    def close(self) -> None:
        if self._owns_file and not self._file.closed:
            self._file.close()

    def __enter__(self) -> "TraceRecorder":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
