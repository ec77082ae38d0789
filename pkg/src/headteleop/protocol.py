"""Wire protocol for the head-orientation stream and control-event tokens.

The wireless link is modeled as a fixed 20-byte little-endian frame:
seq (u32), t_ms (u32), roll (f32), pitch (f32), yaw (f32). A fixed binary
frame keeps corruption handling bit-exact and cheap to test. Corrupt frames
raise a typed :class:`ProtocolError`; callers drop them and keep streaming.

Control events are discrete tokens standing in for recognized voice
commands; anything unidentifiable maps to ``unrecognized`` (the "repeat"
reply).
"""

from __future__ import annotations

import logging
import math
import struct
from dataclasses import dataclass
from enum import Enum

from .angles import wrap_degrees

logger = logging.getLogger(__name__)

FRAME_SIZE = 20
_FRAME = struct.Struct("<IIfff")

_U32_MAX = 0xFFFFFFFF


class ProtocolError(ValueError):
    """Base class for malformed telemetry frames."""


class WrongLength(ProtocolError):
    """Frame is not exactly 20 bytes."""


class NonFiniteAngle(ProtocolError):
    """Frame carries a NaN/Inf angle field."""


@dataclass(frozen=True)
class OrientationSample:
    """One fused absolute-orientation reading of the head.

    Angles are degrees in (-180, 180]. ``seq`` increases strictly within a
    stream; gaps mean packet loss, reordering never happens on the link.
    Angles ride the wire as 32-bit floats, so valid samples hold values at
    single precision.
    """

    seq: int
    t_ms: int
    roll: float
    pitch: float
    yaw: float

    @classmethod
    def normalized(cls, seq: int, t_ms: int, roll: float, pitch: float,
                   yaw: float) -> "OrientationSample":
        """Build a sample with angles wrapped into the canonical range."""
        return cls(seq, t_ms, wrap_degrees(roll), wrap_degrees(pitch),
                   wrap_degrees(yaw))


class EventKind(Enum):
    START = "start"
    SWITCH_DRIVE = "switch_drive"
    SWITCH_ARM = "switch_arm"
    SWITCH_WRIST = "switch_wrist"
    SWITCH_GRIPPER = "switch_gripper"
    UNRECOGNIZED = "unrecognized"


SWITCH_EVENTS = frozenset({
    EventKind.SWITCH_DRIVE,
    EventKind.SWITCH_ARM,
    EventKind.SWITCH_WRIST,
    EventKind.SWITCH_GRIPPER,
})


@dataclass(frozen=True)
class ControlEvent:
    """A discrete command token. ``unrecognized`` carries no mode change."""

    t_ms: int
    kind: EventKind


_TOKEN_ALIASES = {
    "start": EventKind.START,
    "switch to drive": EventKind.SWITCH_DRIVE,
    "switch_drive": EventKind.SWITCH_DRIVE,
    "drive": EventKind.SWITCH_DRIVE,
    "switch to arm": EventKind.SWITCH_ARM,
    "switch_arm": EventKind.SWITCH_ARM,
    "arm": EventKind.SWITCH_ARM,
    "switch to wrist": EventKind.SWITCH_WRIST,
    "switch_wrist": EventKind.SWITCH_WRIST,
    "wrist": EventKind.SWITCH_WRIST,
    "switch to gripper": EventKind.SWITCH_GRIPPER,
    "switch_gripper": EventKind.SWITCH_GRIPPER,
    "gripper": EventKind.SWITCH_GRIPPER,
}


def parse_token(text: str) -> EventKind:
    """Map free-form command text to an event kind.

    Unknown phrases come back as UNRECOGNIZED, which downstream answers
    with the "repeat" reply instead of changing state.
    """
    return _TOKEN_ALIASES.get(text.strip().lower(), EventKind.UNRECOGNIZED)


def encode_sample(sample: OrientationSample) -> bytes:
    """Pack a sample into the 20-byte little-endian frame."""
    return _FRAME.pack(sample.seq & _U32_MAX, sample.t_ms & _U32_MAX,
                       sample.roll, sample.pitch, sample.yaw)


def decode_sample(payload: bytes) -> OrientationSample:
    """Unpack a 20-byte frame, re-normalizing angles into (-180, 180].

    Raises:
        WrongLength: payload is not exactly 20 bytes.
        NonFiniteAngle: any angle field is NaN or infinite.
    """
    if len(payload) != FRAME_SIZE:
        raise WrongLength(f"expected {FRAME_SIZE} bytes, got {len(payload)}")
    seq, t_ms, roll, pitch, yaw = _FRAME.unpack(payload)
    if not (math.isfinite(roll) and math.isfinite(pitch) and math.isfinite(yaw)):
        raise NonFiniteAngle("frame carries a non-finite angle")
    return OrientationSample(seq, t_ms, wrap_degrees(roll),
                             wrap_degrees(pitch), wrap_degrees(yaw))


class SequenceStatus(Enum):
    IN_ORDER = "in_order"
    GAP = "gap"
    STALE = "stale"


def check_sequence(prev_seq: int, next_seq: int) -> tuple[SequenceStatus, int]:
    """Classify a sequence-number transition.

    Returns (status, gap_count); gap_count is nonzero only for GAP and
    counts the samples lost between prev and next.
    """
    if next_seq == prev_seq + 1:
        return SequenceStatus.IN_ORDER, 0
    if next_seq > prev_seq + 1:
        return SequenceStatus.GAP, next_seq - prev_seq - 1
    return SequenceStatus.STALE, 0


class SampleStream:
    """Single-consumer stream reader over raw frames.

    Drops corrupt packets and stale (non-advancing) samples silently;
    gaps are logged and counted but the latest sample always wins. One
    reader per connection, never shared across threads.
    """

    def __init__(self) -> None:
        self.last_seq: int | None = None
        self.gap_total = 0
        self.stale_dropped = 0
        self.corrupt_dropped = 0

    def push(self, payload: bytes) -> OrientationSample | None:
        """Decode and order-check one frame; None means dropped."""
        try:
            sample = decode_sample(payload)
        except ProtocolError as err:
            self.corrupt_dropped += 1
            logger.debug("dropped corrupt frame: %s", err)
            return None
        return self.accept(sample)

    def accept(self, sample: OrientationSample) -> OrientationSample | None:
        """Order-check an already-decoded sample; None means stale."""
        if self.last_seq is not None:
            status, gap = check_sequence(self.last_seq, sample.seq)
            if status is SequenceStatus.STALE:
                self.stale_dropped += 1
                return None
            if status is SequenceStatus.GAP:
                self.gap_total += gap
                logger.debug("sample gap of %d before seq %d", gap, sample.seq)
        self.last_seq = sample.seq
        return sample
