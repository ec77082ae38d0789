"""Text message codec for the service socket.

Every text message is one line: ``<kind>|<key>=<value>|...``. Keys may
repeat (object/region/velocity lists); values must not contain ``|`` or
newlines. Binary messages on the same socket are always 20-byte telemetry
frames (see :mod:`headteleop.protocol`).

Client to server kinds: ``token`` (value = command text), ``reset``.
Server to client kinds: ``scene``, ``snapshot``, ``phase``, ``confirm``,
``success``, ``clamp``.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["WireMessage", "encode_message", "parse_message", "WireError"]


class WireError(ValueError):
    """Malformed text message."""


@dataclass(frozen=True)
class WireMessage:
    kind: str
    fields: tuple[tuple[str, str], ...]

    def get(self, key: str, default: str | None = None) -> str | None:
        for k, v in self.fields:
            if k == key:
                return v
        return default

    def get_all(self, key: str) -> list[str]:
        return [v for k, v in self.fields if k == key]


def encode_message(kind: str, fields: list[tuple[str, str]] | None = None) -> str:
    parts = [kind]
    for key, value in fields or []:
        if "|" in value or "\n" in value:
            raise WireError(f"illegal characters in field {key}={value!r}")
        parts.append(f"{key}={value}")
    return "|".join(parts)


def parse_message(line: str) -> WireMessage:
    line = line.strip("\n")
    if not line:
        raise WireError("empty message")
    parts = line.split("|")
    kind = parts[0]
    if not kind:
        raise WireError("message missing kind")
    fields = []
    for part in parts[1:]:
        if not part:
            continue
        if "=" not in part:
            raise WireError(f"field without '=': {part!r}")
        key, _, value = part.partition("=")
        fields.append((key, value))
    return WireMessage(kind, tuple(fields))
