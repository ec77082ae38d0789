"""Tiny line-oriented config format: top-level key = value pairs plus
named ``[section ...]`` blocks of key = value pairs.

Shared by the service config and scenario file loaders so both report
errors with line numbers. ``#`` starts a comment; blank lines separate
nothing in particular.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Block:
    """One ``[head words]`` section with its key/value pairs."""

    header: tuple[str, ...]
    line_no: int
    values: dict[str, str] = field(default_factory=dict)


@dataclass
class Document:
    top: dict[str, str] = field(default_factory=dict)
    blocks: list[Block] = field(default_factory=list)


def parse_blocks(text: str, error: type[Exception] = ValueError) -> Document:
    doc = Document()
    current: Block | None = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise error(f"line {line_no}: unterminated section header")
            words = tuple(line[1:-1].split())
            if not words:
                raise error(f"line {line_no}: empty section header")
            current = Block(words, line_no)
            doc.blocks.append(current)
            continue
        if "=" not in line:
            raise error(f"line {line_no}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise error(f"line {line_no}: missing key")
        target = doc.top if current is None else current.values
        if key in target:
            raise error(f"line {line_no}: duplicate key {key!r}")
        target[key] = value
    return doc


def parse_float(value: str, where: str, error: type[Exception] = ValueError) -> float:
    try:
        return float(value)
    except ValueError:
        raise error(f"{where}: expected a number, got {value!r}") from None


def parse_bool(value: str, where: str, error: type[Exception] = ValueError) -> bool:
    lowered = value.lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise error(f"{where}: expected true/false, got {value!r}")


def parse_floats(value: str, count: int, where: str,
                 error: type[Exception] = ValueError) -> tuple[float, ...]:
    parts = value.split()
    if len(parts) != count:
        raise error(f"{where}: expected {count} numbers, got {len(parts)}")
    return tuple(parse_float(p, where, error) for p in parts)
