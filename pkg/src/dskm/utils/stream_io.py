"""Reading and writing stream and coreset files.

Both files start with ``dskm v1 d=<d> L=<L>``. Stream lines are ``+ x1 ... xd`` or
``- x1 ... xd``; coreset lines are ``w x1 ... xd`` with ``w`` the shortest decimal that
round-trips the weight. Blank lines are ignored; line numbers in errors are 1-based.
"""
from __future__ import annotations

import math
import re
from pathlib import Path
from typing import Iterable

from dskm.core.errors import StreamFormatError
from dskm.models.coreset_models import Coreset, CoresetMetadata, WeightedPoint
from dskm.models.stream_models import StreamFile, StreamOp

HEADER_PATTERN = re.compile(r"^dskm v1 d=(\d+) L=(\d+)$")


def format_header(d: int, delta_exp: int) -> str:
    return f"dskm v1 d={d} L={delta_exp}"


def parse_header(line: str, lineno: int = 1) -> tuple[int, int]:
    match = HEADER_PATTERN.match(line.strip())
    if match is None:
        raise StreamFormatError(f"expected header 'dskm v1 d=<d> L=<L>', got {line.strip()!r}", lineno)
    d, delta_exp = int(match.group(1)), int(match.group(2))
    if d < 1 or delta_exp < 1:
        raise StreamFormatError("d and L must be >= 1", lineno)
    return d, delta_exp


def _parse_coords(fields: list[str], d: int, side: int, lineno: int) -> tuple[int, ...]:
    if len(fields) != d:
        raise StreamFormatError(f"expected {d} coordinates, got {len(fields)}", lineno)
    try:
        point = tuple(int(x) for x in fields)
    except ValueError:
        raise StreamFormatError(f"coordinates must be decimal integers: {' '.join(fields)}", lineno) from None
    if any(not 1 <= x <= side for x in point):
        raise StreamFormatError(f"point {point} outside [1, {side}]^{d}", lineno)
    return point


def parse_stream(lines: Iterable[str]) -> StreamFile:
    """Parse stream text, enforcing valid deletions and unique live copies."""
    numbered = ((n, line) for n, line in enumerate(lines, start=1) if line.strip())
    try:
        lineno, header = next(numbered)
    except StopIteration:
        raise StreamFormatError("missing header", 1) from None
    d, delta_exp = parse_header(header, lineno)
    side = 1 << delta_exp

    live: set[tuple[int, ...]] = set()
    operations: list[StreamOp] = []
    for lineno, line in numbered:
        fields = line.split()
        if fields[0] not in ("+", "-"):
            raise StreamFormatError(f"operation must start with '+' or '-', got {fields[0]!r}", lineno)
        point = _parse_coords(fields[1:], d, side, lineno)
        if fields[0] == "+":
            if point in live:
                raise StreamFormatError(f"duplicate insertion of live point {point}", lineno)
            live.add(point)
            operations.append(StreamOp(1, point))
        else:
            if point not in live:
                raise StreamFormatError(f"deletion of point {point} that is not live", lineno)
            live.remove(point)
            operations.append(StreamOp(-1, point))
    return StreamFile(d=d, delta_exp=delta_exp, operations=operations)


def format_stream(stream: StreamFile) -> str:
    lines = [format_header(stream.d, stream.delta_exp)]
    lines.extend(("+ " if op.sign > 0 else "- ") + " ".join(map(str, op.point)) for op in stream.operations)
    return "\n".join(lines) + "\n"


def load_stream(path: str | Path) -> StreamFile:
    with open(path, encoding="utf-8") as handle:
        return parse_stream(handle)


def save_stream(path: str | Path, stream: StreamFile) -> None:
    Path(path).write_text(format_stream(stream), encoding="utf-8")


def replay(operations: Iterable[StreamOp]) -> list[tuple[int, ...]]:
    """Live point set after the operations, sorted."""
    live: set[tuple[int, ...]] = set()
    for sign, point in operations:
        if sign > 0:
            live.add(tuple(point))
        else:
            live.discard(tuple(point))
    return sorted(live)


def format_coreset(coreset: Coreset, d: int, delta_exp: int) -> str:
    lines = [format_header(d, delta_exp)]
    lines.extend(f"{e.weight!r} " + " ".join(map(str, e.point)) for e in coreset.entries)
    return "\n".join(lines) + "\n"


def parse_coreset(lines: Iterable[str]) -> tuple[int, int, Coreset]:
    """Parse coreset text into ``(d, L, coreset)``."""
    numbered = ((n, line) for n, line in enumerate(lines, start=1) if line.strip())
    try:
        lineno, header = next(numbered)
    except StopIteration:
        raise StreamFormatError("missing header", 1) from None
    d, delta_exp = parse_header(header, lineno)
    side = 1 << delta_exp

    entries: list[WeightedPoint] = []
    for lineno, line in numbered:
        fields = line.split()
        try:
            weight = float(fields[0])
        except ValueError:
            raise StreamFormatError(f"unparseable weight {fields[0]!r}", lineno) from None
        if not math.isfinite(weight) or weight <= 0.0:
            raise StreamFormatError(f"weight must be a positive finite number, got {fields[0]}", lineno)
        entries.append(WeightedPoint(point=_parse_coords(fields[1:], d, side, lineno), weight=weight))
    return d, delta_exp, Coreset(entries=entries, metadata=CoresetMetadata(source="file"))


def load_coreset(path: str | Path) -> tuple[int, int, Coreset]:
    with open(path, encoding="utf-8") as handle:
        return parse_coreset(handle)


def save_coreset(path: str | Path, coreset: Coreset, d: int, delta_exp: int) -> None:
    Path(path).write_text(format_coreset(coreset, d, delta_exp), encoding="utf-8")
