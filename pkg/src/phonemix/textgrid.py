"""Praat TextGrid subset reader/writer for interval tiers.

Handles both the long ("full") and short text layouts. Only interval
tiers are read; point tiers are skipped structurally. Empty interval
labels map to the ``<sil>`` silence token.
"""

from __future__ import annotations

import re

from .errors import MissingTierError, ParseError, SchemaError
from .score import AnnotationTrack, PhonemeInterval

_NUMBER_RE = re.compile(r"-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?")


class _Cursor:
    """Sequential value reader over the meaningful lines of a TextGrid."""

    def __init__(self, lines: list[str]):
        self.lines = lines
        self.pos = 0

    def _next_line(self) -> str:
        while self.pos < len(self.lines):
            line = self.lines[self.pos].strip()
            self.pos += 1
            if line:
                return line
        raise ParseError("unexpected end of TextGrid", line=len(self.lines), column=0)

    def number(self) -> float:
        line = self._next_line()
        # long format: take the value after '='; short format: bare value
        if "=" in line:
            line = line.split("=", 1)[1]
        match = _NUMBER_RE.search(line)
        if match is None:
            raise ParseError(f"expected a number, got {line!r}", self.pos, 0)
        return float(match.group(0))

    def string(self) -> str:
        line = self._next_line()
        if "=" in line:
            line = line.split("=", 1)[1].strip()
        start = line.find('"')
        end = line.rfind('"')
        if start == -1 or end <= start:
            raise ParseError(f"expected a quoted string, got {line!r}", self.pos, 0)
        return line[start + 1 : end].replace('""', '"')

    def skip_line(self):
        self._next_line()


def parse_textgrid(data: bytes | str, tier: str = "phones") -> AnnotationTrack:
    """Parse the named interval tier of a TextGrid into an annotation track.

    Raises :class:`MissingTierError` when no interval tier carries the
    requested name, and :class:`SchemaError` for unsorted or overlapping
    intervals.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8-sig")
    lines = data.splitlines()
    cursor = _Cursor(lines)

    file_type = cursor.string()
    if file_type != "ooTextFile":
        raise SchemaError(f"unsupported file type {file_type!r}")
    object_class = cursor.string()
    if object_class != "TextGrid":
        raise SchemaError(f"unsupported object class {object_class!r}")
    cursor.number()  # global xmin
    cursor.number()  # global xmax
    cursor.skip_line()  # tiers? <exists> (long) or <exists> (short)
    tier_count = int(cursor.number())
    # long format has an "item []:" header line before the first tier
    if cursor.pos < len(lines) and "item" in lines[cursor.pos].strip().lower():
        cursor.skip_line()

    found: list[str] = []
    for _ in range(tier_count):
        # long format: per-tier "item [n]:" line
        if cursor.pos < len(lines) and lines[cursor.pos].strip().lower().startswith("item"):
            cursor.skip_line()
        tier_class = cursor.string()
        name = cursor.string()
        cursor.number()  # tier xmin
        cursor.number()  # tier xmax
        count = int(cursor.number())
        if tier_class == "IntervalTier":
            intervals = []
            for i in range(count):
                if cursor.pos < len(lines) and lines[cursor.pos].strip().lower().startswith(
                    "intervals"
                ):
                    cursor.skip_line()
                xmin = cursor.number()
                xmax = cursor.number()
                text = cursor.string().strip()
                intervals.append((xmin, xmax, text))
            if name == tier:
                return _build_track(name, intervals)
            found.append(name)
        elif tier_class == "TextTier":
            for _ in range(count):
                if cursor.pos < len(lines) and lines[cursor.pos].strip().lower().startswith(
                    "points"
                ):
                    cursor.skip_line()
                cursor.number()
                cursor.string()
            found.append(name)
        else:
            raise SchemaError(f"unsupported tier class {tier_class!r}")

    raise MissingTierError(
        f"no interval tier named {tier!r}; found {found or 'no tiers'}"
    )


def _build_track(name: str, raw: list[tuple[float, float, str]]) -> AnnotationTrack:
    intervals = []
    prev_end = None
    for xmin, xmax, text in raw:
        if xmax <= xmin:
            raise SchemaError(
                f"tier {name!r}: interval [{xmin}, {xmax}] has non-positive length"
            )
        if prev_end is not None and xmin < prev_end - 1e-9:
            raise SchemaError(
                f"tier {name!r}: interval at {xmin}s overlaps or precedes {prev_end}s"
            )
        prev_end = xmax
        intervals.append(PhonemeInterval(text if text else "<sil>", xmin, xmax))
    return AnnotationTrack(tuple(intervals))


def track_to_textgrid(track: AnnotationTrack, tier: str = "phones") -> str:
    """Write an annotation track as a single-tier long-format TextGrid."""
    xmin = track.intervals[0].start if track.intervals else 0.0
    xmax = track.intervals[-1].end if track.intervals else 0.0
    out = [
        'File type = "ooTextFile"',
        'Object class = "TextGrid"',
        "",
        f"xmin = {xmin:.6f}",
        f"xmax = {xmax:.6f}",
        "tiers? <exists>",
        "size = 1",
        "item []:",
        "    item [1]:",
        '        class = "IntervalTier"',
        f'        name = "{tier}"',
        f"        xmin = {xmin:.6f}",
        f"        xmax = {xmax:.6f}",
        f"        intervals: size = {len(track.intervals)}",
    ]
    for i, interval in enumerate(track.intervals, 1):
        label = "" if interval.phoneme == "<sil>" else interval.phoneme
        out.append(f"        intervals [{i}]:")
        out.append(f"            xmin = {interval.start:.6f}")
        out.append(f"            xmax = {interval.end:.6f}")
        out.append(f'            text = "{label}"')
    return "\n".join(out) + "\n"
