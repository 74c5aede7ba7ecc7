"""Match annotated phoneme intervals onto score pairs.

Matching is greedy left-to-right on exact phoneme symbols, so every
mismatch surfaces as an explicit flag instead of silently shifting time:

* ``missing_phoneme``  — a lexicon slot with no annotated interval
  (assigned 0 frames),
* ``redundant_phoneme`` — an annotated phoneme that fits no slot of the
  pair being matched (skipped),
* ``boundary_shift``   — annotated phonemes left over after the last pair
  (e.g. one syllable sung across several notes).

Silence intervals inside the track are segment padding and are skipped
without a flag.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AlignmentError
from .score import (
    AnnotationTrack,
    FrameClock,
    SyllableNotePair,
    seconds_to_frames,
)

REDUNDANT_PHONEME = "redundant_phoneme"
MISSING_PHONEME = "missing_phoneme"
BOUNDARY_SHIFT = "boundary_shift"

FLAG_KINDS = (REDUNDANT_PHONEME, MISSING_PHONEME, BOUNDARY_SHIFT)


@dataclass(frozen=True)
class AlignedPair:
    """A pair plus the annotated frame count for each of its phoneme slots."""

    pair: SyllableNotePair
    annotated_durations: tuple[int, ...]
    flags: frozenset[str]

    def __post_init__(self):
        object.__setattr__(
            self, "annotated_durations", tuple(self.annotated_durations)
        )
        object.__setattr__(self, "flags", frozenset(self.flags))
        if len(self.annotated_durations) != self.pair.k:
            raise ValueError(
                f"pair {self.pair.syllable!r}: {len(self.annotated_durations)} "
                f"durations for {self.pair.k} phoneme slots"
            )
        if any(d < 0 for d in self.annotated_durations):
            raise ValueError("annotated durations must be >= 0")

    @property
    def total_annotated(self) -> int:
        return sum(self.annotated_durations)


@dataclass
class MisalignmentReport:
    """Aggregate flag counts for one alignment run."""

    counts: dict[str, int] = field(
        default_factory=lambda: {k: 0 for k in FLAG_KINDS}
    )
    per_pair: list[tuple[int, tuple[str, ...]]] = field(default_factory=list)
    discrepancy_frames: int = 0

    def record(self, pair_index: int, flags: set[str], discrepancy: int):
        for flag in sorted(flags):
            self.counts[flag] += 1
        self.per_pair.append((pair_index, tuple(sorted(flags))))
        self.discrepancy_frames += abs(discrepancy)

    def merge(self, other: "MisalignmentReport") -> "MisalignmentReport":
        merged = MisalignmentReport()
        for k in FLAG_KINDS:
            merged.counts[k] = self.counts[k] + other.counts[k]
        merged.per_pair = self.per_pair + other.per_pair
        merged.discrepancy_frames = self.discrepancy_frames + other.discrepancy_frames
        return merged


def align_annotation(
    pairs: list[SyllableNotePair],
    track: AnnotationTrack,
    clock: FrameClock,
) -> tuple[list[AlignedPair], MisalignmentReport]:
    """Assign annotated frame durations to each pair's phoneme slots.

    ``pairs`` must come from one contiguous segment and ``track`` must
    cover that segment's span. Matched slots get the rounded frame length
    of their interval; unmatched slots get 0 frames plus a flag.
    """
    phones = [iv for iv in track.intervals if not iv.is_silence]
    if not pairs:
        if phones:
            raise AlignmentError(
                f"no pairs to align but track has {len(phones)} phoneme intervals"
            )
        return [], MisalignmentReport()

    report = MisalignmentReport()
    aligned = []
    cursor = 0
    for pair in pairs:
        flags: set[str] = set()
        durations = []
        remaining = [p.symbol for p in pair.phonemes]
        for slot, symbol in enumerate(remaining):
            # skip annotation phonemes that fit no slot of this pair
            while (
                cursor < len(phones)
                and phones[cursor].phoneme != symbol
                and phones[cursor].phoneme not in remaining[slot:]
            ):
                flags.add(REDUNDANT_PHONEME)
                cursor += 1
            if cursor < len(phones) and phones[cursor].phoneme == symbol:
                durations.append(seconds_to_frames(phones[cursor].duration, clock))
                cursor += 1
            else:
                durations.append(0)
                flags.add(MISSING_PHONEME)
        if pair is pairs[-1] and cursor < len(phones):
            flags.add(BOUNDARY_SHIFT)
            cursor = len(phones)
        aligned.append(AlignedPair(pair, tuple(durations), frozenset(flags)))
        report.record(pair.index, flags, sum(durations) - pair.d_note)
    return aligned, report
