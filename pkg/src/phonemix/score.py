"""Domain model for music scores, syllable-note pairs, and annotations.

All types here are immutable values; the operations at the bottom are pure
functions. Time is kept in seconds until it crosses into the model, where
it becomes integer acoustic frames via :func:`seconds_to_frames`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import LexiconError

SILENCE_TOKENS = ("<sil>", "<pau>", "<br>")

VOWEL = "vowel"
CONSONANT = "consonant"
SILENCE = "silence"

_ONSET_TOLERANCE = 1e-6


@dataclass(frozen=True)
class FrameClock:
    """Sampling and framing parameters shared by features and durations.

    Defaults give 12.5 ms frames: 300-sample hops at 24 kHz with a
    1200-sample analysis window.
    """

    sample_rate: int = 24000
    hop: int = 300
    window: int = 1200

    def __post_init__(self):
        if self.hop <= 0:
            raise ValueError(f"hop must be positive, got {self.hop}")
        if self.window < self.hop:
            raise ValueError(
                f"window ({self.window}) must be >= hop ({self.hop})"
            )
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")

    @property
    def frame_seconds(self) -> float:
        return self.hop / self.sample_rate


@dataclass(frozen=True)
class Phoneme:
    """A phoneme token with its broad class (vowel/consonant/silence)."""

    symbol: str
    klass: str

    def __post_init__(self):
        if not self.symbol:
            raise ValueError("phoneme symbol must be non-empty")
        if self.klass not in (VOWEL, CONSONANT, SILENCE):
            raise ValueError(f"unknown phoneme class {self.klass!r}")
        if self.klass == SILENCE and self.symbol not in SILENCE_TOKENS:
            raise ValueError(
                f"silence class is reserved for {SILENCE_TOKENS}, got {self.symbol!r}"
            )

    @property
    def is_silence(self) -> bool:
        return self.klass == SILENCE


@dataclass(frozen=True)
class Note:
    """One score note: pitch, onset/duration in seconds, lyric syllable.

    ``pitch`` is a MIDI note number, or None for a rest. Rests carry an
    empty syllable; non-rests must carry one.
    """

    pitch: int | None
    onset: float
    duration: float
    syllable: str = ""

    def __post_init__(self):
        if self.onset < 0:
            raise ValueError(f"note onset must be >= 0, got {self.onset}")
        if self.duration <= 0:
            raise ValueError(f"note duration must be > 0, got {self.duration}")
        if self.pitch is not None and not self.syllable:
            raise ValueError(f"pitched note at {self.onset}s has no syllable")

    @property
    def is_rest(self) -> bool:
        return self.pitch is None

    @property
    def is_silence(self) -> bool:
        """True for rests and for notes carrying a silence mark as lyric."""
        return self.is_rest or self.syllable in SILENCE_TOKENS

    @property
    def end(self) -> float:
        return self.onset + self.duration


@dataclass(frozen=True)
class MusicScore:
    """An ordered, non-overlapping sequence of notes plus the frame clock."""

    notes: tuple[Note, ...]
    clock: FrameClock = field(default_factory=FrameClock)

    def __post_init__(self):
        object.__setattr__(self, "notes", tuple(self.notes))
        for prev, cur in zip(self.notes, self.notes[1:]):
            if cur.onset < prev.end - _ONSET_TOLERANCE:
                raise ValueError(
                    f"notes overlap: {prev.syllable!r} ends at {prev.end}s, "
                    f"{cur.syllable!r} starts at {cur.onset}s"
                )

    def __len__(self):
        return len(self.notes)


@dataclass(frozen=True)
class Lexicon:
    """Syllable-to-phoneme mapping plus the phoneme class inventory.

    ``entries`` maps syllable tokens to phoneme symbol sequences;
    ``classes`` maps every phoneme symbol to vowel/consonant. Silence
    tokens are always resolvable and need not be listed.
    """

    entries: dict[str, tuple[str, ...]]
    classes: dict[str, str]

    def __post_init__(self):
        object.__setattr__(
            self, "entries", {k: tuple(v) for k, v in self.entries.items()}
        )
        for syllable, phonemes in self.entries.items():
            if not phonemes:
                raise LexiconError(f"lexicon entry {syllable!r} is empty")
            for symbol in phonemes:
                self._resolve_class(symbol, syllable)
        for symbol, klass in self.classes.items():
            if klass not in (VOWEL, CONSONANT):
                raise LexiconError(
                    f"phoneme {symbol!r} has unknown class {klass!r}"
                )

    def _resolve_class(self, symbol: str, syllable: str) -> str:
        if symbol in SILENCE_TOKENS:
            return SILENCE
        if symbol not in self.classes:
            raise LexiconError(
                f"phoneme {symbol!r} (entry {syllable!r}) has no class in the inventory"
            )
        return self.classes[symbol]

    @property
    def n_max(self) -> int:
        """Maximum phonemes per entry; the predictor's slot count."""
        return max(len(v) for v in self.entries.values())

    def phonemes(self, syllable: str) -> tuple[Phoneme, ...]:
        if syllable in SILENCE_TOKENS:
            return (Phoneme(syllable, SILENCE),)
        if syllable not in self.entries:
            raise LexiconError(f"syllable {syllable!r} not in lexicon")
        return tuple(
            Phoneme(s, self._resolve_class(s, syllable)) for s in self.entries[syllable]
        )

    def phoneme_class(self, symbol: str) -> str:
        if symbol in SILENCE_TOKENS:
            return SILENCE
        if symbol not in self.classes:
            raise LexiconError(f"phoneme {symbol!r} has no class in the inventory")
        return self.classes[symbol]


@dataclass(frozen=True)
class SyllableNotePair:
    """The unit of duration prediction: one note with its lexicon phonemes.

    ``d_note`` is the note duration in integer frames (>= 1); ``index`` is
    the pair's position within its segment.
    """

    syllable: str
    phonemes: tuple[Phoneme, ...]
    pitch: int
    d_note: int
    index: int

    def __post_init__(self):
        object.__setattr__(self, "phonemes", tuple(self.phonemes))
        if not self.phonemes:
            raise ValueError(f"pair {self.syllable!r} has no phonemes")
        if self.d_note < 1:
            raise ValueError(f"pair {self.syllable!r} has d_note {self.d_note} < 1")

    @property
    def k(self) -> int:
        return len(self.phonemes)


@dataclass(frozen=True)
class PhonemeInterval:
    """A labeled time interval from a manual phoneme annotation."""

    phoneme: str
    start: float
    end: float

    def __post_init__(self):
        if self.end <= self.start:
            raise ValueError(
                f"interval {self.phoneme!r} has end {self.end} <= start {self.start}"
            )

    @property
    def duration(self) -> float:
        return self.end - self.start

    @property
    def is_silence(self) -> bool:
        return self.phoneme in SILENCE_TOKENS


@dataclass(frozen=True)
class AnnotationTrack:
    """Ordered, non-overlapping phoneme intervals for one recording."""

    intervals: tuple[PhonemeInterval, ...]

    def __post_init__(self):
        object.__setattr__(self, "intervals", tuple(self.intervals))
        for prev, cur in zip(self.intervals, self.intervals[1:]):
            if cur.start < prev.start:
                raise ValueError("annotation intervals are not sorted by start")
            if cur.start < prev.end - _ONSET_TOLERANCE:
                raise ValueError(
                    f"annotation intervals overlap at {cur.start}s ({cur.phoneme!r})"
                )

    def __len__(self):
        return len(self.intervals)


def seconds_to_frames(t: float, clock: FrameClock) -> int:
    """Convert seconds to the nearest whole frame count.

    Ties round half-to-even so long accumulations stay bias-free.
    """
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    return int(round(t * clock.sample_rate / clock.hop))


def pair_score(score: MusicScore, lexicon: Lexicon) -> list[SyllableNotePair]:
    """Expand a score into syllable-note pairs, one per non-silence note.

    Rests and silence-marked notes are excluded; they reset the
    within-segment pair index. A syllable missing from the lexicon raises
    :class:`LexiconError` naming it and its note position.
    """
    pairs = []
    index = 0
    for note_idx, note in enumerate(score.notes):
        if note.is_silence:
            index = 0
            continue
        try:
            phonemes = lexicon.phonemes(note.syllable)
        except LexiconError as exc:
            raise LexiconError(f"note {note_idx}: {exc}") from None
        d_note = max(1, seconds_to_frames(note.duration, score.clock))
        pairs.append(
            SyllableNotePair(
                syllable=note.syllable,
                phonemes=phonemes,
                pitch=note.pitch,
                d_note=d_note,
                index=index,
            )
        )
        index += 1
    return pairs


def segment_score(score: MusicScore) -> list[MusicScore]:
    """Split a score at rests and silence marks into singable segments.

    Silence notes are dropped; empty segments (e.g. between consecutive
    rests) are not emitted. Concatenating the segments preserves the
    original order of non-silence notes.
    """
    segments = []
    current: list[Note] = []
    for note in score.notes:
        if note.is_silence:
            if current:
                segments.append(MusicScore(tuple(current), score.clock))
                current = []
        else:
            current.append(note)
    if current:
        segments.append(MusicScore(tuple(current), score.clock))
    return segments
