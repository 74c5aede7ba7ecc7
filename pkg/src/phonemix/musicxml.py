"""MusicXML subset reader/writer.

Supported elements: part, measure, note, pitch (step/octave/alter),
duration, divisions, rest, lyric/text, and sound[@tempo]. Everything else
is ignored and reported in the warning list. Durations are converted to
seconds from divisions and tempo; onsets accumulate left to right, so the
subset is single-voice by construction.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from fractions import Fraction

from .errors import ParseError, SchemaError
from .score import FrameClock, MusicScore, Note

_STEP_TO_SEMITONE = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}
_SEMITONE_TO_STEP = {0: ("C", 0), 1: ("C", 1), 2: ("D", 0), 3: ("D", 1),
                     4: ("E", 0), 5: ("F", 0), 6: ("F", 1), 7: ("G", 0),
                     8: ("G", 1), 9: ("A", 0), 10: ("A", 1), 11: ("B", 0)}

_KNOWN_NOTE_CHILDREN = {"pitch", "duration", "rest", "lyric"}
_KNOWN_MEASURE_CHILDREN = {"note", "attributes", "sound", "direction"}

DEFAULT_TEMPO = 120.0


def midi_from_pitch(step: str, octave: int, alter: int = 0) -> int:
    if step not in _STEP_TO_SEMITONE:
        raise SchemaError(f"unknown pitch step {step!r}")
    return _STEP_TO_SEMITONE[step] + alter + 12 * (octave + 1)


def pitch_to_step_octave_alter(midi: int) -> tuple[str, int, int]:
    step, alter = _SEMITONE_TO_STEP[midi % 12]
    return step, midi // 12 - 1, alter


def _strip_ns(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _find(elem: ET.Element, name: str) -> ET.Element | None:
    for child in elem:
        if _strip_ns(child.tag) == name:
            return child
    return None


def _text(elem: ET.Element | None) -> str | None:
    if elem is None or elem.text is None:
        return None
    return elem.text.strip()


def parse_musicxml(data: bytes | str, clock: FrameClock | None = None):
    """Parse a MusicXML subset document.

    Returns ``(MusicScore, warnings)``. Raises :class:`ParseError` with
    line/column for malformed XML and :class:`SchemaError` for documents
    that are valid XML but break the subset (e.g. a note without a
    duration).
    """
    if isinstance(data, str):
        data = data.encode("utf-8")
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        raise ParseError(f"malformed MusicXML: {exc.msg}", line, column) from None

    clock = clock or FrameClock()
    warnings: list[str] = []
    unsupported: set[str] = set()

    parts = [e for e in root.iter() if _strip_ns(e.tag) == "part"]
    if not parts:
        return MusicScore((), clock), ["no part element; score is empty"]
    if len(parts) > 1:
        warnings.append(f"multiple parts found; using the first of {len(parts)}")
    part = parts[0]

    divisions = None
    tempo = None
    onset = 0.0
    notes: list[Note] = []
    note_count = 0

    for measure in part:
        if _strip_ns(measure.tag) != "measure":
            unsupported.add(_strip_ns(measure.tag))
            continue
        for elem in measure:
            tag = _strip_ns(elem.tag)
            if tag == "attributes":
                div = _text(_find(elem, "divisions"))
                if div is not None:
                    divisions = int(div)
                    if divisions <= 0:
                        raise SchemaError(f"divisions must be positive, got {divisions}")
            elif tag == "sound" or tag == "direction":
                sound = elem if tag == "sound" else _find(elem, "sound")
                if sound is not None and "tempo" in sound.attrib:
                    tempo = float(sound.attrib["tempo"])
                    if tempo <= 0:
                        raise SchemaError(f"tempo must be positive, got {tempo}")
            elif tag == "note":
                if divisions is None:
                    divisions = 1
                    warnings.append("no divisions element before first note; assuming 1")
                if tempo is None:
                    tempo = DEFAULT_TEMPO
                    warnings.append(f"no tempo found; assuming {DEFAULT_TEMPO:g} BPM")
                duration_text = _text(_find(elem, "duration"))
                if duration_text is None:
                    raise SchemaError(f"note {note_count} has no duration element")
                seconds = int(duration_text) * 60.0 / (tempo * divisions)
                if seconds <= 0:
                    raise SchemaError(f"note {note_count} has non-positive duration")

                for child in elem:
                    if _strip_ns(child.tag) not in _KNOWN_NOTE_CHILDREN:
                        unsupported.add(_strip_ns(child.tag))

                if _find(elem, "rest") is not None:
                    notes.append(Note(None, onset, seconds, ""))
                else:
                    pitch_elem = _find(elem, "pitch")
                    if pitch_elem is None:
                        raise SchemaError(f"note {note_count} has neither pitch nor rest")
                    step = _text(_find(pitch_elem, "step"))
                    octave = _text(_find(pitch_elem, "octave"))
                    if step is None or octave is None:
                        raise SchemaError(f"note {note_count} has incomplete pitch")
                    alter = _text(_find(pitch_elem, "alter"))
                    midi = midi_from_pitch(step, int(octave), int(alter) if alter else 0)

                    lyric = _find(elem, "lyric")
                    syllable = _text(_find(lyric, "text")) if lyric is not None else None
                    if not syllable:
                        raise SchemaError(f"pitched note {note_count} has no lyric text")
                    notes.append(Note(midi, onset, seconds, syllable))
                onset += seconds
                note_count += 1
            else:
                unsupported.add(tag)

    for tag in sorted(unsupported):
        warnings.append(f"ignored unsupported element <{tag}>")
    return MusicScore(tuple(notes), clock), warnings


def score_to_musicxml(score: MusicScore, tempo: float = DEFAULT_TEMPO) -> bytes:
    """Serialize a score back to the MusicXML subset.

    Picks a divisions value so that every note duration is an exact whole
    number of divisions at the given tempo (denominators capped at 960 per
    quarter). Gaps between notes are emitted as explicit rests, so
    contiguous scores round-trip exactly.
    """
    quarters = []
    cursor = 0.0
    events = []  # (is_rest, quarter_len Fraction, note or None)
    for note in score.notes:
        gap = note.onset - cursor
        if gap > 1e-9:
            events.append((True, _to_quarters(gap, tempo), None))
        events.append((note.is_rest, _to_quarters(note.duration, tempo), note))
        cursor = note.end
    for _, q, _ in events:
        quarters.append(q)

    divisions = 1
    for q in quarters:
        divisions = divisions * q.denominator // math.gcd(divisions, q.denominator)

    root = ET.Element("score-partwise", version="3.1")
    part = ET.SubElement(root, "part", id="P1")
    measure = ET.SubElement(part, "measure", number="1")
    attributes = ET.SubElement(measure, "attributes")
    ET.SubElement(attributes, "divisions").text = str(divisions)
    ET.SubElement(measure, "sound", tempo=f"{tempo:g}")

    for is_rest, q, note in events:
        note_elem = ET.SubElement(measure, "note")
        if is_rest:
            ET.SubElement(note_elem, "rest")
        else:
            step, octave, alter = pitch_to_step_octave_alter(note.pitch)
            pitch_elem = ET.SubElement(note_elem, "pitch")
            ET.SubElement(pitch_elem, "step").text = step
            if alter:
                ET.SubElement(pitch_elem, "alter").text = str(alter)
            ET.SubElement(pitch_elem, "octave").text = str(octave)
        ET.SubElement(note_elem, "duration").text = str(int(q * divisions))
        if note is not None and not is_rest:
            lyric = ET.SubElement(note_elem, "lyric")
            ET.SubElement(lyric, "text").text = note.syllable

    ET.indent(root)
    return ET.tostring(root, encoding="utf-8", xml_declaration=True)


def _to_quarters(seconds: float, tempo: float) -> Fraction:
    return Fraction(seconds * tempo / 60.0).limit_denominator(960)
