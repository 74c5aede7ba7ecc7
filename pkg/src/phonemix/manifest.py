"""Versioned JSON manifest tying scores, annotations, and features together.

The manifest is the hand-off between ingestion and training/evaluation.
Serialization is deterministic (sorted keys, fixed indent) so re-running
ingestion on unchanged inputs produces byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .alignment import FLAG_KINDS, AlignedPair, MisalignmentReport
from .errors import SchemaError
from .score import FrameClock, Phoneme, SyllableNotePair

SCHEMA = "phonemix-manifest/1"


@dataclass
class SegmentEntry:
    """One silence-delimited segment: its pairs and its feature frame span."""

    index: int
    start: float
    end: float
    frame_start: int
    frame_end: int
    pairs: list[AlignedPair]


@dataclass
class SongEntry:
    name: str
    feature_path: str
    segments: list[SegmentEntry]
    warnings: list[str] = field(default_factory=list)


@dataclass
class Manifest:
    clock: FrameClock
    n_max: int
    songs: list[SongEntry]
    misalignment: MisalignmentReport
    normalization: dict | None = None  # {"mean": [...], "std": [...]}

    def song(self, name: str) -> SongEntry:
        for entry in self.songs:
            if entry.name == name:
                return entry
        raise KeyError(f"song {name!r} not in manifest")


def _pair_to_dict(aligned: AlignedPair) -> dict:
    pair = aligned.pair
    return {
        "index": pair.index,
        "syllable": pair.syllable,
        "phonemes": [p.symbol for p in pair.phonemes],
        "classes": [p.klass for p in pair.phonemes],
        "pitch": pair.pitch,
        "d_note": pair.d_note,
        "annotated": list(aligned.annotated_durations),
        "flags": sorted(aligned.flags),
    }


def _pair_from_dict(data: dict) -> AlignedPair:
    phonemes = tuple(
        Phoneme(s, c) for s, c in zip(data["phonemes"], data["classes"])
    )
    pair = SyllableNotePair(
        syllable=data["syllable"],
        phonemes=phonemes,
        pitch=data["pitch"],
        d_note=data["d_note"],
        index=data["index"],
    )
    return AlignedPair(pair, tuple(data["annotated"]), frozenset(data["flags"]))


def to_document(manifest: Manifest) -> dict:
    doc = {
        "schema": SCHEMA,
        "clock": {
            "sample_rate": manifest.clock.sample_rate,
            "hop": manifest.clock.hop,
            "window": manifest.clock.window,
        },
        "n_max": manifest.n_max,
        "songs": [
            {
                "name": song.name,
                "feature_path": song.feature_path,
                "warnings": song.warnings,
                "segments": [
                    {
                        "index": seg.index,
                        "start": seg.start,
                        "end": seg.end,
                        "frame_start": seg.frame_start,
                        "frame_end": seg.frame_end,
                        "pairs": [_pair_to_dict(p) for p in seg.pairs],
                    }
                    for seg in song.segments
                ],
            }
            for song in manifest.songs
        ],
        "misalignment": {
            **{k: manifest.misalignment.counts[k] for k in FLAG_KINDS},
            "discrepancy_frames": manifest.misalignment.discrepancy_frames,
        },
    }
    if manifest.normalization is not None:
        doc["normalization"] = manifest.normalization
    return doc


def from_document(doc: dict) -> Manifest:
    if doc.get("schema") != SCHEMA:
        raise SchemaError(
            f"expected manifest schema {SCHEMA!r}, got {doc.get('schema')!r}"
        )
    clock = FrameClock(**doc["clock"])
    songs = []
    report = MisalignmentReport()
    for song_doc in doc["songs"]:
        segments = []
        for seg_doc in song_doc["segments"]:
            pairs = [_pair_from_dict(p) for p in seg_doc["pairs"]]
            segments.append(
                SegmentEntry(
                    index=seg_doc["index"],
                    start=seg_doc["start"],
                    end=seg_doc["end"],
                    frame_start=seg_doc["frame_start"],
                    frame_end=seg_doc["frame_end"],
                    pairs=pairs,
                )
            )
        songs.append(
            SongEntry(
                name=song_doc["name"],
                feature_path=song_doc["feature_path"],
                segments=segments,
                warnings=list(song_doc.get("warnings", [])),
            )
        )
    mis = doc["misalignment"]
    for k in FLAG_KINDS:
        report.counts[k] = mis[k]
    report.discrepancy_frames = mis["discrepancy_frames"]
    return Manifest(
        clock=clock,
        n_max=doc["n_max"],
        songs=songs,
        misalignment=report,
        normalization=doc.get("normalization"),
    )


def save(manifest: Manifest, path: str | Path):
    Path(path).write_text(
        json.dumps(to_document(manifest), sort_keys=True, indent=2) + "\n"
    )


def load(path: str | Path) -> Manifest:
    return from_document(json.loads(Path(path).read_text()))
