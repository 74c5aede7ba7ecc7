import pytest

from phonemix.alignment import (
    BOUNDARY_SHIFT,
    MISSING_PHONEME,
    REDUNDANT_PHONEME,
    align_annotation,
)
from phonemix.errors import AlignmentError
from phonemix.score import (
    AnnotationTrack,
    FrameClock,
    Phoneme,
    PhonemeInterval,
    SyllableNotePair,
)

CLOCK = FrameClock()


def pair(symbols, classes=None, d_note=40, index=0, syllable=None):
    classes = classes or ["consonant" if len(s) > 0 and s not in "aeiou" else "vowel" for s in symbols]
    phones = tuple(Phoneme(s, c) for s, c in zip(symbols, classes))
    return SyllableNotePair(
        syllable=syllable or "".join(symbols),
        phonemes=phones,
        pitch=60,
        d_note=d_note,
        index=index,
    )


def track(*intervals):
    return AnnotationTrack(tuple(PhonemeInterval(t, s, e) for t, s, e in intervals))


class TestAlignAnnotation:
    def test_exact_match(self):
        aligned, report = align_annotation(
            [pair(["k", "a"])], track(("k", 0.0, 0.1), ("a", 0.1, 0.5)), CLOCK
        )
        assert aligned[0].annotated_durations == (8, 32)
        assert aligned[0].flags == frozenset()
        assert report.counts[MISSING_PHONEME] == 0
        assert report.counts[REDUNDANT_PHONEME] == 0

    def test_missing_phoneme(self):
        aligned, report = align_annotation(
            [pair(["k", "a"])], track(("a", 0.0, 0.5)), CLOCK
        )
        assert aligned[0].annotated_durations == (0, 40)
        assert MISSING_PHONEME in aligned[0].flags
        assert report.counts[MISSING_PHONEME] == 1

    def test_redundant_phoneme(self):
        aligned, report = align_annotation(
            [pair(["a"])], track(("n", 0.0, 0.1), ("a", 0.1, 0.5)), CLOCK
        )
        assert aligned[0].annotated_durations == (32,)
        assert REDUNDANT_PHONEME in aligned[0].flags
        assert report.counts[REDUNDANT_PHONEME] == 1

    def test_silence_intervals_skipped_without_flags(self):
        aligned, report = align_annotation(
            [pair(["k", "a"])],
            track(("<sil>", 0.0, 0.2), ("k", 0.2, 0.3), ("a", 0.3, 0.7), ("<sil>", 0.7, 0.8)),
            CLOCK,
        )
        assert aligned[0].annotated_durations == (8, 32)
        assert aligned[0].flags == frozenset()

    def test_two_pairs_consumed_in_order(self):
        pairs = [pair(["k", "a"], index=0), pair(["n", "a"], index=1)]
        aligned, report = align_annotation(
            pairs,
            track(("k", 0.0, 0.1), ("a", 0.1, 0.5), ("n", 0.5, 0.6), ("a", 0.6, 1.0)),
            CLOCK,
        )
        assert aligned[0].annotated_durations == (8, 32)
        assert aligned[1].annotated_durations == (8, 32)
        assert report.counts[REDUNDANT_PHONEME] == 0

    def test_leftover_annotation_flags_boundary_shift(self):
        aligned, report = align_annotation(
            [pair(["k", "a"])],
            track(("k", 0.0, 0.1), ("a", 0.1, 0.5), ("a", 0.5, 0.9)),
            CLOCK,
        )
        assert BOUNDARY_SHIFT in aligned[-1].flags
        assert report.counts[BOUNDARY_SHIFT] == 1

    def test_empty_pairs_with_phones_errors(self):
        with pytest.raises(AlignmentError):
            align_annotation([], track(("a", 0.0, 0.5)), CLOCK)

    def test_empty_pairs_with_silence_only_ok(self):
        aligned, report = align_annotation([], track(("<sil>", 0.0, 0.5)), CLOCK)
        assert aligned == []
        assert report.discrepancy_frames == 0

    def test_deterministic(self):
        pairs = [pair(["k", "a"], index=0), pair(["a"], index=1)]
        tr = track(("k", 0.0, 0.1), ("a", 0.1, 0.5), ("n", 0.5, 0.6), ("a", 0.6, 1.0))
        first = align_annotation(pairs, tr, CLOCK)
        second = align_annotation(pairs, tr, CLOCK)
        assert [a.annotated_durations for a in first[0]] == [
            a.annotated_durations for a in second[0]
        ]
        assert first[1].counts == second[1].counts
        assert first[1].per_pair == second[1].per_pair

    def test_durations_within_track_budget(self):
        # sum of assigned frames can exceed the track total only by
        # rounding slack (half a frame per matched interval)
        pairs = [pair(["k", "a"], index=0), pair(["n", "a"], index=1)]
        tr = track(("k", 0.0, 0.11), ("a", 0.11, 0.52), ("n", 0.52, 0.63), ("a", 0.63, 1.01))
        aligned, _ = align_annotation(pairs, tr, CLOCK)
        total = sum(a.total_annotated for a in aligned)
        track_frames = (1.01 - 0.0) * CLOCK.sample_rate / CLOCK.hop
        assert total <= track_frames + len(pairs)

    def test_discrepancy_accumulates_abs_per_pair(self):
        aligned, report = align_annotation(
            [pair(["k", "a"], d_note=40)], track(("k", 0.0, 0.1), ("a", 0.1, 0.4)), CLOCK
        )
        # 8 + 24 = 32 assigned vs d_note 40
        assert report.discrepancy_frames == 8
