import random

import pytest

from phonemix.errors import LexiconError
from phonemix.score import (
    FrameClock,
    Lexicon,
    MusicScore,
    Note,
    Phoneme,
    pair_score,
    seconds_to_frames,
    segment_score,
)


@pytest.fixture
def clock():
    return FrameClock()


@pytest.fixture
def lexicon():
    return Lexicon(
        entries={"ka": ["k", "a"], "a": ["a"], "shi": ["sh", "i"]},
        classes={"k": "consonant", "a": "vowel", "sh": "consonant", "i": "vowel"},
    )


class TestFrameClock:
    def test_defaults_give_12_5_ms_frames(self, clock):
        assert clock.frame_seconds == pytest.approx(0.0125)

    def test_rejects_window_smaller_than_hop(self):
        with pytest.raises(ValueError):
            FrameClock(hop=300, window=200)

    def test_rejects_nonpositive_hop(self):
        with pytest.raises(ValueError):
            FrameClock(hop=0)


class TestSecondsToFrames:
    def test_zero(self, clock):
        assert seconds_to_frames(0.0, clock) == 0

    def test_one_second_is_80_frames(self, clock):
        assert seconds_to_frames(1.0, clock) == 80

    def test_eighth_of_a_second(self, clock):
        # 0.125 * 80 = 10 exactly
        assert seconds_to_frames(0.125, clock) == 10

    def test_half_frame_ties_round_to_even(self, clock):
        # 0.5 frames -> 0, 1.5 frames -> 2
        assert seconds_to_frames(0.5 / 80, clock) == 0
        assert seconds_to_frames(1.5 / 80, clock) == 2

    def test_negative_rejected(self, clock):
        with pytest.raises(ValueError):
            seconds_to_frames(-0.1, clock)

    def test_monotone_nondecreasing(self, clock):
        rng = random.Random(7)
        times = sorted(rng.uniform(0, 30) for _ in range(300))
        frames = [seconds_to_frames(t, clock) for t in times]
        assert all(b >= a for a, b in zip(frames, frames[1:]))


def _note(pitch, onset, dur, syllable=""):
    return Note(pitch, onset, dur, syllable)


class TestNoteInvariants:
    def test_pitched_note_needs_syllable(self):
        with pytest.raises(ValueError):
            Note(60, 0.0, 0.5, "")

    def test_rest_has_no_syllable_requirement(self):
        assert Note(None, 0.0, 0.5).is_rest

    def test_overlapping_notes_rejected(self):
        with pytest.raises(ValueError):
            MusicScore((_note(60, 0.0, 1.0, "ka"), _note(62, 0.5, 1.0, "a")))


class TestPairScore:
    def test_single_note(self, lexicon):
        score = MusicScore((_note(60, 0.0, 0.5, "ka"),))
        pairs = pair_score(score, lexicon)
        assert len(pairs) == 1
        assert pairs[0].k == 2
        assert pairs[0].d_note == 40
        assert [p.symbol for p in pairs[0].phonemes] == ["k", "a"]

    def test_empty_score(self, lexicon):
        assert pair_score(MusicScore(()), lexicon) == []

    def test_missing_syllable_names_note_and_token(self, lexicon):
        score = MusicScore((_note(60, 0.0, 0.5, "ka"), _note(62, 0.5, 0.5, "zz")))
        with pytest.raises(LexiconError) as err:
            pair_score(score, lexicon)
        assert "zz" in str(err.value)
        assert "note 1" in str(err.value)

    def test_index_resets_after_rest(self, lexicon):
        score = MusicScore(
            (
                _note(60, 0.0, 0.5, "ka"),
                _note(None, 0.5, 0.25),
                _note(62, 0.75, 0.5, "a"),
            )
        )
        pairs = pair_score(score, lexicon)
        assert [p.index for p in pairs] == [0, 0]

    def test_d_note_clamped_to_one_frame(self, lexicon):
        score = MusicScore((_note(60, 0.0, 0.004, "a"),))
        assert pair_score(score, lexicon)[0].d_note == 1

    def test_total_phoneme_count_matches_lexicon_expansion(self, lexicon):
        rng = random.Random(3)
        syllables = ["ka", "a", "shi"]
        notes = []
        onset = 0.0
        for _ in range(20):
            syl = rng.choice(syllables)
            dur = rng.uniform(0.1, 0.8)
            notes.append(_note(60, onset, dur, syl))
            onset += dur
        score = MusicScore(tuple(notes))
        pairs = pair_score(score, lexicon)
        expected = sum(len(lexicon.entries[n.syllable]) for n in notes)
        assert sum(p.k for p in pairs) == expected


class TestSegmentScore:
    def test_rest_splits_into_two(self):
        score = MusicScore(
            (
                _note(60, 0.0, 0.5, "ka"),
                _note(None, 0.5, 0.25),
                _note(62, 0.75, 0.5, "a"),
            )
        )
        segments = segment_score(score)
        assert len(segments) == 2
        assert all(len(s) == 1 for s in segments)

    def test_no_rests_identity(self):
        score = MusicScore((_note(60, 0.0, 0.5, "ka"), _note(62, 0.5, 0.5, "a")))
        segments = segment_score(score)
        assert len(segments) == 1
        assert segments[0].notes == score.notes

    def test_leading_and_trailing_rests_dropped(self):
        score = MusicScore(
            (
                _note(None, 0.0, 0.5),
                _note(60, 0.5, 0.5, "ka"),
                _note(None, 1.0, 0.5),
            )
        )
        segments = segment_score(score)
        assert len(segments) == 1
        assert segments[0].notes[0].syllable == "ka"

    def test_breath_mark_syllable_splits(self):
        score = MusicScore(
            (
                _note(60, 0.0, 0.5, "ka"),
                _note(62, 0.5, 0.2, "<br>"),
                _note(64, 0.7, 0.5, "a"),
            )
        )
        segments = segment_score(score)
        assert len(segments) == 2

    def test_note_count_preserved(self):
        rng = random.Random(11)
        notes = []
        onset = 0.0
        non_silence = 0
        for _ in range(30):
            dur = rng.uniform(0.1, 0.5)
            if rng.random() < 0.3:
                notes.append(_note(None, onset, dur))
            else:
                notes.append(_note(60, onset, dur, "ka"))
                non_silence += 1
            onset += dur
        segments = segment_score(MusicScore(tuple(notes)))
        assert sum(len(s) for s in segments) == non_silence
        assert all(not n.is_silence for s in segments for n in s.notes)


class TestLexicon:
    def test_n_max(self, lexicon):
        assert lexicon.n_max == 2

    def test_unclassified_phoneme_rejected(self):
        with pytest.raises(LexiconError):
            Lexicon(entries={"ka": ["k", "a"]}, classes={"k": "consonant"})

    def test_silence_tokens_always_resolve(self, lexicon):
        assert lexicon.phoneme_class("<pau>") == "silence"

    def test_phonemes_carry_classes(self, lexicon):
        phones = lexicon.phonemes("shi")
        assert [p.klass for p in phones] == ["consonant", "vowel"]

    def test_silence_phoneme_invariant(self):
        with pytest.raises(ValueError):
            Phoneme("k", "silence")
