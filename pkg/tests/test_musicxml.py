import pytest

from phonemix.errors import ParseError, SchemaError
from phonemix.musicxml import parse_musicxml, score_to_musicxml
from phonemix.score import MusicScore, Note


def doc(body, divisions=1, tempo='<sound tempo="120"/>'):
    return f"""<?xml version="1.0"?>
<score-partwise>
  <part id="P1">
    <measure number="1">
      <attributes><divisions>{divisions}</divisions></attributes>
      {tempo}
      {body}
    </measure>
  </part>
</score-partwise>
""".encode()


QUARTER_C4_KA = """
<note>
  <pitch><step>C</step><octave>4</octave></pitch>
  <duration>1</duration>
  <lyric><text>ka</text></lyric>
</note>
"""


class TestParse:
    def test_quarter_note_at_120bpm(self):
        score, warnings = parse_musicxml(doc(QUARTER_C4_KA))
        assert len(score) == 1
        note = score.notes[0]
        assert note.pitch == 60
        assert note.duration == pytest.approx(0.5)
        assert note.syllable == "ka"
        assert warnings == []

    def test_empty_part(self):
        score, _ = parse_musicxml(doc(""))
        assert len(score) == 0

    def test_rest_then_note(self):
        body = "<note><rest/><duration>2</duration></note>" + QUARTER_C4_KA
        score, _ = parse_musicxml(doc(body))
        assert len(score) == 2
        assert score.notes[0].is_rest
        assert score.notes[0].duration == pytest.approx(1.0)
        assert score.notes[1].onset == pytest.approx(1.0)

    def test_alter_shifts_pitch(self):
        body = """
        <note>
          <pitch><step>C</step><alter>1</alter><octave>4</octave></pitch>
          <duration>1</duration>
          <lyric><text>ka</text></lyric>
        </note>
        """
        score, _ = parse_musicxml(doc(body))
        assert score.notes[0].pitch == 61

    def test_default_tempo_warns(self):
        score, warnings = parse_musicxml(doc(QUARTER_C4_KA, tempo=""))
        assert score.notes[0].duration == pytest.approx(0.5)
        assert any("tempo" in w for w in warnings)

    def test_tempo_scales_duration(self):
        score, _ = parse_musicxml(doc(QUARTER_C4_KA, tempo='<sound tempo="60"/>'))
        assert score.notes[0].duration == pytest.approx(1.0)

    def test_divisions_scale_duration(self):
        score, _ = parse_musicxml(doc(QUARTER_C4_KA, divisions=4))
        assert score.notes[0].duration == pytest.approx(0.125)

    def test_unsupported_elements_warn(self):
        body = QUARTER_C4_KA.replace(
            "</note>", "<stem>up</stem></note>"
        )
        _, warnings = parse_musicxml(doc(body))
        assert any("stem" in w for w in warnings)

    def test_malformed_xml_has_position(self):
        with pytest.raises(ParseError) as err:
            parse_musicxml(b"<score-partwise><part>")
        assert err.value.line is not None
        assert err.value.column is not None

    def test_note_without_duration_is_schema_error(self):
        body = """
        <note>
          <pitch><step>C</step><octave>4</octave></pitch>
          <lyric><text>ka</text></lyric>
        </note>
        """
        with pytest.raises(SchemaError):
            parse_musicxml(doc(body))

    def test_pitched_note_without_lyric_is_schema_error(self):
        body = """
        <note>
          <pitch><step>C</step><octave>4</octave></pitch>
          <duration>1</duration>
        </note>
        """
        with pytest.raises(SchemaError):
            parse_musicxml(doc(body))


class TestRoundTrip:
    def make_score(self):
        return MusicScore(
            (
                Note(None, 0.0, 0.25),
                Note(60, 0.25, 0.5, "ka"),
                Note(61, 0.75, 0.125, "shi"),
                Note(None, 0.875, 0.5),
                Note(72, 1.375, 1.0, "a"),
            )
        )

    def test_serialize_then_reparse_equal(self):
        score = self.make_score()
        reparsed, warnings = parse_musicxml(score_to_musicxml(score))
        assert warnings == []
        assert len(reparsed) == len(score)
        for a, b in zip(score.notes, reparsed.notes):
            assert a.pitch == b.pitch
            assert a.syllable == b.syllable
            assert a.onset == pytest.approx(b.onset, abs=1e-9)
            assert a.duration == pytest.approx(b.duration, abs=1e-9)

    def test_double_round_trip_is_stable(self):
        once = score_to_musicxml(self.make_score())
        score1, _ = parse_musicxml(once)
        twice = score_to_musicxml(score1)
        assert once == twice
