import pytest

from phonemix.errors import MissingTierError, SchemaError
from phonemix.textgrid import parse_textgrid, track_to_textgrid
from phonemix.score import AnnotationTrack, PhonemeInterval


def long_grid(intervals, name="phones"):
    xmax = max(e for _, e, _ in intervals)
    body = "\n".join(
        f"""        intervals [{i}]:
            xmin = {s}
            xmax = {e}
            text = "{t}" """
        for i, (s, e, t) in enumerate(intervals, 1)
    )
    return f"""File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = {xmax}
tiers? <exists>
size = 1
item []:
    item [1]:
        class = "IntervalTier"
        name = "{name}"
        xmin = 0
        xmax = {xmax}
        intervals: size = {len(intervals)}
{body}
"""


def short_grid(intervals, name="phones"):
    xmax = max(e for _, e, _ in intervals)
    lines = [
        'File type = "ooTextFile"',
        'Object class = "TextGrid"',
        "",
        "0",
        str(xmax),
        "<exists>",
        "1",
        '"IntervalTier"',
        f'"{name}"',
        "0",
        str(xmax),
        str(len(intervals)),
    ]
    for s, e, t in intervals:
        lines += [str(s), str(e), f'"{t}"']
    return "\n".join(lines) + "\n"


class TestParse:
    def test_long_format_two_intervals(self):
        track = parse_textgrid(long_grid([(0, 0.1, "k"), (0.1, 0.5, "a")]))
        assert len(track) == 2
        assert track.intervals[0].phoneme == "k"
        assert track.intervals[1].end == pytest.approx(0.5)

    def test_short_format_two_intervals(self):
        track = parse_textgrid(short_grid([(0, 0.1, "k"), (0.1, 0.5, "a")]))
        assert len(track) == 2
        assert track.intervals[1].phoneme == "a"

    def test_empty_label_becomes_silence(self):
        track = parse_textgrid(long_grid([(0, 0.2, "")]))
        assert track.intervals[0].phoneme == "<sil>"
        assert track.intervals[0].is_silence

    def test_missing_tier(self):
        with pytest.raises(MissingTierError):
            parse_textgrid(long_grid([(0, 0.1, "k")], name="words"), tier="phones")

    def test_unsorted_intervals_rejected(self):
        with pytest.raises(SchemaError):
            parse_textgrid(long_grid([(0.1, 0.5, "a"), (0, 0.1, "k")]))

    def test_overlapping_intervals_rejected(self):
        with pytest.raises(SchemaError):
            parse_textgrid(long_grid([(0, 0.3, "k"), (0.2, 0.5, "a")]))

    def test_point_tier_skipped_and_named_tier_found(self):
        text = """File type = "ooTextFile"
Object class = "TextGrid"

0
1.0
<exists>
2
"TextTier"
"clicks"
0
1.0
1
0.5
"click"
"IntervalTier"
"phones"
0
1.0
1
0
1.0
"a"
"""
        track = parse_textgrid(text)
        assert len(track) == 1
        assert track.intervals[0].phoneme == "a"

    def test_bytes_with_bom(self):
        data = long_grid([(0, 0.1, "k")]).encode("utf-8-sig")
        assert len(parse_textgrid(data)) == 1

    def test_non_textgrid_rejected(self):
        with pytest.raises(SchemaError):
            parse_textgrid('File type = "ooTextFile"\nObject class = "Pitch"\n0\n1\n')


class TestRoundTrip:
    def test_write_then_reparse(self):
        track = AnnotationTrack(
            (
                PhonemeInterval("<sil>", 0.0, 0.05),
                PhonemeInterval("k", 0.05, 0.1),
                PhonemeInterval("a", 0.1, 0.5),
                PhonemeInterval("<br>", 0.5, 0.6),
            )
        )
        reparsed = parse_textgrid(track_to_textgrid(track))
        assert len(reparsed) == len(track)
        for a, b in zip(track.intervals, reparsed.intervals):
            assert a.phoneme == b.phoneme
            assert a.start == pytest.approx(b.start, abs=1e-6)
            assert a.end == pytest.approx(b.end, abs=1e-6)
