import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncp.paths import PathError, format_path, parse_path


@pytest.mark.parametrize(
    "segments, text",
    [
        (("dynamics", "resolve"), "dynamics.resolve"),
        (("storypoints", "mc", "tl", "term"), "storypoints.mc.tl.term"),
        (("storybeats", 3), "storybeats[3]"),
        (("annotations", "storypoints.os.tr"), 'annotations["storypoints.os.tr"]'),
        (("x-platform",), '["x-platform"]'),
    ],
)
def test_format_and_parse(segments, text):
    assert format_path(segments) == text
    assert parse_path(text) == segments


@pytest.mark.parametrize("bad", ["", ".a", "a..b", "a[", "a[-1]", "a[01]", 'a["x"', "a b", "a[x]"])
def test_malformed_paths(bad):
    with pytest.raises(PathError):
        parse_path(bad)


segment = st.one_of(st.integers(min_value=0, max_value=10_000), st.text(min_size=1, max_size=12))


@given(st.lists(segment, min_size=1, max_size=6))
def test_round_trip(segments):
    assert parse_path(format_path(segments)) == tuple(segments)
