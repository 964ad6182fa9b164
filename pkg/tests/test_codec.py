import dataclasses
import json
import random
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncp import presets
from ncp.codec import (
    DocumentSyntaxError,
    SchemaError,
    VersionError,
    VersionWarning,
    canonicalize,
    export_markdown,
    parse,
    serialize,
    to_document,
)
from ncp.model import ConflictForm, Perspective, is_valid_assignment

from helpers import random_storyform, shuffle_keys

MINIMAL = {
    "ncp_version": "0.1.0",
    "dynamics": {"resolve": "maintained", "outcome": "success", "judgment": "good", "alignment": "dopamine"},
}


def doc(**overrides):
    d = json.loads(json.dumps(MINIMAL))
    d.update(overrides)
    return json.dumps(d)


class TestParse:
    def test_minimal_document(self):
        s = parse(doc())
        assert s.title == ""
        assert len(s.assignment) == 0
        assert s.beats == ()

    def test_action_drama_preset(self):
        s = parse(presets.golden_text("action-drama"))
        assert is_valid_assignment(s.assignment)
        assert s.assignment[Perspective.MC] is ConflictForm.EXTERNAL_FRAMING

    def test_broken_assignment_still_parses(self):
        s = parse(doc(perspectives={"mc": "external_framing", "cp": "external_framing", "os": "internal_processing"}))
        assert s.assignment[Perspective.CP] is ConflictForm.EXTERNAL_FRAMING
        assert not is_valid_assignment(s.assignment)

    def test_accepts_bytes(self):
        assert parse(doc(title="Ünïcode").encode("utf-8")).title == "Ünïcode"

    def test_unknown_fields_survive(self):
        text = doc(x_engine={"b": [1, 2], "a": None}, dynamics={**MINIMAL["dynamics"], "tempo": 3})
        out = json.loads(serialize(parse(text)))
        assert out["x_engine"] == {"a": None, "b": [1, 2]}
        assert out["dynamics"]["tempo"] == 3

    def test_null_optional_fields_are_absent(self):
        s = parse(doc(storybeats=None, annotations=None, perspectives={"mc": None}))
        assert s.beats == () and not s.annotations and "mc" not in json.loads(serialize(s))["perspectives"]


class TestParseErrors:
    def test_syntax_error_reports_position(self):
        with pytest.raises(DocumentSyntaxError) as exc:
            parse('{\n  "ncp_version": "0.1.0",\n  oops\n}')
        assert exc.value.line == 3

    def test_invalid_utf8(self):
        with pytest.raises(DocumentSyntaxError):
            parse(b'{"title": "\xff"}')

    def test_duplicate_keys_rejected(self):
        with pytest.raises(DocumentSyntaxError):
            parse('{"title": "a", "title": "b"}')

    @pytest.mark.parametrize("scalar", ["1.5", "1e3", "NaN", "Infinity"])
    def test_no_floats(self, scalar):
        with pytest.raises(DocumentSyntaxError):
            parse(doc()[:-1] + f', "x": {scalar}}}')

    @pytest.mark.parametrize(
        "overrides, path",
        [
            ({"perspectives": {"mc": 5}}, "perspectives.mc"),
            ({"perspectives": {"mc": "sideways"}}, "perspectives.mc"),
            ({"perspectives": {"zz": "external_framing"}}, "perspectives"),
            ({"storypoints": {"os": {"storytelling": "x"}}}, "storypoints.os"),
            ({"storypoints": {"os": {"term": "a", "quad": {"tl": {"term": "b"}}}}}, "storypoints.os.quad"),
            ({"storypoints": {"os": {"term": "a", "tl": {"term": "b"}}}}, "storypoints.os"),
            ({"storybeats": [{"index": -1, "perspective": "os", "path": ["tl"], "phase": "crisis"}]}, "storybeats[0].index"),
            ({"storybeats": [{"index": 0, "perspective": "os", "path": [], "phase": "crisis"}]}, "storybeats[0].path"),
            ({"storybeats": [{"index": True, "perspective": "os", "path": ["tl"], "phase": "crisis"}]}, "storybeats[0].index"),
            ({"dynamics": {"resolve": "maintained"}}, "dynamics"),
            ({"title": 7}, "title"),
            ({"annotations": {"k": 1}}, 'annotations.k'),
        ],
    )
    def test_schema_errors_carry_paths(self, overrides, path):
        with pytest.raises(SchemaError) as exc:
            parse(doc(**overrides))
        assert exc.value.path == path

    def test_missing_version(self):
        with pytest.raises(SchemaError):
            parse(json.dumps({"dynamics": MINIMAL["dynamics"]}))

    @pytest.mark.parametrize("version", ["1.0.0", "2.1.0", "zero"])
    def test_major_mismatch_rejected(self, version):
        with pytest.raises(VersionError):
            parse(doc(ncp_version=version))

    def test_minor_mismatch_warns(self):
        with pytest.warns(VersionWarning):
            s = parse(doc(ncp_version="0.2.0"))
        assert s.version == "0.2.0"

    def test_patch_difference_is_silent(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            parse(doc(ncp_version="0.1.7"))


class TestCanonicalForm:
    def test_layout(self):
        text = serialize(parse(doc(title="T")))
        assert text.endswith("}\n") and "\r" not in text
        assert text.splitlines()[1].startswith('  "')
        keys = list(json.loads(text))
        assert keys == sorted(keys)

    def test_non_ascii_written_as_utf8(self):
        assert "Ünïcode" in serialize(parse(doc(title="Ünïcode")))

    def test_whitespace_insensitive(self):
        compact = json.dumps(json.loads(doc(title="x")), separators=(",", ":"))
        spaced = json.dumps(json.loads(doc(title="x")), indent=7).replace("\n", "\r\n")
        assert canonicalize(compact) == canonicalize(spaced)

    def test_idempotent_on_presets(self):
        for name in presets.names():
            text = presets.golden_text(name)
            assert canonicalize(text) == text
            assert canonicalize(canonicalize(text)) == canonicalize(text)

    def test_repeated_serialization_identical(self):
        s = presets.action_drama()
        assert serialize(s) == serialize(s)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_round_trip_property(seed):
    rng = random.Random(seed)
    s = random_storyform(rng)
    text = serialize(s)
    assert parse(text) == s
    assert canonicalize(text) == text
    shuffled = json.dumps(shuffle_keys(to_document(s), rng), indent=rng.choice([None, 1, 4]))
    assert canonicalize(shuffled) == text


class TestMarkdown:
    def test_action_drama_line(self):
        md = export_markdown(presets.action_drama())
        assert any("Main Character" in line and "External Framing" in line for line in md.splitlines())
        assert "## Storybeats" in md

    def test_beats_section_omitted_without_beats(self):
        s = parse(doc(storypoints={"os": {"term": "a"}}))
        md = export_markdown(s)
        assert "Storybeats" not in md
        assert "_No storypoints._" in md

    def test_deterministic(self):
        s = presets.courtroom_internal()
        assert export_markdown(s) == export_markdown(s)

    def test_table_cells_escape_pipes(self):
        s = presets.action_drama()
        s = dataclasses.replace(s, dynamics=dataclasses.replace(s.dynamics, attunement="a|b"))
        assert "a\\|b" in export_markdown(s)
