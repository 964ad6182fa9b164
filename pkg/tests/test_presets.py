import pytest

from ncp import presets
from ncp.codec import serialize
from ncp.model import ConflictForm, Perspective, is_valid_assignment


@pytest.mark.parametrize("name", presets.names())
def test_golden_file_matches_builder(name):
    assert serialize(presets.BUILDERS[name]()) == presets.golden_text(name)


@pytest.mark.parametrize("name", presets.names())
def test_golden_file_is_canonical_bytes(name):
    text = presets.golden_text(name)
    assert text.endswith("\n") and "\r" not in text
    assert presets.load(name) == presets.BUILDERS[name]()


def test_action_drama_assignment():
    a = presets.load("action-drama").assignment
    assert a[Perspective.MC] is ConflictForm.EXTERNAL_FRAMING
    assert a[Perspective.OS] is ConflictForm.EXTERNAL_PROCESSING
    assert a[Perspective.RS] is ConflictForm.INTERNAL_PROCESSING
    assert a[Perspective.CP] is ConflictForm.INTERNAL_FRAMING


@pytest.mark.parametrize(
    "name, mc",
    [("courtroom-internal", ConflictForm.INTERNAL_PROCESSING), ("courtroom-external", ConflictForm.EXTERNAL_PROCESSING)],
)
def test_courtroom_variants(name, mc):
    a = presets.load(name).assignment
    assert a[Perspective.OS] is ConflictForm.INTERNAL_FRAMING
    assert a[Perspective.MC] is mc
    assert is_valid_assignment(a)


def test_unknown_preset():
    with pytest.raises(KeyError):
        presets.golden_text("western")
