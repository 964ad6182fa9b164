"""Ready-made storyforms for common genre configurations.

Each preset exists twice: as a builder function here and as a frozen
``*.ncp.json`` golden file next to this module. The golden file is what
``ncp init`` writes; the tests check that the two agree byte for byte.
"""

from __future__ import annotations

import dataclasses
from importlib import resources

from ..model import (
    CENTERED,
    Alignment,
    ConflictForm,
    Dynamics,
    Judgment,
    Outcome,
    Perspective,
    PerspectiveAssignment,
    Quad,
    Resolve,
    Storyform,
    StorypointNode,
    diagonal_counterpart,
)

EF = ConflictForm.EXTERNAL_FRAMING
EP = ConflictForm.EXTERNAL_PROCESSING
IP = ConflictForm.INTERNAL_PROCESSING
IF = ConflictForm.INTERNAL_FRAMING

# Four signpost terms per form of conflict.
FORM_TERMS = {
    EF: ("societal rules", "status", "relationships", "fixed limitations"),
    EP: ("actions", "events", "visible changes", "physical challenges"),
    IP: ("psychological dysfunction", "identity struggles", "manipulative schemes", "distorted ways of thinking"),
    IF: ("fixed beliefs", "mindsets", "deep-seated psychological states", "pre-existing ideas"),
}

FILES = {
    "action-drama": "action_drama.ncp.json",
    "courtroom-internal": "courtroom_internal.ncp.json",
    "courtroom-external": "courtroom_external.ncp.json",
    "matrix-style": "matrix_style.ncp.json",
}


def _tree(root_term: str, form: ConflictForm, storytelling: str | None = None) -> StorypointNode:
    tl, tr, bl, br = (StorypointNode(t) for t in FORM_TERMS[form])
    return StorypointNode(root_term, storytelling=storytelling, quad=Quad(tl, tr, bl, br))


def _with_beats(s: Storyform) -> Storyform:
    from ..justification import justify

    return dataclasses.replace(s, beats=justify(s))


def action_drama() -> Storyform:
    assignment = PerspectiveAssignment({Perspective.MC: EF, Perspective.OS: EP, Perspective.RS: IP, Perspective.CP: IF})
    return _with_beats(
        Storyform(
            title="Action Drama",
            dynamics=Dynamics(Resolve.RELINQUISHED, Outcome.SUCCESS, Judgment.GOOD, Alignment.DOPAMINE),
            assignment=assignment,
            storypoints={
                Perspective.MC: _tree("the heir apparent", EF, storytelling="a stable hand with a borrowed sword"),
                Perspective.OS: _tree("the battle for the crown", EP),
                Perspective.RS: _tree("father/son dynamic", IP),
                Perspective.CP: _tree("a mentor", IF),
            },
            annotations={"perspectives.os": "the war is fought in the open"},
        )
    )


def matrix_style() -> Storyform:
    base = action_drama()
    return _with_beats(
        dataclasses.replace(
            base,
            title="Action Drama (Serotonin)",
            dynamics=Dynamics(Resolve.RELINQUISHED, Outcome.SUCCESS, Judgment.GOOD, Alignment.SEROTONIN, attunement=CENTERED),
            storypoints={**base.storypoints, Perspective.MC: _tree("the heir apparent", EF, storytelling="an office clerk who stops sleeping")},
            annotations={"dynamics.alignment": "the ending lands as calm acceptance"},
        )
    )


def _courtroom(title: str, mc: ConflictForm, mc_story: str) -> Storyform:
    assignment = PerspectiveAssignment(
        {Perspective.OS: IF, Perspective.RS: diagonal_counterpart(IF), Perspective.MC: mc, Perspective.CP: diagonal_counterpart(mc)}
    )
    return _with_beats(
        Storyform(
            title=title,
            dynamics=Dynamics(Resolve.MAINTAINED, Outcome.SUCCESS, Judgment.GOOD, Alignment.DOPAMINE),
            assignment=assignment,
            storypoints={
                Perspective.OS: _tree("a verdict everyone already believes", IF),
                Perspective.MC: _tree("rebuilding the night of the crime", mc, storytelling=mc_story),
                Perspective.CP: _tree("a witness who keeps quiet", assignment[Perspective.CP]),
                Perspective.RS: _tree("an uneasy alliance", assignment[Perspective.RS]),
            },
        )
    )


def courtroom_internal() -> Storyform:
    return _courtroom("Courtroom Drama (Internal Processing)", IP, "a defense lawyer doubting her client")


def courtroom_external() -> Storyform:
    return _courtroom("Courtroom Drama (External Processing)", EP, "a juror retracing the evidence")


BUILDERS = {
    "action-drama": action_drama,
    "courtroom-internal": courtroom_internal,
    "courtroom-external": courtroom_external,
    "matrix-style": matrix_style,
}


def names() -> list[str]:
    return list(FILES)


def golden_text(name: str) -> str:
    """Bytes of the shipped golden file for ``name``, decoded as UTF-8."""
    if name not in FILES:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(FILES)}")
    return resources.files(__package__).joinpath(FILES[name]).read_text(encoding="utf-8")


def load(name: str) -> Storyform:
    from ..codec import parse

    return parse(golden_text(name))
