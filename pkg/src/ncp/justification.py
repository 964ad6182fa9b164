"""Justification: turning dynamics and storypoints into an ordered beat sequence.

The sequencer is deterministic and every dynamic has a visible effect:

* alignment picks the interleaving of perspectives (dopamine runs
  OS, MC, CP, RS; serotonin runs the reverse);
* resolve reverses the signpost order of MC and CP when relinquished,
  outcome reverses OS on failure, judgment reverses RS when bad;
* act k takes the k-th signpost of each perspective, and a signpost with
  its own quad is followed at once by its four sub-beats;
* acts one to three are challenge, reinforcement and escalation; act four is
  crisis, and the very last beat is the resolution.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterable

from .model import (
    CENTERED,
    Alignment,
    ConflictForm,
    Dynamics,
    Judgment,
    Outcome,
    Perspective,
    PerspectiveAssignment,
    Phase,
    QuadPosition,
    Resolve,
    ResolutionKind,
    Storybeat,
    Storyform,
    StorypointPath,
    enumerate_valid_assignments,
    is_valid_assignment,
)
from .paths import PathError, parse_path
from .validator import structural_diagnostics

ACT_PHASES = (Phase.CHALLENGE_INTRODUCED, Phase.REINFORCEMENT, Phase.ESCALATION, Phase.CRISIS)
TRAVERSAL = (QuadPosition.TL, QuadPosition.TR, QuadPosition.BL, QuadPosition.BR)


class StructureError(ValueError):
    """The storyform is too broken to sequence."""

    def __init__(self, diagnostics):
        self.diagnostics = tuple(diagnostics)
        summary = "; ".join(f"{d.code} {d.path}" for d in self.diagnostics)
        super().__init__(f"storyform structure blocks justification: {summary}")


def perspective_order(dynamics: Dynamics) -> tuple[Perspective, ...]:
    order = (Perspective.OS, Perspective.MC, Perspective.CP, Perspective.RS)
    if dynamics.alignment is Alignment.SEROTONIN:
        return order[::-1]
    return order


def signpost_order(perspective: Perspective, dynamics: Dynamics) -> tuple[QuadPosition, ...]:
    if perspective in (Perspective.MC, Perspective.CP):
        flipped = dynamics.resolve is Resolve.RELINQUISHED
    elif perspective is Perspective.OS:
        flipped = dynamics.outcome is Outcome.FAILURE
    else:
        flipped = dynamics.judgment is Judgment.BAD
    return TRAVERSAL[::-1] if flipped else TRAVERSAL


def resolution_kind(dynamics: Dynamics) -> ResolutionKind:
    if dynamics.resolve is Resolve.MAINTAINED:
        return ResolutionKind.HOLDS
    if dynamics.alignment is Alignment.SEROTONIN:
        return ResolutionKind.RELEASED
    return ResolutionKind.RELINQUISHED


def _sequence_paths(s: Storyform) -> list[tuple[int, StorypointPath]]:
    """(act number, path) for every beat, in temporal order."""
    d = s.dynamics
    out = []
    for act in range(4):
        for p in perspective_order(d):
            root = s.storypoints.get(p)
            if root is None or root.quad is None:
                continue
            order = signpost_order(p, d)
            pos = order[act]
            out.append((act, StorypointPath(p, (pos,))))
            child = root.quad[pos]
            if child.quad is not None:
                out.extend((act, StorypointPath(p, (pos, sub))) for sub in order)
    return out


def justify(s: Storyform) -> tuple[Storybeat, ...]:
    """The canonical storybeat sequence for ``s``.

    Raises :class:`StructureError` if the assignment or the storypoint trees
    are broken. Existing beats on ``s`` are ignored.
    """
    blocking = structural_diagnostics(s)
    if blocking:
        raise StructureError(blocking)
    paths = _sequence_paths(s)
    beats = []
    last = len(paths) - 1
    for i, (act, path) in enumerate(paths):
        if i == last:
            beats.append(Storybeat(i, path, Phase.RESOLUTION, resolution_kind(s.dynamics)))
        else:
            beats.append(Storybeat(i, path, ACT_PHASES[act]))
    return tuple(beats)


# ---------------------------------------------------------------------------
# recompilation
# ---------------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Deviation:
    """Structural edits as ``(path, value)`` pairs.

    Paths may address ``dynamics.<field>``, ``perspectives.<p>`` or
    ``storypoints.<p>[.<pos>[.<pos>]].term``. Values are plain text: enum
    names in lower snake case, or the new term. An empty attunement clears it.
    """

    changes: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "changes", tuple((str(p), str(v)) for p, v in self.changes))

    @classmethod
    def parse(cls, items: Iterable[str]) -> Deviation:
        """Build from ``PATH=VALUE`` strings."""
        changes = []
        for item in items:
            path, sep, value = item.partition("=")
            if not sep:
                raise PathError(f"expected PATH=VALUE, got {item!r}")
            changes.append((path.strip(), value))
        return cls(tuple(changes))


def _enum_value(cls, text: str, path: str):
    try:
        return cls(text.strip().lower())
    except ValueError:
        allowed = ", ".join(m.value for m in cls)
        raise ValueError(f"{path}: {text!r} is not one of: {allowed}") from None


def _replace_term(node, positions, term):
    if not positions:
        return dataclasses.replace(node, term=term)
    head, rest = positions[0], positions[1:]
    quad = dataclasses.replace(node.quad, **{head.value: _replace_term(node.quad[head], rest, term)})
    return dataclasses.replace(node, quad=quad)


def apply_deviation(s: Storyform, d: Deviation) -> Storyform:
    dynamics = s.dynamics
    forms = dict(s.assignment)
    trees = dict(s.storypoints)
    for text, value in d.changes:
        segs = parse_path(text)
        head = segs[0]
        if head == "dynamics" and len(segs) == 2:
            field = segs[1]
            kinds = {"resolve": Resolve, "outcome": Outcome, "judgment": Judgment, "alignment": Alignment}
            if field in kinds:
                dynamics = dataclasses.replace(dynamics, **{field: _enum_value(kinds[field], value, text)})
            elif field == "attunement":
                dynamics = dataclasses.replace(dynamics, attunement=value.strip() or None)
            else:
                raise PathError(f"{text}: not a dynamic")
        elif head == "perspectives" and len(segs) == 2:
            try:
                p = Perspective(segs[1])
            except ValueError:
                raise PathError(f"{text}: unknown perspective") from None
            forms[p] = _enum_value(ConflictForm, value, text)
        elif head == "storypoints" and len(segs) >= 3 and segs[-1] == "term":
            try:
                p = Perspective(segs[1])
                positions = tuple(QuadPosition(x) for x in segs[2:-1])
            except ValueError:
                raise PathError(f"{text}: not a storypoint term") from None
            root = trees.get(p)
            if root is None or root.find(positions) is None:
                raise PathError(f"{text}: no such storypoint")
            if not value.strip():
                raise ValueError(f"{text}: storypoint terms cannot be empty")
            trees[p] = _replace_term(root, positions, value)
        else:
            raise PathError(f"{text}: deviations may only change dynamics, perspectives or storypoint terms")
    return dataclasses.replace(s, dynamics=dynamics, assignment=PerspectiveAssignment(forms), storypoints=trees)


def repair_assignment(a: PerspectiveAssignment) -> PerspectiveAssignment:
    """Closest valid assignment: fewest perspectives moved, ties by enumeration order."""
    if is_valid_assignment(a):
        return a

    def moved(candidate):
        return sum(1 for p in Perspective if a.get(p) is not candidate[p])

    return min(enumerate_valid_assignments(), key=moved)


def _repair_dynamics(d: Dynamics) -> Dynamics:
    if (
        d.alignment is Alignment.SEROTONIN
        and d.outcome is Outcome.SUCCESS
        and d.judgment is Judgment.GOOD
        and d.attunement != CENTERED
    ):
        return dataclasses.replace(d, attunement=CENTERED)
    return d


def recompile(s: Storyform, cut_index: int, d: Deviation = Deviation()) -> Storyform:
    """Apply a deviation and regenerate the beats not yet experienced.

    Beats before ``cut_index`` are kept verbatim. The rest come from
    justifying the deviated (and, if needed, repaired) storyform, minus any
    storypoint already visited in the kept prefix, renumbered from
    ``cut_index``.
    """
    if isinstance(cut_index, bool) or not isinstance(cut_index, int):
        raise TypeError("cut_index must be an integer")
    if not 0 <= cut_index <= len(s.beats):
        raise IndexError(f"cut_index {cut_index} outside 0..{len(s.beats)}")
    deviated = apply_deviation(s, d)
    repaired = dataclasses.replace(
        deviated,
        assignment=repair_assignment(deviated.assignment),
        dynamics=_repair_dynamics(deviated.dynamics),
    )
    prefix = s.beats[:cut_index]
    seen = {b.path for b in prefix}
    suffix = []
    for beat in justify(repaired):
        if beat.path in seen:
            continue
        suffix.append(dataclasses.replace(beat, index=cut_index + len(suffix)))
    return dataclasses.replace(repaired, beats=prefix + tuple(suffix))
