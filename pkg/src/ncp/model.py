"""Domain types for storyforms and the quad geometry behind perspective assignment.

Every value here is immutable. Construction only checks field shape; a
storyform with a broken assignment or an incomplete tree is a legal value
and is judged separately by :mod:`ncp.validator`.
"""

from __future__ import annotations

import enum
import itertools
import json
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Optional

NCP_VERSION = "0.1.0"


class Perspective(enum.Enum):
    OBJECTIVE_STORY = "os"
    MAIN_CHARACTER = "mc"
    CATALYST_PROVOCATEUR = "cp"
    RELATIONSHIP_STORY = "rs"

    # short aliases
    OS = "os"
    MC = "mc"
    CP = "cp"
    RS = "rs"

    @property
    def label(self) -> str:
        return _PERSPECTIVE_LABELS[self]

    @property
    def code(self) -> str:
        return self.value.upper()


_PERSPECTIVE_LABELS = {
    Perspective.OS: "Objective Story",
    Perspective.MC: "Main Character",
    Perspective.CP: "Catalyst Provocateur",
    Perspective.RS: "Relationship Story",
}


class QuadPosition(enum.Enum):
    TL = "tl"
    TR = "tr"
    BL = "bl"
    BR = "br"

    @property
    def diagonal(self) -> QuadPosition:
        return _DIAGONAL[self]


_DIAGONAL = {
    QuadPosition.TL: QuadPosition.BR,
    QuadPosition.BR: QuadPosition.TL,
    QuadPosition.TR: QuadPosition.BL,
    QuadPosition.BL: QuadPosition.TR,
}


class ConflictForm(enum.Enum):
    """The four forms of conflict, declared in enumeration order."""

    EXTERNAL_FRAMING = "external_framing"
    EXTERNAL_PROCESSING = "external_processing"
    INTERNAL_PROCESSING = "internal_processing"
    INTERNAL_FRAMING = "internal_framing"

    @property
    def home(self) -> QuadPosition:
        """Position of this form in the canonical form quad."""
        return _HOME[self]

    @property
    def rank(self) -> int:
        return _FORM_ORDER.index(self)

    @property
    def label(self) -> str:
        return self.value.replace("_", " ").title()


_FORM_ORDER = tuple(ConflictForm)
_HOME = {
    ConflictForm.EXTERNAL_FRAMING: QuadPosition.TL,
    ConflictForm.EXTERNAL_PROCESSING: QuadPosition.TR,
    ConflictForm.INTERNAL_PROCESSING: QuadPosition.BL,
    ConflictForm.INTERNAL_FRAMING: QuadPosition.BR,
}
_AT_HOME = {pos: form for form, pos in _HOME.items()}


class Resolve(enum.Enum):
    MAINTAINED = "maintained"
    RELINQUISHED = "relinquished"


class Outcome(enum.Enum):
    SUCCESS = "success"
    FAILURE = "failure"


class Judgment(enum.Enum):
    GOOD = "good"
    BAD = "bad"


class Alignment(enum.Enum):
    DOPAMINE = "dopamine"
    SEROTONIN = "serotonin"


class Phase(enum.Enum):
    CHALLENGE_INTRODUCED = "challenge_introduced"
    REINFORCEMENT = "reinforcement"
    ESCALATION = "escalation"
    CRISIS = "crisis"
    RESOLUTION = "resolution"


class ResolutionKind(enum.Enum):
    HOLDS = "holds"
    RELINQUISHED = "relinquished"
    RELEASED = "released"


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


CENTERED = "Centered"


def _freeze(mapping: Mapping | None) -> Mapping:
    return MappingProxyType(dict(mapping or {}))


def _freeze_extras(mapping: Mapping | None) -> Mapping:
    # unknown fields are held as compact, key-sorted JSON text
    return MappingProxyType(
        {
            str(k): json.dumps(json.loads(v), ensure_ascii=False, sort_keys=True, separators=(",", ":"))
            for k, v in (mapping or {}).items()
        }
    )


def diagonal_counterpart(form: ConflictForm) -> ConflictForm:
    """Return the form sitting diagonally opposite ``form`` in the form quad."""
    return _AT_HOME[form.home.diagonal]


class PerspectiveAssignment(Mapping):
    """Perspective -> form mapping. May be partial or non-injective."""

    __slots__ = ("_forms",)

    def __init__(self, forms: Mapping[Perspective, ConflictForm] | None = None, **kw: ConflictForm):
        merged: dict[Perspective, ConflictForm] = {}
        for key, form in itertools.chain((forms or {}).items(), kw.items()):
            p = key if isinstance(key, Perspective) else Perspective(str(key).lower())
            if not isinstance(form, ConflictForm):
                raise TypeError(f"form for {p.value} must be a ConflictForm, got {form!r}")
            merged[p] = form
        object.__setattr__(self, "_forms", merged)

    def __setattr__(self, name, value):
        raise AttributeError("PerspectiveAssignment is immutable")

    def __getitem__(self, p: Perspective) -> ConflictForm:
        return self._forms[p]

    def __iter__(self) -> Iterator[Perspective]:
        return (p for p in Perspective if p in self._forms)

    def __len__(self) -> int:
        return len(self._forms)

    def __hash__(self) -> int:
        return hash(frozenset(self._forms.items()))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PerspectiveAssignment):
            return self._forms == other._forms
        if isinstance(other, Mapping):
            return self._forms == dict(other)
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"{p.value}={self._forms[p].value}" for p in self)
        return f"PerspectiveAssignment({inner})"

    @property
    def is_total(self) -> bool:
        return len(self._forms) == 4

    @property
    def is_bijective(self) -> bool:
        return self.is_total and len(set(self._forms.values())) == 4

    def replace(self, **changes: ConflictForm) -> PerspectiveAssignment:
        forms = dict(self._forms)
        forms.update({Perspective(k): v for k, v in changes.items()})
        return PerspectiveAssignment(forms)


def is_valid_assignment(a: Mapping[Perspective, ConflictForm]) -> bool:
    """True iff ``a`` is a bijection with MC/CP and OS/RS on opposite diagonals."""
    a = a if isinstance(a, PerspectiveAssignment) else PerspectiveAssignment(a)
    if not a.is_bijective:
        return False
    return (
        a[Perspective.CP] is diagonal_counterpart(a[Perspective.MC])
        and a[Perspective.RS] is diagonal_counterpart(a[Perspective.OS])
    )


def enumerate_valid_assignments() -> list[PerspectiveAssignment]:
    """All valid assignments, ordered by (form of OS, form of MC).

    The ordering is part of the public contract: assignment repair during
    recompilation breaks ties by position in this list.
    """
    out = []
    for os_form in ConflictForm:
        for mc_form in ConflictForm:
            if mc_form in (os_form, diagonal_counterpart(os_form)):
                continue
            out.append(
                PerspectiveAssignment(
                    {
                        Perspective.OS: os_form,
                        Perspective.MC: mc_form,
                        Perspective.CP: diagonal_counterpart(mc_form),
                        Perspective.RS: diagonal_counterpart(os_form),
                    }
                )
            )
    return out


@dataclass(frozen=True)
class Dynamics:
    resolve: Resolve
    outcome: Outcome
    judgment: Judgment
    alignment: Alignment
    attunement: Optional[str] = None
    extras: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "extras", _freeze_extras(self.extras))


@dataclass(frozen=True)
class Quad:
    tl: StorypointNode
    tr: StorypointNode
    bl: StorypointNode
    br: StorypointNode

    def __getitem__(self, pos: QuadPosition) -> StorypointNode:
        return getattr(self, pos.value)

    def items(self) -> Iterator[tuple[QuadPosition, StorypointNode]]:
        for pos in QuadPosition:
            yield pos, self[pos]


@dataclass(frozen=True)
class StorypointNode:
    """One storypoint. ``quad`` holds its four children, if it has any."""

    term: str
    storytelling: Optional[str] = None
    quad: Optional[Quad] = None
    extras: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "extras", _freeze_extras(self.extras))

    @property
    def height(self) -> int:
        """Number of quad levels below this node (0 for a leaf)."""
        if self.quad is None:
            return 0
        return 1 + max(child.height for _, child in self.quad.items())

    def find(self, positions) -> StorypointNode | None:
        node = self
        for pos in positions:
            if node.quad is None:
                return None
            node = node.quad[pos]
        return node

    def walk(self, prefix: tuple[QuadPosition, ...] = ()) -> Iterator[tuple[tuple[QuadPosition, ...], StorypointNode]]:
        """Yield ``(positions, node)`` pairs in pre-order, TL/TR/BL/BR."""
        yield prefix, self
        if self.quad is not None:
            for pos, child in self.quad.items():
                yield from child.walk(prefix + (pos,))


@dataclass(frozen=True)
class StorypointPath:
    perspective: Perspective
    positions: tuple[QuadPosition, ...]

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(self.positions))

    def __str__(self) -> str:
        return ".".join([self.perspective.value, *(p.value for p in self.positions)])

    @property
    def segments(self) -> tuple[str, ...]:
        return ("storypoints", self.perspective.value, *(p.value for p in self.positions))


@dataclass(frozen=True)
class Storybeat:
    index: int
    path: StorypointPath
    phase: Phase
    resolution_kind: Optional[ResolutionKind] = None
    storytelling: Optional[str] = None
    extras: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "extras", _freeze_extras(self.extras))

    @property
    def perspective(self) -> Perspective:
        return self.path.perspective

    @property
    def structure(self) -> tuple:
        """The fields produced by sequencing; storytelling and extras excluded."""
        return (self.index, self.path, self.phase, self.resolution_kind)


@dataclass(frozen=True)
class Storyform:
    dynamics: Dynamics
    assignment: PerspectiveAssignment = field(default_factory=PerspectiveAssignment)
    storypoints: Mapping[Perspective, StorypointNode] = field(default_factory=dict)
    beats: tuple[Storybeat, ...] = ()
    title: str = ""
    version: str = NCP_VERSION
    annotations: Mapping[str, str] = field(default_factory=dict)
    extras: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.assignment, PerspectiveAssignment):
            object.__setattr__(self, "assignment", PerspectiveAssignment(self.assignment))
        given = {Perspective(k) if not isinstance(k, Perspective) else k: v for k, v in self.storypoints.items()}
        trees = {p: given[p] for p in Perspective if p in given}
        object.__setattr__(self, "storypoints", MappingProxyType(trees))
        object.__setattr__(self, "beats", tuple(self.beats))
        object.__setattr__(self, "annotations", _freeze(self.annotations))
        object.__setattr__(self, "extras", _freeze_extras(self.extras))

    def resolve(self, path: StorypointPath) -> StorypointNode | None:
        root = self.storypoints.get(path.perspective)
        return None if root is None else root.find(path.positions)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    severity: Severity
    path: str
    message: str

    @property
    def sort_key(self) -> tuple[str, str, str]:
        return (self.code, self.path, self.message)

    def render(self) -> str:
        return "\t".join((self.code, self.severity.value, self.path, self.message))
