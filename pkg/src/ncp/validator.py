"""Validity judgment for storyforms, reported as coded diagnostics.

Codes are a stable public contract:

======  =======  ==========================================================
code    level    condition
======  =======  ==========================================================
NCP001  error    assignment is not total or not bijective
NCP002  error    CP's form is not diagonally opposite MC's form
NCP003  error    RS's form is not diagonally opposite OS's form
NCP010  error    serotonin + success + good without attunement "Centered"
NCP011  warning  attunement present under dopamine alignment
NCP020  error    a storybeat path does not resolve to a storypoint
NCP021  error    storybeat indices are not exactly 0..n-1
NCP022  error    resolution_kind on a non-resolution beat, or missing on one
NCP023  warning  storybeats differ from the sequence justification produces
NCP030  error    empty storypoint term, or quads nested deeper than two
NCP040  warning  a perspective has no storypoint tree
======  =======  ==========================================================
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .model import (
    CENTERED,
    Alignment,
    Diagnostic,
    Judgment,
    Outcome,
    Perspective,
    Phase,
    Severity,
    Storyform,
    diagonal_counterpart,
)
from .paths import format_path

MAX_DEPTH = 2
STRUCTURAL_CODES = frozenset({"NCP001", "NCP002", "NCP003", "NCP030"})


@dataclass(frozen=True)
class ValidationReport:
    diagnostics: tuple[Diagnostic, ...]

    @property
    def valid(self) -> bool:
        return not self.errors

    @property
    def errors(self) -> tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity is Severity.ERROR)

    @property
    def warnings(self) -> tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity is Severity.WARNING)

    def codes(self) -> set[str]:
        return {d.code for d in self.diagnostics}


def _error(code, path, message):
    return Diagnostic(code, Severity.ERROR, path, message)


def _warning(code, path, message):
    return Diagnostic(code, Severity.WARNING, path, message)


def check_assignment(s: Storyform) -> list[Diagnostic]:
    a = s.assignment
    out = []
    for p in Perspective:
        if p not in a:
            out.append(_error("NCP001", f"perspectives.{p.value}", f"{p.label} has no form of conflict"))
    counts = Counter(a.values())
    for form, n in counts.items():
        if n > 1:
            holders = ", ".join(p.value for p in a if a[p] is form)
            out.append(_error("NCP001", "perspectives", f"{form.value} is held by more than one perspective ({holders})"))

    pairs = (
        ("NCP002", Perspective.MC, Perspective.CP),
        ("NCP003", Perspective.OS, Perspective.RS),
    )
    for code, anchor, opposite in pairs:
        if anchor in a and opposite in a and a[opposite] is not diagonal_counterpart(a[anchor]):
            out.append(
                _error(
                    code,
                    f"perspectives.{opposite.value}",
                    f"{opposite.label} is {a[opposite].value}, expected {diagonal_counterpart(a[anchor]).value} "
                    f"(opposite {anchor.label} at {a[anchor].value})",
                )
            )
    return out


def check_dynamics(s: Storyform) -> list[Diagnostic]:
    d = s.dynamics
    out = []
    if (
        d.alignment is Alignment.SEROTONIN
        and d.outcome is Outcome.SUCCESS
        and d.judgment is Judgment.GOOD
        and d.attunement != CENTERED
    ):
        found = "absent" if d.attunement is None else repr(d.attunement)
        out.append(
            _error("NCP010", "dynamics.attunement", f"serotonin with success and good requires attunement {CENTERED!r}, found {found}")
        )
    if d.alignment is Alignment.DOPAMINE and d.attunement is not None:
        out.append(_warning("NCP011", "dynamics.attunement", "attunement is only meaningful under serotonin alignment"))
    return out


def check_storypoints(s: Storyform) -> list[Diagnostic]:
    out = []
    for p in Perspective:
        root = s.storypoints.get(p)
        if root is None:
            out.append(_warning("NCP040", f"storypoints.{p.value}", f"{p.label} has no storypoint tree"))
            continue
        for positions, node in root.walk():
            segments = ("storypoints", p.value, *(q.value for q in positions))
            if not node.term.strip():
                out.append(_error("NCP030", format_path(segments + ("term",)), "storypoint term is empty"))
            if len(positions) == MAX_DEPTH and node.quad is not None:
                out.append(_error("NCP030", format_path(segments), f"quads nested deeper than {MAX_DEPTH} levels"))
    return out


def check_beats(s: Storyform) -> list[Diagnostic]:
    out = []
    if not s.beats:
        return out
    for i, beat in enumerate(s.beats):
        if s.resolve(beat.path) is None:
            out.append(_error("NCP020", f"storybeats[{i}].path", f"{beat.path} does not resolve to a storypoint"))
        is_final = beat.phase is Phase.RESOLUTION
        if is_final and beat.resolution_kind is None:
            out.append(_error("NCP022", f"storybeats[{i}].resolution_kind", "resolution beat has no resolution_kind"))
        elif not is_final and beat.resolution_kind is not None:
            out.append(_error("NCP022", f"storybeats[{i}].resolution_kind", f"resolution_kind on a {beat.phase.value} beat"))
    indices = sorted(b.index for b in s.beats)
    if indices != list(range(len(s.beats))):
        out.append(_error("NCP021", "storybeats", f"beat indices must be 0..{len(s.beats) - 1} without gaps or duplicates"))
    return out


def check_staleness(s: Storyform, structural: list[Diagnostic]) -> list[Diagnostic]:
    if not s.beats or any(d.code in STRUCTURAL_CODES for d in structural):
        return []
    from .justification import justify

    expected = [b.structure for b in justify(s)]
    if [b.structure for b in s.beats] != expected:
        return [_warning("NCP023", "storybeats", "storybeats differ from the justified sequence; recompile to refresh")]
    return []


def structural_diagnostics(s: Storyform) -> list[Diagnostic]:
    """Diagnostics that block justification (NCP001-NCP003, NCP030)."""
    found = check_assignment(s) + check_storypoints(s)
    return sorted((d for d in found if d.code in STRUCTURAL_CODES), key=lambda d: d.sort_key)


def validate(s: Storyform) -> ValidationReport:
    found = check_assignment(s) + check_dynamics(s) + check_storypoints(s) + check_beats(s)
    found += check_staleness(s, found)
    return ValidationReport(tuple(sorted(found, key=lambda d: d.sort_key)))
