"""Reading, writing and canonicalizing NCP storyform documents.

Documents are JSON text. The canonical form has sorted keys, two-space
indentation, LF line endings and a trailing newline. Parsing checks shape
only: a document whose assignment or dynamics make no narrative sense still
parses, and unknown fields on records are carried through unchanged.
"""

from __future__ import annotations

import json
import re
import warnings
from collections.abc import Mapping
from typing import Any

from .model import (
    NCP_VERSION,
    Alignment,
    ConflictForm,
    Dynamics,
    Judgment,
    Outcome,
    Perspective,
    PerspectiveAssignment,
    Phase,
    Quad,
    QuadPosition,
    Resolve,
    ResolutionKind,
    Storybeat,
    Storyform,
    StorypointNode,
    StorypointPath,
)
from .paths import format_path

__all__ = [
    "ParseError",
    "DocumentSyntaxError",
    "SchemaError",
    "VersionError",
    "VersionWarning",
    "parse",
    "serialize",
    "canonicalize",
    "export_markdown",
    "to_document",
    "from_document",
    "canonical_json",
]

_ROOT_FIELDS = ("ncp_version", "title", "dynamics", "perspectives", "storypoints", "storybeats", "annotations")
_DYNAMICS_FIELDS = ("resolve", "outcome", "judgment", "alignment", "attunement")
_NODE_FIELDS = ("term", "storytelling", "quad")
_BEAT_FIELDS = ("index", "perspective", "path", "phase", "resolution_kind", "storytelling")
_RESERVED_NODE_KEYS = frozenset(p.value for p in QuadPosition)
_VERSION_RE = re.compile(r"(0|[1-9][0-9]*)\.(0|[1-9][0-9]*)\.(0|[1-9][0-9]*)(?:[-+][0-9A-Za-z.+-]*)?")


class ParseError(ValueError):
    """Base class for documents that cannot be read as a storyform."""


class DocumentSyntaxError(ParseError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


class SchemaError(ParseError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class VersionError(ParseError):
    pass


class VersionWarning(UserWarning):
    pass


# ---------------------------------------------------------------------------
# JSON layer
# ---------------------------------------------------------------------------


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise DocumentSyntaxError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _reject_float(text):
    raise DocumentSyntaxError(f"floating-point scalar {text} is not permitted")


def _loads(text: str) -> Any:
    try:
        return json.loads(
            text,
            object_pairs_hook=_no_duplicates,
            parse_float=_reject_float,
            parse_constant=_reject_float,
        )
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, exc.lineno, exc.colno) from None


def canonical_json(value: Any) -> str:
    """Compact, key-sorted JSON used to compare and store opaque values."""
    return json.dumps(value, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------------------
# document <-> Storyform
# ---------------------------------------------------------------------------


def _expect(value, kind, path, what):
    if kind is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    else:
        ok = isinstance(value, kind)
    if not ok:
        raise SchemaError(format_path(path), f"expected {what}, got {type(value).__name__}")
    return value


def _enum(cls, value, path):
    _expect(value, str, path, "string")
    try:
        return cls(value)
    except ValueError:
        allowed = ", ".join(m.value for m in cls)
        raise SchemaError(format_path(path), f"{value!r} is not one of: {allowed}") from None


def _opt_str(obj, key, path):
    value = obj.get(key)
    if value is None:
        return None
    return _expect(value, str, path + (key,), "string")


def _extras(obj: Mapping, known, path) -> dict[str, str]:
    return {k: canonical_json(v) for k, v in obj.items() if k not in known}


def _check_version(version: str) -> None:
    m = _VERSION_RE.fullmatch(version)
    if not m:
        raise VersionError(f"unreadable ncp_version {version!r}")
    major, minor = int(m.group(1)), int(m.group(2))
    ours_major, ours_minor = (int(x) for x in NCP_VERSION.split(".")[:2])
    if major != ours_major:
        raise VersionError(f"ncp_version {version} is not supported (major version {ours_major} required)")
    if minor != ours_minor:
        warnings.warn(
            f"ncp_version {version} differs in minor version from {NCP_VERSION}",
            VersionWarning,
            stacklevel=3,
        )


def _node_from(obj, path) -> StorypointNode:
    _expect(obj, dict, path, "object")
    if "term" not in obj:
        raise SchemaError(format_path(path), "missing required field 'term'")
    reserved = sorted(_RESERVED_NODE_KEYS.intersection(obj))
    if reserved:
        raise SchemaError(format_path(path), f"quad positions belong under 'quad', found {reserved[0]!r}")
    term = _expect(obj["term"], str, path + ("term",), "string")
    quad = None
    if obj.get("quad") is not None:
        raw = _expect(obj["quad"], dict, path + ("quad",), "object")
        keys = set(raw)
        wanted = {p.value for p in QuadPosition}
        if keys != wanted:
            missing = sorted(wanted - keys)
            extra = sorted(keys - wanted)
            detail = f"missing {missing}" if missing else f"unexpected {extra}"
            raise SchemaError(format_path(path + ("quad",)), f"quad needs exactly tl, tr, bl, br ({detail})")
        quad = Quad(**{p.value: _node_from(raw[p.value], path + ("quad", p.value)) for p in QuadPosition})
    return StorypointNode(
        term=term,
        storytelling=_opt_str(obj, "storytelling", path),
        quad=quad,
        extras=_extras(obj, _NODE_FIELDS, path),
    )


def _beat_from(obj, path) -> Storybeat:
    _expect(obj, dict, path, "object")
    for key in ("index", "perspective", "path", "phase"):
        if key not in obj:
            raise SchemaError(format_path(path), f"missing required field {key!r}")
    index = _expect(obj["index"], int, path + ("index",), "integer")
    if index < 0:
        raise SchemaError(format_path(path + ("index",)), "index must be non-negative")
    perspective = _enum(Perspective, obj["perspective"], path + ("perspective",))
    raw_positions = _expect(obj["path"], list, path + ("path",), "array")
    if not 1 <= len(raw_positions) <= 2:
        raise SchemaError(format_path(path + ("path",)), "path must hold 1 or 2 quad positions")
    positions = tuple(_enum(QuadPosition, p, path + ("path", i)) for i, p in enumerate(raw_positions))
    kind = obj.get("resolution_kind")
    return Storybeat(
        index=index,
        path=StorypointPath(perspective, positions),
        phase=_enum(Phase, obj["phase"], path + ("phase",)),
        resolution_kind=None if kind is None else _enum(ResolutionKind, kind, path + ("resolution_kind",)),
        storytelling=_opt_str(obj, "storytelling", path),
        extras=_extras(obj, _BEAT_FIELDS, path),
    )


def from_document(doc: Any) -> Storyform:
    """Build a storyform from an already-decoded JSON document."""
    _expect(doc, dict, (), "object at document root")
    if "ncp_version" not in doc:
        raise SchemaError("", "missing required field 'ncp_version'")
    version = _expect(doc["ncp_version"], str, ("ncp_version",), "string")
    _check_version(version)
    if "dynamics" not in doc:
        raise SchemaError("", "missing required field 'dynamics'")

    raw = _expect(doc["dynamics"], dict, ("dynamics",), "object")
    for key in _DYNAMICS_FIELDS[:4]:
        if key not in raw:
            raise SchemaError("dynamics", f"missing required field {key!r}")
    dynamics = Dynamics(
        resolve=_enum(Resolve, raw["resolve"], ("dynamics", "resolve")),
        outcome=_enum(Outcome, raw["outcome"], ("dynamics", "outcome")),
        judgment=_enum(Judgment, raw["judgment"], ("dynamics", "judgment")),
        alignment=_enum(Alignment, raw["alignment"], ("dynamics", "alignment")),
        attunement=_opt_str(raw, "attunement", ("dynamics",)),
        extras=_extras(raw, _DYNAMICS_FIELDS, ("dynamics",)),
    )

    forms = {}
    raw = doc.get("perspectives") or {}
    _expect(raw, dict, ("perspectives",), "object")
    for key, value in raw.items():
        p = _enum(Perspective, key, ("perspectives",))
        if value is not None:
            forms[p] = _enum(ConflictForm, value, ("perspectives", key))

    trees = {}
    raw = doc.get("storypoints") or {}
    _expect(raw, dict, ("storypoints",), "object")
    for key, value in raw.items():
        p = _enum(Perspective, key, ("storypoints",))
        if value is not None:
            trees[p] = _node_from(value, ("storypoints", key))

    raw = doc.get("storybeats") or []
    _expect(raw, list, ("storybeats",), "array")
    beats = tuple(_beat_from(b, ("storybeats", i)) for i, b in enumerate(raw))

    annotations = {}
    raw = doc.get("annotations") or {}
    _expect(raw, dict, ("annotations",), "object")
    for key, value in raw.items():
        annotations[key] = _expect(value, str, ("annotations", key), "string")

    title = doc.get("title")
    return Storyform(
        version=version,
        title="" if title is None else _expect(title, str, ("title",), "string"),
        dynamics=dynamics,
        assignment=PerspectiveAssignment(forms),
        storypoints=trees,
        beats=beats,
        annotations=annotations,
        extras=_extras(doc, _ROOT_FIELDS, ()),
    )


def _put_extras(out: dict, extras: Mapping[str, str]) -> dict:
    for key, text in extras.items():
        out[key] = _loads(text)
    return out


def _node_doc(node: StorypointNode) -> dict:
    out: dict[str, Any] = {"term": node.term}
    if node.storytelling is not None:
        out["storytelling"] = node.storytelling
    if node.quad is not None:
        out["quad"] = {pos.value: _node_doc(child) for pos, child in node.quad.items()}
    return _put_extras(out, node.extras)


def _beat_doc(beat: Storybeat) -> dict:
    out: dict[str, Any] = {
        "index": beat.index,
        "perspective": beat.perspective.value,
        "path": [p.value for p in beat.path.positions],
        "phase": beat.phase.value,
    }
    if beat.resolution_kind is not None:
        out["resolution_kind"] = beat.resolution_kind.value
    if beat.storytelling is not None:
        out["storytelling"] = beat.storytelling
    return _put_extras(out, beat.extras)


def to_document(s: Storyform) -> dict:
    """The JSON document tree for ``s`` (the inverse of :func:`from_document`)."""
    d = s.dynamics
    dynamics: dict[str, Any] = {
        "resolve": d.resolve.value,
        "outcome": d.outcome.value,
        "judgment": d.judgment.value,
        "alignment": d.alignment.value,
    }
    if d.attunement is not None:
        dynamics["attunement"] = d.attunement
    out: dict[str, Any] = {
        "ncp_version": s.version,
        "title": s.title,
        "dynamics": _put_extras(dynamics, d.extras),
        "perspectives": {p.value: f.value for p, f in s.assignment.items()},
        "storypoints": {p.value: _node_doc(n) for p, n in s.storypoints.items()},
        "annotations": dict(s.annotations),
    }
    if s.beats:
        out["storybeats"] = [_beat_doc(b) for b in s.beats]
    return _put_extras(out, s.extras)


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------


def parse(doc: str | bytes) -> Storyform:
    if isinstance(doc, (bytes, bytearray)):
        try:
            doc = bytes(doc).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise DocumentSyntaxError(f"invalid UTF-8 at byte {exc.start}") from None
    return from_document(_loads(doc))


def serialize(s: Storyform) -> str:
    return json.dumps(to_document(s), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def canonicalize(doc: str | bytes) -> str:
    return serialize(parse(doc))


# ---------------------------------------------------------------------------
# markdown outline
# ---------------------------------------------------------------------------


def _cell(text: str | None) -> str:
    if not text:
        return ""
    return text.replace("\\", "\\\\").replace("|", "\\|").replace("\n", " ")


def _tree_lines(node: StorypointNode, label: str, depth: int) -> list[str]:
    line = "  " * depth + f"- {label}**{node.term or '(empty)'}**"
    if node.storytelling:
        line += f": {node.storytelling}"
    lines = [line.replace("\n", " ")]
    if node.quad is not None:
        for pos, child in node.quad.items():
            lines.extend(_tree_lines(child, f"{pos.name} ", depth + 1))
    return lines


def export_markdown(s: Storyform) -> str:
    """Human-readable outline of a storyform."""
    d = s.dynamics
    out = [f"# {s.title or 'Untitled storyform'}", "", f"NCP version {s.version}", ""]
    out += ["## Dynamics", "", "| Dynamic | Value |", "| --- | --- |"]
    out.append(f"| Resolve | {d.resolve.name.title()} |")
    out.append(f"| Outcome | {d.outcome.name.title()} |")
    out.append(f"| Judgment | {d.judgment.name.title()} |")
    out.append(f"| Narrative Alignment | {d.alignment.name.title()} |")
    if d.attunement is not None:
        out.append(f"| Attunement | {_cell(d.attunement)} |")
    out.append("")

    for p in Perspective:
        form = s.assignment.get(p)
        out.append(f"## {p.label} ({p.code}): {form.label if form else 'Unassigned'}")
        out.append("")
        root = s.storypoints.get(p)
        if root is None:
            out.append("_No storypoints._")
        else:
            out.extend(_tree_lines(root, "", 0))
        out.append("")

    if s.beats:
        out += ["## Storybeats", "", "| # | Perspective | Storypoint | Term | Phase | Storytelling |"]
        out.append("| --- | --- | --- | --- | --- | --- |")
        for beat in sorted(s.beats, key=lambda b: b.index):
            node = s.resolve(beat.path)
            phase = beat.phase.name.replace("_", " ").title()
            if beat.resolution_kind is not None:
                phase += f" ({beat.resolution_kind.name.title()})"
            out.append(
                f"| {beat.index} | {beat.perspective.code} | {beat.path} | "
                f"{_cell(node.term if node else '(unresolved)')} | {phase} | {_cell(beat.storytelling)} |"
            )
        out.append("")

    if s.annotations:
        out += ["## Annotations", ""]
        for key in sorted(s.annotations):
            out.append(f"- `{key}`: {s.annotations[key]}".replace("\n", " "))
        out.append("")
    return "\n".join(out)
