"""Structural diff and three-way merge over document paths.

A storyform is flattened into leaves keyed by path text. Storypoint fields
are addressed through their quad positions (``storypoints.mc.tl.term``),
storybeats are whole entries addressed by list position (``storybeats[3]``),
and every other field is its own leaf. Leaf values are compact canonical
JSON text, so ``"relinquished"`` keeps its quotes and an absent value is
``None``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from typing import Optional

from .codec import _loads, canonical_json, from_document, to_document
from .model import Storyform
from .paths import format_path, parse_path

_POSITIONS = ("tl", "tr", "bl", "br")


class ApplyError(ValueError):
    """A changeset does not fit the storyform it is applied to."""


@dataclass(frozen=True)
class Change:
    path: str
    old: Optional[str]
    new: Optional[str]

    def __post_init__(self):
        if self.old is None and self.new is None:
            raise ValueError(f"{self.path}: a change needs an old or a new value")

    @property
    def kind(self) -> str:
        if self.old is None:
            return "add"
        if self.new is None:
            return "delete"
        return "modify"

    def render(self) -> str:
        return f"{self.path}\t{self.old or ''}\t{self.new or ''}"


@dataclass(frozen=True)
class ChangeSet:
    entries: tuple[Change, ...] = ()

    def __post_init__(self):
        entries = tuple(sorted(self.entries, key=lambda c: _sort_key(c.path)))
        paths = [c.path for c in entries]
        if len(set(paths)) != len(paths):
            raise ValueError("changeset has duplicate paths")
        object.__setattr__(self, "entries", entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def paths(self) -> set[str]:
        return {c.path for c in self.entries}

    def render(self) -> str:
        """One TAB-separated ``path old new`` line per entry."""
        return "".join(c.render() + "\n" for c in self.entries)


@dataclass(frozen=True)
class Conflict:
    path: str
    base: Optional[str]
    ours: Optional[str]
    theirs: Optional[str]

    def render(self) -> str:
        return "\t".join((self.path, self.base or "", self.ours or "", self.theirs or ""))


@dataclass(frozen=True)
class MergeResult:
    merged: Storyform
    conflicts: tuple[Conflict, ...] = ()

    @property
    def clean(self) -> bool:
        return not self.conflicts


def _sort_key(path: str):
    return tuple((0, s) if isinstance(s, int) else (1, s) for s in parse_path(path))


# ---------------------------------------------------------------------------
# flattening
# ---------------------------------------------------------------------------


def _flatten_node(node: dict, prefix: tuple, out: dict) -> None:
    for key, value in node.items():
        if key == "quad":
            for pos, child in value.items():
                _flatten_node(child, prefix + (pos,), out)
        else:
            out[format_path(prefix + (key,))] = canonical_json(value)


def flatten(s: Storyform) -> dict[str, str]:
    """Map every leaf path of ``s`` to its canonical JSON value."""
    doc = to_document(s)
    out: dict[str, str] = {}
    for key, value in doc.items():
        if key in ("dynamics", "perspectives", "annotations"):
            for sub, leaf in value.items():
                out[format_path((key, sub))] = canonical_json(leaf)
        elif key == "storypoints":
            for p, root in value.items():
                _flatten_node(root, ("storypoints", p), out)
        elif key == "storybeats":
            for i, beat in enumerate(value):
                out[format_path(("storybeats", i))] = canonical_json(beat)
        else:
            out[format_path((key,))] = canonical_json(value)
    return out


def unflatten(leaves: Mapping[str, str]) -> Storyform:
    """Rebuild a storyform from leaves produced by :func:`flatten`."""
    doc: dict = {}
    beats: dict[int, object] = {}
    for path, text in leaves.items():
        segs = parse_path(path)
        value = _loads(text)
        head = segs[0]
        if head == "storybeats" and len(segs) == 2:
            beats[segs[1]] = value
        elif head == "storypoints" and len(segs) >= 3:
            node = doc.setdefault("storypoints", {}).setdefault(segs[1], {})
            for pos in segs[2:-1]:
                node = node.setdefault("quad", {}).setdefault(pos, {})
            node[segs[-1]] = value
        elif head in ("dynamics", "perspectives", "annotations") and len(segs) == 2:
            doc.setdefault(head, {})[segs[1]] = value
        elif len(segs) == 1:
            doc[head] = value
        else:
            raise ApplyError(f"{path}: not a storyform leaf")
    if beats:
        if sorted(beats) != list(range(len(beats))):
            raise ApplyError("storybeats positions are not contiguous")
        doc["storybeats"] = [beats[i] for i in range(len(beats))]
    return from_document(doc)


# ---------------------------------------------------------------------------
# diff / apply
# ---------------------------------------------------------------------------


def _diff_leaves(a: Mapping[str, str], b: Mapping[str, str]) -> ChangeSet:
    changes = []
    for path in set(a) | set(b):
        old, new = a.get(path), b.get(path)
        if old != new:
            changes.append(Change(path, old, new))
    return ChangeSet(tuple(changes))


def diff(a: Storyform, b: Storyform) -> ChangeSet:
    return _diff_leaves(flatten(a), flatten(b))


def apply(s: Storyform, changes: ChangeSet | Iterable[Change]) -> Storyform:
    """Apply ``changes`` to ``s``; every old value must match what is there."""
    leaves = flatten(s)
    for c in changes:
        if leaves.get(c.path) != c.old:
            raise ApplyError(f"{c.path}: expected {c.old!r}, found {leaves.get(c.path)!r}")
        if c.new is None:
            del leaves[c.path]
        else:
            leaves[c.path] = c.new
    return unflatten(leaves)


# ---------------------------------------------------------------------------
# merge
# ---------------------------------------------------------------------------


def _broken_subtrees(leaves: Mapping[str, str]) -> set[tuple]:
    """Node paths whose merged leaves no longer form a well-shaped tree.

    A node needs a term; a quad needs all four children. The returned path
    is the smallest subtree that has to fall back to base as a unit.
    """
    nodes: dict[tuple, set[str]] = {}
    for path in leaves:
        segs = parse_path(path)
        if segs[0] != "storypoints" or len(segs) < 3:
            continue
        node = segs[1:-1]
        for depth in range(1, len(node) + 1):
            nodes.setdefault(node[:depth], set())
        nodes[node].add(segs[-1])
    broken = set()
    for node, fields in nodes.items():
        if "term" not in fields:
            broken.add(node[:-1] if len(node) > 1 else node)
        children = [node + (pos,) for pos in _POSITIONS]
        present = sum(1 for c in children if c in nodes)
        if 0 < present < 4:
            broken.add(node)
    return broken


def _beat_gap(leaves: Mapping[str, str]) -> Optional[int]:
    positions = sorted(parse_path(p)[1] for p in leaves if p.startswith("storybeats["))
    for expected, got in enumerate(positions):
        if expected != got:
            return expected
    return None


def merge3(base: Storyform, ours: Storyform, theirs: Storyform) -> MergeResult:
    """Three-way merge by leaf path.

    A leaf changed on one side takes that change; identical changes on both
    sides are taken once; divergent changes are conflicts and keep the base
    value. If taking changes leaves a storypoint tree or the beat list
    ill-formed, the affected region falls back to base and every leaf in it
    that either side touched is reported as a conflict.
    """
    b, o, t = flatten(base), flatten(ours), flatten(theirs)
    merged: dict[str, str] = {}
    conflicts: dict[str, Conflict] = {}
    for path in set(b) | set(o) | set(t):
        bv, ov, tv = b.get(path), o.get(path), t.get(path)
        if ov == tv or tv == bv:
            value = ov
        elif ov == bv:
            value = tv
        else:
            conflicts[path] = Conflict(path, bv, ov, tv)
            value = bv
        if value is not None:
            merged[path] = value

    def revert(predicate):
        for path in set(merged) | set(b):
            if predicate(path) and merged.get(path) != b.get(path):
                conflicts.setdefault(path, Conflict(path, b.get(path), o.get(path), t.get(path)))
                if path in b:
                    merged[path] = b[path]
                else:
                    del merged[path]

    while True:
        broken = _broken_subtrees(merged)
        if not broken:
            break
        for node in broken:
            revert(lambda p, node=node: parse_path(p)[1 : 1 + len(node)] == node and parse_path(p)[0] == "storypoints")

    gap = _beat_gap(merged)
    if gap is not None:
        revert(lambda p: p.startswith("storybeats[") and parse_path(p)[1] >= gap)

    ordered = tuple(sorted(conflicts.values(), key=lambda c: _sort_key(c.path)))
    return MergeResult(unflatten(merged), ordered)
