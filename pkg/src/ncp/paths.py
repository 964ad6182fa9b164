"""Document path grammar shared by diagnostics, annotations, deviations and diffs.

A path is a sequence of segments. Identifier keys are joined with dots,
list positions are bracketed integers, and any other key is written as a
bracketed JSON string::

    dynamics.resolve
    storypoints.mc.tl.term
    storybeats[3]
    annotations["storypoints.os.tr"]
"""

from __future__ import annotations

import json
import re
from typing import Union

Segment = Union[str, int]

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INDEX = re.compile(r"\[(0|[1-9][0-9]*)\]")


class PathError(ValueError):
    """A path is malformed or does not address anything in the document."""


def format_path(segments: tuple[Segment, ...] | list[Segment]) -> str:
    parts: list[str] = []
    for seg in segments:
        if isinstance(seg, bool) or not isinstance(seg, (str, int)):
            raise TypeError(f"path segment must be str or int, got {seg!r}")
        if isinstance(seg, int):
            if seg < 0:
                raise PathError(f"negative index {seg}")
            parts.append(f"[{seg}]")
        elif _IDENT.fullmatch(seg):
            parts.append(f".{seg}" if parts else seg)
        else:
            parts.append("[" + json.dumps(seg, ensure_ascii=False) + "]")
    return "".join(parts)


def parse_path(text: str) -> tuple[Segment, ...]:
    """Split path text into segments; inverse of :func:`format_path`."""
    segments: list[Segment] = []
    pos = 0
    decoder = json.JSONDecoder()
    while pos < len(text):
        ch = text[pos]
        if ch == "[":
            m = _INDEX.match(text, pos)
            if m:
                segments.append(int(m.group(1)))
                pos = m.end()
                continue
            try:
                key, end = decoder.raw_decode(text, pos + 1)
            except json.JSONDecodeError:
                raise PathError(f"bad bracketed segment at offset {pos} in {text!r}") from None
            if not isinstance(key, str) or end >= len(text) or text[end] != "]":
                raise PathError(f"bad bracketed segment at offset {pos} in {text!r}")
            segments.append(key)
            pos = end + 1
            continue
        if segments:
            if ch != ".":
                raise PathError(f"expected '.' or '[' at offset {pos} in {text!r}")
            pos += 1
        m = _IDENT.match(text, pos)
        if not m:
            raise PathError(f"expected identifier at offset {pos} in {text!r}")
        segments.append(m.group(0))
        pos = m.end()
    if not segments:
        raise PathError("empty path")
    return tuple(segments)
