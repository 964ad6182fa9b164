"""Toolkit for NCP storyform documents."""

from .codec import (
    DocumentSyntaxError,
    ParseError,
    SchemaError,
    VersionError,
    VersionWarning,
    canonicalize,
    export_markdown,
    parse,
    serialize,
)
from .collab import ChangeSet, MergeResult, apply, diff, merge3
from .justification import Deviation, StructureError, justify, recompile
from .model import (
    NCP_VERSION,
    Alignment,
    ConflictForm,
    Diagnostic,
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
    Severity,
    Storybeat,
    Storyform,
    StorypointNode,
    StorypointPath,
    diagonal_counterpart,
    enumerate_valid_assignments,
    is_valid_assignment,
)
from .paths import PathError
from .validator import ValidationReport, validate

__version__ = "0.1.0"
