"""``ncp`` command line entry point.

Exit status: 0 success/valid, 1 validation errors or merge conflicts or
differences, 2 usage, parse or I/O errors. Machine-readable results go to
standard output as TAB-separated lines; everything else goes to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import codec, collab, presets
from .justification import Deviation, StructureError, justify, recompile
from .paths import PathError
from .validator import validate

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_ERROR = 2


class CLIError(Exception):
    def __init__(self, message: str, code: int = EXIT_ERROR):
        super().__init__(message)
        self.code = code


def _styled(text: str, color: str) -> str:
    if os.environ.get("NO_COLOR") or not sys.stderr.isatty():
        return text
    codes = {"red": "31", "green": "32", "yellow": "33"}
    return f"\033[{codes[color]}m{text}\033[0m"


def _note(text: str, color: str | None = None) -> None:
    print(_styled(text, color) if color else text, file=sys.stderr)


def _read(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CLIError(f"{path}: {exc.strerror or exc}") from None
    try:
        return codec.parse(data)
    except codec.ParseError as exc:
        raise CLIError(f"{path}: {exc}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_bytes(text.encode("utf-8"))
    except OSError as exc:
        raise CLIError(f"{path}: {exc.strerror or exc}") from None


def cmd_validate(args) -> int:
    report = validate(_read(args.file))
    for d in report.diagnostics:
        print(d.render())
    if report.valid:
        _note(f"{args.file}: valid ({len(report.warnings)} warnings)", "green")
        return EXIT_OK
    _note(f"{args.file}: {len(report.errors)} errors, {len(report.warnings)} warnings", "red")
    return EXIT_FINDINGS


def cmd_fmt(args) -> int:
    text = codec.serialize(_read(args.file))
    if args.write:
        _write(args.file, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_beats(args) -> int:
    s = _read(args.file)
    try:
        beats = justify(s)
    except StructureError as exc:
        for d in exc.diagnostics:
            print(d.render())
        _note(f"{args.file}: structure blocks justification", "red")
        return EXIT_FINDINGS
    for beat in beats:
        cols = [str(beat.index), beat.perspective.value, ".".join(p.value for p in beat.path.positions)]
        if args.phases:
            cols.append(beat.phase.value)
        if beat.resolution_kind is not None:
            cols.append(beat.resolution_kind.value)
        print("\t".join(cols))
    return EXIT_OK


def cmd_diff(args) -> int:
    changes = collab.diff(_read(args.a), _read(args.b))
    sys.stdout.write(changes.render())
    return EXIT_FINDINGS if changes else EXIT_OK


def cmd_merge(args) -> int:
    result = collab.merge3(_read(args.base), _read(args.ours), _read(args.theirs))
    _write(args.out, codec.serialize(result.merged))
    for c in result.conflicts:
        print(c.render())
    if result.conflicts:
        _note(f"{len(result.conflicts)} conflicts; base values kept", "yellow")
        return EXIT_FINDINGS
    return EXIT_OK


def cmd_recompile(args) -> int:
    s = _read(args.file)
    try:
        out = recompile(s, args.at, Deviation.parse(args.set or []))
    except (PathError, ValueError, IndexError) as exc:
        raise CLIError(str(exc)) from None
    except StructureError as exc:
        raise CLIError(str(exc), EXIT_FINDINGS) from None
    _write(args.out, codec.serialize(out))
    return EXIT_OK


def cmd_init(args) -> int:
    try:
        text = presets.golden_text(args.preset)
    except KeyError as exc:
        raise CLIError(exc.args[0]) from None
    _write(args.out, text)
    return EXIT_OK


def cmd_export(args) -> int:
    sys.stdout.write(codec.export_markdown(_read(args.file)))
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CLIError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ncp", description="Work with NCP storyform documents.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="report diagnostics; exit 1 on errors")
    p.add_argument("file")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("fmt", help="print or rewrite the canonical form")
    p.add_argument("--write", action="store_true", help="rewrite FILE in place")
    p.add_argument("file")
    p.set_defaults(handler=cmd_fmt)

    p = sub.add_parser("beats", help="print the justified storybeat sequence")
    p.add_argument("--phases", action="store_true", help="include the phase column")
    p.add_argument("file")
    p.set_defaults(handler=cmd_beats)

    p = sub.add_parser("diff", help="print a TAB-separated changeset; exit 1 if different")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(handler=cmd_diff)

    p = sub.add_parser("merge", help="three-way merge; exit 1 on conflicts")
    p.add_argument("base")
    p.add_argument("ours")
    p.add_argument("theirs")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(handler=cmd_merge)

    p = sub.add_parser("recompile", help="apply deviations and regenerate unexperienced beats")
    p.add_argument("file")
    p.add_argument("--at", type=int, required=True, help="number of beats already experienced")
    p.add_argument("--set", action="append", metavar="PATH=VALUE")
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(handler=cmd_recompile)

    p = sub.add_parser("init", help="write a preset storyform")
    p.add_argument("--preset", required=True, help=", ".join(presets.names()))
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(handler=cmd_init)

    p = sub.add_parser("export", help="print a human-readable outline")
    p.add_argument("--format", choices=["markdown"], default="markdown")
    p.add_argument("file")
    p.set_defaults(handler=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.handler(args)
    except CLIError as exc:
        _note(f"ncp: {exc}", "red")
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
