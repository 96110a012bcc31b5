"""``eetc`` command line: parse, enumerate, check, monitor and render EETs.

Exit status: 0 when the property holds (or the command succeeded), 1 when it
fails (a witness is printed on stdout), 2 on usage, parse or configuration
errors (diagnostics on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import analysis, monitor
from .errors import EetError, ParseErrors
from .oracle import MAX_BOUND, denote
from .parser import parse_file, resolve
from .render import RenderOptions, render_eet, render_trace
from .tracelog import format_trace, read_log

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class _Usage(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="eetc", description="Extended Event Trace compiler and checker")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def cmd(name, help):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file", metavar="FILE", help=".eet document")
        return sp

    cmd("check", "parse and validate a document")

    sp = cmd("enumerate", "list every trace up to a length bound")
    sp.add_argument("--eet", required=True)
    sp.add_argument("--max-len", type=int, required=True)

    sp = cmd("member", "is a logged trace allowed by an EET")
    sp.add_argument("--eet", required=True)
    sp.add_argument("--trace", required=True, metavar="LOG")
    sp.add_argument("--mode", choices=("exact", "embed"), default="exact")
    sp.add_argument("--json", action="store_true")

    sp = cmd("refine", "language inclusion of a concrete EET in an abstract one")
    sp.add_argument("--abstract", required=True)
    sp.add_argument("--concrete", required=True)
    sp.add_argument("--json", action="store_true")

    sp = cmd("consistent", "loose consistency of a scenario with a complete description")
    sp.add_argument("--scenario", required=True)
    sp.add_argument("--complete", required=True)
    sp.add_argument("--mode", choices=("segment", "embed"), required=True)
    sp.add_argument("--json", action="store_true")

    sp = cmd("conjoin", "is the intersection of several EETs non-empty")
    sp.add_argument("--eets", required=True, help="comma separated names")
    sp.add_argument("--json", action="store_true")

    sp = cmd("monitor", "replay a trace log, one verdict per event")
    sp.add_argument("--eet", required=True)
    sp.add_argument("--trace", required=True, metavar="LOG")

    sp = cmd("render", "draw an EET or a trace log")
    what = sp.add_mutually_exclusive_group(required=True)
    what.add_argument("--eet")
    what.add_argument("--trace", metavar="LOG")
    sp.add_argument("--format", choices=("svg", "text"), default="text")
    sp.add_argument("-o", "--output", default="-")
    sp.add_argument("--columns", help="comma separated component order")
    sp.add_argument("--no-params", action="store_true")
    sp.add_argument("--resolve", action="store_true", help="inline referenced EETs")
    sp.add_argument("--px-per-row", type=int, default=30)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors itself
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        _validate(args)
        return COMMANDS[args.command](args)
    except ParseErrors as exc:
        for err in exc.errors:
            print(f"{args.file}:{err}", file=sys.stderr)
        return EXIT_ERROR
    except (EetError, _Usage, OSError, ValueError) as exc:
        print(f"eetc: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def _validate(args):
    if args.command == "enumerate" and not 0 <= args.max_len <= MAX_BOUND:
        raise _Usage(f"--max-len must be between 0 and {MAX_BOUND}")
    if args.command == "render" and args.px_per_row <= 0:
        raise _Usage("--px-per-row must be positive")
    if args.command == "conjoin" and not [n for n in args.eets.split(",") if n.strip()]:
        raise _Usage("--eets needs at least one name")


def _report(rep: analysis.CheckReport, as_json: bool) -> int:
    if as_json:
        print(rep.to_json())
    else:
        print(f"{rep.question.value}: {'holds' if rep.holds else 'fails'}")
        if rep.witness is not None:
            print(f"# witness ({len(rep.witness)} events)")
            sys.stdout.write(format_trace(rep.witness))
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_check(args) -> int:
    doc = parse_file(args.file)
    print(f"{args.file}: ok ({len(doc.components)} components, {len(doc.message_sigs)} messages, "
          f"{len(doc.eets)} EETs)")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    doc = parse_file(args.file)
    den = denote(resolve(doc, args.eet), doc, args.max_len)
    print(f"# {len(den)} traces of {args.eet} with at most {args.max_len} events")
    for i, t in enumerate(den.traces, 1):
        print(f"# trace {i} ({len(t)} events)")
        sys.stdout.write(format_trace(t))
    return EXIT_OK


def cmd_member(args) -> int:
    doc = parse_file(args.file)
    t = read_log(args.trace)
    e = resolve(doc, args.eet)
    if args.mode == "embed":
        rep = analysis.member_embedded(t, e, doc)
    else:
        rep = analysis.member(t, e, doc)
    return _report(rep, args.json)


def cmd_refine(args) -> int:
    doc = parse_file(args.file)
    rep = analysis.refines(resolve(doc, args.concrete), resolve(doc, args.abstract), doc)
    return _report(rep, args.json)


def cmd_consistent(args) -> int:
    doc = parse_file(args.file)
    rep = analysis.loose_consistent(resolve(doc, args.scenario), resolve(doc, args.complete),
                                    args.mode, doc)
    return _report(rep, args.json)


def cmd_conjoin(args) -> int:
    doc = parse_file(args.file)
    names = [n.strip() for n in args.eets.split(",") if n.strip()]
    rep = analysis.conjoin_nonempty([resolve(doc, n) for n in names], doc)
    return _report(rep, args.json)


def cmd_monitor(args) -> int:
    doc = parse_file(args.file)
    log = read_log(args.trace)
    state, records = monitor.run_log(resolve(doc, args.eet), doc, log)
    for rec in records:
        print(json.dumps(rec))
    return EXIT_OK if state.in_language else EXIT_FAIL


def cmd_render(args) -> int:
    doc = parse_file(args.file)
    opts = RenderOptions(
        format=args.format,
        column_order=tuple(c.strip() for c in args.columns.split(",")) if args.columns else None,
        show_params=not args.no_params,
        px_per_row=args.px_per_row,
    )
    if args.trace:
        data = render_trace(read_log(args.trace), doc, opts)
    else:
        e = resolve(doc, args.eet) if args.resolve else _named(doc, args.eet)
        data = render_eet(e, doc, opts)
    if args.output == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(args.output, "wb") as f:
            f.write(data)
    return EXIT_OK


def _named(doc, name):
    if name not in doc.eets:
        raise _Usage(f"no EET named {name!r}")
    return doc.eets[name]


COMMANDS = {
    "check": cmd_check,
    "enumerate": cmd_enumerate,
    "member": cmd_member,
    "refine": cmd_refine,
    "consistent": cmd_consistent,
    "conjoin": cmd_conjoin,
    "monitor": cmd_monitor,
    "render": cmd_render,
}


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
