"""Trace-log files: one ``Sender -> Receiver : message(v1, v2)`` per line.

Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import re
from typing import Iterable

from .errors import LogFormatError, UnknownInteraction
from .model import Document, Interaction, Trace

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_EVENT_RE = re.compile(
    rf"^\s*(?P<s>{_IDENT})\s*->\s*(?P<r>{_IDENT})\s*:\s*(?P<m>{_IDENT})\s*"
    rf"(?:\(\s*(?P<args>{_IDENT}(?:\s*,\s*{_IDENT})*)?\s*\))?\s*$")


def parse_event(text: str, line: int = 1) -> Interaction:
    m = _EVENT_RE.match(text)
    if m is None:
        raise LogFormatError(line, f"cannot read event {text.strip()!r}")
    args = tuple(a.strip() for a in m["args"].split(",")) if m["args"] else ()
    return Interaction(m["s"], m["r"], m["m"], args)


def parse_log(text: str) -> list[tuple[int, Interaction]]:
    """(line number, event) pairs in file order."""
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if body.strip():
            out.append((n, parse_event(body, n)))
    return out


def read_log(path) -> Trace:
    with open(path, encoding="utf-8") as f:
        return Trace(tuple(ev for _, ev in parse_log(f.read())))


def format_trace(t: Iterable[Interaction]) -> str:
    return "".join(f"{ev}\n" for ev in t)


def check_declared(doc: Document, events: Iterable[Interaction]) -> None:
    """Raise UnknownInteraction for the first undeclared event."""
    for i, ev in enumerate(events):
        why = doc.declares(ev)
        if why is not None:
            raise UnknownInteraction(f"{ev}: {why}", position=i)
