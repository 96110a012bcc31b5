"""Sequence-diagram rendering of EETs and traces, as ASCII text or SVG.

Both back ends draw from one row layout: one row per message, frames (choice,
par, where, ref) as boxes inset by a fixed margin per nesting level, loops as
labelled bars to the right. Geometry is integral and nothing depends on hash
order or time, so equal inputs give identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

from .errors import UnknownComponent
from .model import (
    Choice, Dead, Document, Empty, Expr, Guarded, Interaction, Interleave, Loop, Message,
    Param, Ref, Seq,
)
from .parser import display_name


@dataclass(frozen=True)
class RenderOptions:
    format: str = "text"                        # "text" or "svg"
    column_order: Optional[tuple] = None        # default: declaration order
    show_params: bool = True
    px_per_row: int = 30

    def __post_init__(self):
        if self.format not in ("text", "svg"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.px_per_row <= 0:
            raise ValueError("px_per_row must be positive")
        if self.column_order is not None and not isinstance(self.column_order, tuple):
            object.__setattr__(self, "column_order", tuple(self.column_order))


# -- layout ------------------------------------------------------------------

@dataclass
class _Row:
    kind: str            # arrow | self | blank | head | split | foot
    depth: int           # frames enclosing the row (head/split/foot: the frame's own depth)
    sender: str = ""
    receiver: str = ""
    label: str = ""


@dataclass
class _Bar:
    top: int
    bottom: int
    level: int
    label: str


@dataclass
class _Layout:
    show_params: bool = True
    rows: list = field(default_factory=list)
    bars: list = field(default_factory=list)
    components: set = field(default_factory=set)

    def arrow(self, sender, receiver, label, depth):
        self.components.update((sender, receiver))
        kind = "self" if sender == receiver else "arrow"
        self.rows.append(_Row(kind, depth, sender, receiver, label))

    def frame(self, depth, label, branches, loops):
        self.rows.append(_Row("head", depth, label=label))
        for i, b in enumerate(branches):
            if i:
                self.rows.append(_Row("split", depth))
            n = len(self.rows)
            self.expr(b, depth + 1, loops)
            if len(self.rows) == n:
                self.rows.append(_Row("blank", depth + 1))
        self.rows.append(_Row("foot", depth))

    def expr(self, e: Expr, depth: int, loops: int):
        if isinstance(e, Message):
            self.arrow(e.sender, e.receiver, _label(e, self.show_params), depth)
        elif isinstance(e, Seq):
            self.expr(e.left, depth, loops)
            self.expr(e.right, depth, loops)
        elif isinstance(e, Choice):
            self.frame(depth, "choice", e.alternatives, loops)
        elif isinstance(e, Interleave):
            branches = []
            while isinstance(e, Interleave):
                branches.append(e.left)
                e = e.right
            self.frame(depth, "par", branches + [e], loops)
        elif isinstance(e, Guarded):
            self.frame(depth, f"where {_pred_label(e)}", [e.body], loops)
        elif isinstance(e, Ref):
            self.frame(depth, f"ref {e.name}", [Empty()], loops)
        elif isinstance(e, Dead):
            self.frame(depth, "dead", [Empty()], loops)
        elif isinstance(e, Loop):
            top = len(self.rows)
            self.expr(e.body, depth, loops + 1)
            if len(self.rows) == top:
                self.rows.append(_Row("blank", depth))
            self.bars.append(_Bar(top, len(self.rows) - 1, loops, e.bounds))
        elif not isinstance(e, Empty):
            raise TypeError(f"cannot render {type(e).__name__}")


def _label(m: Message, show_params: bool) -> str:
    if not show_params:
        return m.message
    args = [display_name(a.name) if isinstance(a, Param) else a.value for a in m.args]
    return f"{m.message}({', '.join(args)})"


def _pred_label(g: Guarded) -> str:
    parts = []
    for a in g.predicate.atoms:
        side = [display_name(t.name) if isinstance(t, Param) else t.value for t in (a.left, a.right)]
        parts.append(f"{side[0]} {a.op} {side[1]}")
    return " && ".join(parts)


def _columns(doc: Document, layout: _Layout, opts: RenderOptions) -> tuple:
    cols = opts.column_order if opts.column_order is not None else doc.components
    if len(set(cols)) != len(cols):
        raise ValueError("column_order lists a component twice")
    for c in cols:
        if c not in doc.components:
            raise UnknownComponent(f"unknown component {c!r}")
    for c in sorted(layout.components):
        if c not in cols:
            raise UnknownComponent(f"component {c!r} has no column")
    return tuple(cols)


def render_eet(e: Expr, doc: Document, opts: RenderOptions = RenderOptions()) -> bytes:
    layout = _Layout(opts.show_params)
    layout.expr(e, 0, 0)
    return _emit(layout, doc, opts)


def render_trace(t: Sequence[Interaction], doc: Document, opts: RenderOptions = RenderOptions()) -> bytes:
    layout = _Layout(opts.show_params)
    for ev in t:
        label = f"{ev.message}({', '.join(ev.args)})" if opts.show_params else ev.message
        layout.arrow(ev.sender, ev.receiver, label, 0)
    return _emit(layout, doc, opts)


def _emit(layout: _Layout, doc: Document, opts: RenderOptions) -> bytes:
    cols = _columns(doc, layout, opts)
    if opts.format == "text":
        return _text(layout, cols).encode("ascii")
    return _svg(layout, cols, opts.px_per_row).encode("utf-8")


# -- text --------------------------------------------------------------------

def _text(layout: _Layout, cols: tuple) -> str:
    rows = layout.rows
    depth = max([r.depth + 1 for r in rows if r.kind in ("head", "split", "foot")], default=0)
    arrow_labels = [len(r.label) for r in rows if r.kind == "arrow"]
    width = max([n + 6 for n in arrow_labels] + [len(c) + 3 for c in cols] + [10])
    x0 = 2 * depth + 1 + (len(cols[0]) // 2 if cols else 0)
    axis = {c: x0 + i * width for i, c in enumerate(cols)}
    extent = x0 + 1
    if cols:
        last = cols[-1]
        extent = axis[last] + (len(last) + 1) // 2 + 2
    for r in rows:
        if r.kind == "self":
            extent = max(extent, axis[r.sender] + 5 + len(r.label))
        if r.kind == "head":
            extent = max(extent, 2 * r.depth + len(r.label) + 7)
    right = {d: extent + 2 * (depth - 1 - d) + 1 for d in range(depth)}
    total = extent + 2 * depth
    bar_gap = max([len(b.label) for b in layout.bars], default=0) + 3
    levels = max([b.level + 1 for b in layout.bars], default=0)
    total_with_bars = total + 1 + levels * bar_gap

    def blank_line(enclosing: int) -> list:
        line = [" "] * total_with_bars
        for c in cols:
            line[axis[c]] = "|"
        for d in range(enclosing):
            line[2 * d] = "|"
            line[right[d]] = "|"
        return line

    out = []
    header = [" "] * total_with_bars
    for c in cols:
        start = axis[c] - len(c) // 2
        header[start:start + len(c)] = c
    out.append(header)
    out.append(blank_line(0))
    spans = []  # first and last text line of each row
    for r in rows:
        first = len(out)
        if r.kind in ("head", "split", "foot"):
            line = blank_line(r.depth)
            left, rgt = 2 * r.depth, right[r.depth]
            line[left:rgt + 1] = "+" + "-" * (rgt - left - 1) + "+"
            tag = {"head": f"[{r.label}]", "split": "", "foot": ""}[r.kind]
            if r.kind == "split":
                line[left + 1:rgt] = ("- " * (rgt - left))[:rgt - left - 1]
            line[left + 2:left + 2 + len(tag)] = tag
        else:
            line = blank_line(r.depth)
            if r.kind == "arrow":
                a, b = axis[r.sender], axis[r.receiver]
                lo, hi = min(a, b), max(a, b)
                body = ["-"] * (hi - lo - 1)
                if b > a:
                    body[-1] = ">"
                else:
                    body[0] = "<"
                start = (len(body) - len(r.label)) // 2
                body[start:start + len(r.label)] = r.label
                line[lo + 1:hi] = body
            elif r.kind == "self":
                x = axis[r.sender]
                line[x + 1:x + 5 + len(r.label)] = "--+ " + r.label
                out.append(line)
                line = blank_line(r.depth)
                line[x + 1:x + 4] = "<-+"
        out.append(line)
        spans.append((first, len(out) - 1))
    out.append(blank_line(0))

    for b in layout.bars:
        x = total + 1 + b.level * bar_gap
        top, bottom = spans[b.top][0], spans[b.bottom][1]
        for y in range(top, bottom + 1):
            out[y][x] = "|"
        out[top][x] = "+"
        out[bottom][x] = "+"
        out[top][x + 2:x + 2 + len(b.label)] = b.label
    return "".join("".join(line).rstrip() + "\n" for line in out)


# -- svg ---------------------------------------------------------------------

_CHAR_PX = 8
_MARGIN_PX = 12


def _svg(layout: _Layout, cols: tuple, row_px: int) -> str:
    rows = layout.rows
    depth = max([r.depth + 1 for r in rows if r.kind in ("head", "split", "foot")], default=0)
    label_chars = max([len(r.label) for r in rows if r.kind == "arrow"] + [len(c) for c in cols] + [8])
    col_px = (label_chars + 4) * _CHAR_PX
    left = 20 + depth * _MARGIN_PX + col_px // 2
    axis = {c: left + i * col_px for i, c in enumerate(cols)}
    extent = (axis[cols[-1]] if cols else left) + col_px // 2
    for r in rows:
        if r.kind == "self":
            extent = max(extent, axis[r.sender] + 30 + len(r.label) * _CHAR_PX)
        if r.kind == "head":
            extent = max(extent, 20 + r.depth * _MARGIN_PX + (len(r.label) + 4) * _CHAR_PX)
    frame_right = extent + depth * _MARGIN_PX
    bar_gap = (max([len(b.label) for b in layout.bars], default=0) + 2) * _CHAR_PX
    levels = max([b.level + 1 for b in layout.bars], default=0)
    width = frame_right + 20 + levels * bar_gap
    header = 40
    top = header + row_px // 2
    height = header + (len(rows) + 1) * row_px

    def y_of(i):
        return top + i * row_px

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="12">',
        '<defs><style>line,polyline,rect{stroke:black;fill:none}'
        ' .split{stroke-dasharray:4 3} polygon{fill:black}</style></defs>',
    ]
    for c in cols:
        x = axis[c]
        out.append(f'<text class="component" x="{x}" y="24" text-anchor="middle">{escape(c)}</text>')
        out.append(f'<line class="axis" x1="{x}" y1="30" x2="{x}" y2="{height - 10}"/>')

    stack = []
    for i, r in enumerate(rows):
        y = y_of(i)
        if r.kind == "head":
            stack.append((i, r))
        elif r.kind == "foot":
            j, head = stack.pop()
            x1 = 10 + r.depth * _MARGIN_PX
            x2 = frame_right - r.depth * _MARGIN_PX
            y1 = y_of(j) - row_px // 2 + 4
            y2 = y + row_px // 2 - 4
            out.append(f'<g class="frame"><rect x="{x1}" y="{y1}" width="{x2 - x1}" height="{y2 - y1}"/>'
                       f'<text x="{x1 + 4}" y="{y1 + 14}">{escape(head.label)}</text></g>')
        elif r.kind == "split":
            x1 = 10 + r.depth * _MARGIN_PX
            x2 = frame_right - r.depth * _MARGIN_PX
            out.append(f'<line class="split" x1="{x1}" y1="{y}" x2="{x2}" y2="{y}"/>')
        elif r.kind == "arrow":
            a, b = axis[r.sender], axis[r.receiver]
            tip = b - 8 if b > a else b + 8
            out.append(
                f'<g class="arrow"><line x1="{a}" y1="{y}" x2="{tip}" y2="{y}"/>'
                f'<polygon points="{b},{y} {tip},{y - 4} {tip},{y + 4}"/>'
                f'<text x="{(a + b) // 2}" y="{y - 5}" text-anchor="middle">{escape(r.label)}</text></g>')
        elif r.kind == "self":
            x = axis[r.sender]
            out.append(
                f'<g class="arrow"><polyline points="{x},{y - 8} {x + 24},{y - 8} {x + 24},{y + 6} {x + 8},{y + 6}"/>'
                f'<polygon points="{x},{y + 6} {x + 8},{y + 2} {x + 8},{y + 10}"/>'
                f'<text x="{x + 30}" y="{y}">{escape(r.label)}</text></g>')
    for b in layout.bars:
        x = frame_right + 12 + b.level * bar_gap
        y1 = y_of(b.top) - row_px // 2 + 6
        y2 = y_of(b.bottom) + row_px // 2 - 6
        out.append(f'<g class="loop"><line x1="{x}" y1="{y1}" x2="{x}" y2="{y2}"/>'
                   f'<text x="{x + 4}" y="{y1 + 10}" data-bounds={quoteattr(b.label)}>{escape(b.label)}</text></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
