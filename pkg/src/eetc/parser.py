"""Parser for the textual ``.eet`` language.

Grammar (newline separates statements and steps, ``#`` comments to end of line)::

    domain Period = { p1, p2 }
    component Customer, ReservationBranch
    msg request(f: Period, t: Period)
    eet Name {
        Customer -> ReservationBranch : request(f, t)
        choice { ... | ... }
        loop 0..* { ... }
        par { ... | ... }
        ref Other
        where f != t
    }

A message argument is a constant when it names a value of the parameter's
domain, otherwise it is a formal parameter. ``where`` constrains the whole
block it appears in.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import ParseErrors, UnknownName
from .model import (
    Atom, Choice, Const, Document, Empty, Expr, Guarded, Interleave, Loop, Message,
    Param, Predicate, Ref, Seq, children, param_names, seq,
)

KEYWORDS = {"domain", "component", "msg", "eet", "choice", "loop", "par", "ref", "where"}
TOP_LEVEL = {"domain", "component", "msg", "eet"}


class ErrorKind(enum.Enum):
    Syntax = "Syntax"
    UnknownName = "UnknownName"
    DuplicateName = "DuplicateName"
    ArityMismatch = "ArityMismatch"
    DomainMismatch = "DomainMismatch"
    CyclicRef = "CyclicRef"
    EmptyChoice = "EmptyChoice"
    BadLoopBounds = "BadLoopBounds"


@dataclass(frozen=True, order=True)
class ParseError:
    line: int
    column: int
    kind: ErrorKind = field(compare=False)
    detail: str = field(compare=False)

    def __str__(self):
        return f"{self.line}:{self.column}: {self.kind.value}: {self.detail}"


# -- lexer -------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<sym>->|\.\.|==|!=|&&|[{}(),:=*|])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str   # ident, int, sym, nl, eof, bad
    value: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            tokens.append(Token("bad", source[pos], line, col))
            pos += 1
            continue
        kind = m.lastgroup
        if kind == "nl":
            tokens.append(Token("nl", "\n", line, col))
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- raw syntax (positions kept for semantic diagnostics) --------------------

@dataclass
class RawMsg:
    sender: Token
    receiver: Token
    name: Token
    args: list


@dataclass
class RawBlock:
    start: Token
    steps: list
    wheres: list = field(default_factory=list)  # list of (left Token, op, right Token)


@dataclass
class RawChoice:
    start: Token
    alternatives: list


@dataclass
class RawLoop:
    start: Token
    min: int
    max: Optional[int]
    body: RawBlock


@dataclass
class RawPar:
    start: Token
    branches: list


@dataclass
class RawRef:
    start: Token
    name: Token


class _SyntaxError(Exception):
    def __init__(self, tok: Token, detail: str):
        self.tok = tok
        self.detail = detail


class _Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0
        self.errors: list[ParseError] = []
        self.domains: list = []
        self.components: list = []
        self.messages: list = []
        self.eets: list = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, value: str) -> bool:
        return self.tok.kind in ("sym", "ident") and self.tok.value == value

    def expect(self, value: str) -> Token:
        if not self.at(value):
            raise _SyntaxError(self.tok, f"expected {value!r}, found {_describe(self.tok)}")
        return self.advance()

    def ident(self, what: str) -> Token:
        t = self.tok
        if t.kind != "ident" or t.value in KEYWORDS:
            raise _SyntaxError(t, f"expected {what}, found {_describe(t)}")
        return self.advance()

    def integer(self) -> int:
        t = self.tok
        if t.kind != "int":
            raise _SyntaxError(t, f"expected a number, found {_describe(t)}")
        self.advance()
        return int(t.value)

    def skip_nl(self):
        while self.tok.kind == "nl":
            self.advance()

    def end_of_statement(self):
        if self.tok.kind not in ("nl", "eof"):
            raise _SyntaxError(self.tok, f"expected end of line, found {_describe(self.tok)}")

    def recover(self):
        # resume at the next line that starts with a top-level keyword
        while self.tok.kind != "eof":
            t = self.advance()
            if t.kind == "nl" and self.tok.kind == "ident" and self.tok.value in TOP_LEVEL:
                return

    # statements
    def parse(self):
        while True:
            self.skip_nl()
            t = self.tok
            if t.kind == "eof":
                return
            try:
                if t.kind == "ident" and t.value == "domain":
                    self.domain()
                elif t.kind == "ident" and t.value == "component":
                    self.component()
                elif t.kind == "ident" and t.value == "msg":
                    self.msg()
                elif t.kind == "ident" and t.value == "eet":
                    self.eet()
                else:
                    raise _SyntaxError(t, f"expected a declaration, found {_describe(t)}")
                self.end_of_statement()
            except _SyntaxError as err:
                self.errors.append(ParseError(err.tok.line, err.tok.col, ErrorKind.Syntax, err.detail))
                self.recover()

    def domain(self):
        self.advance()
        name = self.ident("domain name")
        self.expect("=")
        self.expect("{")
        values = [self.ident("domain value")]
        while self.at(","):
            self.advance()
            values.append(self.ident("domain value"))
        self.expect("}")
        self.domains.append((name, values))

    def component(self):
        self.advance()
        names = [self.ident("component name")]
        while self.at(","):
            self.advance()
            names.append(self.ident("component name"))
        self.components.extend(names)

    def msg(self):
        self.advance()
        name = self.ident("message name")
        self.expect("(")
        params = []
        if not self.at(")"):
            while True:
                pname = self.ident("parameter name")
                self.expect(":")
                params.append((pname, self.ident("domain name")))
                if not self.at(","):
                    break
                self.advance()
        self.expect(")")
        self.messages.append((name, params))

    def eet(self):
        self.advance()
        name = self.ident("EET name")
        start = self.expect("{")
        body = self.block(start, ("}",))
        self.expect("}")
        self.eets.append((name, body))

    # EET bodies
    def block(self, start: Token, terminators) -> RawBlock:
        blk = RawBlock(start, [])
        while True:
            self.skip_nl()
            if self.tok.kind == "sym" and self.tok.value in terminators:
                return blk
            if self.at("where"):
                self.advance()
                blk.wheres.extend(self.predicate())
            else:
                blk.steps.append(self.step())
            if not (self.tok.kind == "nl" or (self.tok.kind == "sym" and self.tok.value in terminators)):
                raise _SyntaxError(self.tok, f"expected end of step, found {_describe(self.tok)}")

    def alternatives(self, start: Token) -> list:
        self.expect("{")
        save = self.i
        self.skip_nl()
        if self.at("}"):
            self.advance()
            return []
        self.i = save
        alts = [self.block(start, ("|", "}"))]
        while self.at("|"):
            bar = self.advance()
            alts.append(self.block(bar, ("|", "}")))
        self.expect("}")
        return alts

    def step(self):
        t = self.tok
        if t.kind == "ident" and t.value == "choice":
            self.advance()
            return RawChoice(t, self.alternatives(t))
        if t.kind == "ident" and t.value == "par":
            self.advance()
            branches = self.alternatives(t)
            if len(branches) < 2:
                raise _SyntaxError(t, "par needs at least two branches")
            return RawPar(t, branches)
        if t.kind == "ident" and t.value == "loop":
            self.advance()
            lo = self.integer()
            self.expect("..")
            if self.at("*"):
                self.advance()
                hi = None
            else:
                hi = self.integer()
            brace = self.expect("{")
            body = self.block(brace, ("}",))
            self.expect("}")
            return RawLoop(t, lo, hi, body)
        if t.kind == "ident" and t.value == "ref":
            self.advance()
            return RawRef(t, self.ident("EET name"))
        sender = self.ident("sender component or step keyword")
        self.expect("->")
        receiver = self.ident("receiver component")
        self.expect(":")
        name = self.ident("message name")
        self.expect("(")
        args = []
        if not self.at(")"):
            args.append(self.ident("argument"))
            while self.at(","):
                self.advance()
                args.append(self.ident("argument"))
        self.expect(")")
        return RawMsg(sender, receiver, name, args)

    def predicate(self) -> list:
        atoms = [self.atom()]
        while self.at("&&"):
            self.advance()
            atoms.append(self.atom())
        return atoms

    def atom(self):
        left = self.ident("predicate term")
        if not (self.at("==") or self.at("!=")):
            raise _SyntaxError(self.tok, f"expected '==' or '!=', found {_describe(self.tok)}")
        op = self.advance().value
        return (left, op, self.ident("predicate term"))


def _describe(t: Token) -> str:
    if t.kind == "eof":
        return "end of input"
    if t.kind == "nl":
        return "end of line"
    return repr(t.value)


# -- semantic analysis -------------------------------------------------------

class _Builder:
    def __init__(self, p: _Parser):
        self.p = p
        self.errors: list[ParseError] = []
        self.domains: dict = {}
        self.components: list = []
        self.sigs: dict = {}
        self.eets: dict = {}

    def err(self, tok: Token, kind: ErrorKind, detail: str):
        self.errors.append(ParseError(tok.line, tok.col, kind, detail))

    def build(self):
        p = self.p
        for name, values in p.domains:
            if name.value in self.domains:
                self.err(name, ErrorKind.DuplicateName, f"domain {name.value} declared twice")
                continue
            seen = []
            for v in values:
                if v.value in seen:
                    self.err(v, ErrorKind.DuplicateName, f"value {v.value} repeated in domain {name.value}")
                else:
                    seen.append(v.value)
            self.domains[name.value] = tuple(seen)
        for c in p.components:
            if c.value in self.components:
                self.err(c, ErrorKind.DuplicateName, f"component {c.value} declared twice")
            else:
                self.components.append(c.value)
        for name, params in p.messages:
            if name.value in self.sigs:
                self.err(name, ErrorKind.DuplicateName, f"message {name.value} declared twice")
                continue
            sig, ok = [], True
            for pname, dom in params:
                if any(pname.value == q for q, _ in sig):
                    self.err(pname, ErrorKind.DuplicateName, f"parameter {pname.value} repeated in {name.value}")
                    ok = False
                if dom.value not in self.domains:
                    self.err(dom, ErrorKind.UnknownName, f"unknown domain {dom.value}")
                    ok = False
                sig.append((pname.value, dom.value))
            if ok:
                self.sigs[name.value] = tuple(sig)
            else:
                self.sigs[name.value] = None
        eet_names = set()
        for name, _ in p.eets:
            if name.value in eet_names:
                self.err(name, ErrorKind.DuplicateName, f"EET {name.value} declared twice")
            eet_names.add(name.value)
        self.eet_names = eet_names
        refs: dict = {}
        for name, body in p.eets:
            if name.value in self.eets:
                continue
            self.param_domains: dict = {}
            self.refs: list = []
            expr = self.block(body)
            self.eets[name.value] = expr
            refs[name.value] = self.refs
        self.check_cycles(refs)
        sigs = {k: v for k, v in self.sigs.items() if v is not None}
        return Document(self.domains, tuple(self.components), sigs, self.eets)

    def check_cycles(self, refs: dict):
        state: dict = {}
        reported = set()

        def visit(n, path):
            state[n] = "active"
            for tok in refs.get(n, ()):
                m = tok.value
                if state.get(m) == "active":
                    cycle = path[path.index(m):] + [m] if m in path else [n, m]
                    key = frozenset(cycle)
                    if key not in reported:
                        reported.add(key)
                        self.err(tok, ErrorKind.CyclicRef, "cyclic reference " + " -> ".join(cycle))
                elif m in refs and state.get(m) is None:
                    visit(m, path + [m])
            state[n] = "done"

        for n in refs:
            if state.get(n) is None:
                visit(n, [n])

    def block(self, blk: RawBlock) -> Expr:
        expr = seq(*[self.step(s) for s in blk.steps])
        if not blk.wheres:
            return expr
        local = param_names(expr)
        atoms = [self.atom(left, op, right, local) for left, op, right in blk.wheres]
        atoms = [a for a in atoms if a is not None]
        if not atoms:
            return expr
        return Guarded(expr, Predicate(tuple(atoms)))

    def atom(self, left: Token, op: str, right: Token, local: set):
        terms = []
        for tok in (left, right):
            if tok.value in local:
                terms.append((Param(tok.value), {self.param_domains.get(tok.value)} - {None}))
            else:
                doms = {d for d, vals in self.domains.items() if tok.value in vals}
                if not doms:
                    self.err(tok, ErrorKind.UnknownName,
                             f"{tok.value} is neither a parameter of this block nor a domain value")
                    return None
                terms.append((Const(tok.value), doms))
        (lt, ld), (rt, rd) = terms
        if ld and rd and not (ld & rd):
            self.err(left, ErrorKind.DomainMismatch, f"cannot compare {left.value} with {right.value}")
            return None
        return Atom(lt, op, rt)

    def step(self, s) -> Expr:
        if isinstance(s, RawMsg):
            return self.message(s)
        if isinstance(s, RawChoice):
            if not s.alternatives:
                self.err(s.start, ErrorKind.EmptyChoice, "choice needs at least one alternative")
                return Empty()
            return Choice(tuple(self.block(b) for b in s.alternatives))
        if isinstance(s, RawPar):
            parts = [self.block(b) for b in s.branches]
            out = parts[-1]
            for part in reversed(parts[:-1]):
                out = Interleave(part, out)
            return out
        if isinstance(s, RawLoop):
            body = self.block(s.body)
            if s.max is not None and s.max < s.min:
                self.err(s.start, ErrorKind.BadLoopBounds, f"loop bounds {s.min}..{s.max} are reversed")
                return body
            return Loop(body, s.min, s.max)
        if isinstance(s, RawRef):
            if s.name.value not in self.eet_names:
                self.err(s.name, ErrorKind.UnknownName, f"unknown EET {s.name.value}")
            else:
                self.refs.append(s.name)
            return Ref(s.name.value)
        raise AssertionError(s)

    def message(self, s: RawMsg) -> Expr:
        for who in (s.sender, s.receiver):
            if who.value not in self.components:
                self.err(who, ErrorKind.UnknownName, f"unknown component {who.value}")
        if s.name.value not in self.sigs:
            self.err(s.name, ErrorKind.UnknownName, f"unknown message {s.name.value}")
            return Message(s.sender.value, s.receiver.value, s.name.value, tuple(Param(a.value) for a in s.args))
        sig = self.sigs[s.name.value]
        if sig is None:
            return Empty()
        if len(sig) != len(s.args):
            self.err(s.name, ErrorKind.ArityMismatch,
                     f"{s.name.value} expects {len(sig)} arguments, got {len(s.args)}")
            return Message(s.sender.value, s.receiver.value, s.name.value, tuple(Param(a.value) for a in s.args))
        args = []
        for tok, (_, dom) in zip(s.args, sig):
            if tok.value in self.domains.get(dom, ()):
                args.append(Const(tok.value))
                continue
            known = self.param_domains.setdefault(tok.value, dom)
            if known != dom:
                self.err(tok, ErrorKind.DomainMismatch,
                         f"parameter {tok.value} used as {dom} but earlier as {known}")
            args.append(Param(tok.value))
        return Message(s.sender.value, s.receiver.value, s.name.value, tuple(args))


def parse(source: str) -> Document:
    """Parse ``.eet`` source text.

    Raises ParseErrors listing every syntax and semantic error found; a
    partial Document is never returned.
    """
    p = _Parser(source)
    p.parse()
    b = _Builder(p)
    doc = b.build()
    errors = sorted(p.errors + b.errors)
    if errors:
        raise ParseErrors(errors)
    return doc


def parse_file(path) -> Document:
    with open(path, encoding="utf-8") as f:
        return parse(f.read())


# -- reference resolution ----------------------------------------------------

def resolve(doc: Document, name: str) -> Expr:
    """The named EET with every ``ref`` inlined.

    Parameters of an inlined EET are closed at its own definition, so they are
    renamed ``name@k`` (k counts inlinings in pre-order) to keep them apart
    from same-named parameters elsewhere.
    """
    if name not in doc.eets:
        raise UnknownName(f"no EET named {name!r}")
    counter = itertools.count(1)

    def inline(e: Expr, suffix: str, stack: tuple) -> Expr:
        if isinstance(e, Ref):
            if e.name not in doc.eets:
                raise UnknownName(f"no EET named {e.name!r}")
            if e.name in stack:
                raise UnknownName(f"cyclic reference to {e.name!r}")
            return inline(doc.eets[e.name], f"@{next(counter)}", stack + (e.name,))
        if isinstance(e, Message):
            if not suffix:
                return e
            return Message(e.sender, e.receiver, e.message,
                           tuple(Param(a.name + suffix) if isinstance(a, Param) else a for a in e.args))
        if isinstance(e, Seq):
            return Seq(inline(e.left, suffix, stack), inline(e.right, suffix, stack))
        if isinstance(e, Interleave):
            return Interleave(inline(e.left, suffix, stack), inline(e.right, suffix, stack))
        if isinstance(e, Choice):
            return Choice(tuple(inline(a, suffix, stack) for a in e.alternatives))
        if isinstance(e, Loop):
            return Loop(inline(e.body, suffix, stack), e.min, e.max)
        if isinstance(e, Guarded):
            pred = e.predicate
            if suffix:
                pred = Predicate(tuple(Atom(_suffixed(a.left, suffix), a.op, _suffixed(a.right, suffix))
                                       for a in pred.atoms))
            return Guarded(inline(e.body, suffix, stack), pred)
        return e

    return inline(doc.eets[name], "", (name,))


def _suffixed(t, suffix):
    return Param(t.name + suffix) if isinstance(t, Param) else t


def display_name(param: str) -> str:
    """Declared name of a possibly renamed parameter."""
    return param.split("@", 1)[0]


# -- pretty printing ---------------------------------------------------------

def format_document(doc: Document) -> str:
    lines = []
    for name, values in doc.domains.items():
        lines.append(f"domain {name} = {{ {', '.join(values)} }}")
    if doc.components:
        lines.append(f"component {', '.join(doc.components)}")
    for name, sig in doc.message_sigs.items():
        lines.append(f"msg {name}({', '.join(f'{p}: {d}' for p, d in sig)})")
    for name, body in doc.eets.items():
        lines.append("")
        lines.append(f"eet {name} {{")
        lines.extend(_block_lines(body, 1))
        lines.append("}")
    return "\n".join(lines) + "\n"


def format_expr(e: Expr) -> str:
    return "\n".join(_block_lines(e, 0)) + "\n"


def _block_lines(e: Expr, depth: int) -> list[str]:
    """Lines for ``e`` as the complete contents of a block."""
    pad = "    " * depth
    if isinstance(e, Guarded):
        return _block_lines(e.body, depth) + [f"{pad}where {e.predicate}"]
    out = []
    for step in _flatten_seq(e):
        out.extend(_step_lines(step, depth))
    return out


def _flatten_seq(e: Expr) -> list:
    if isinstance(e, Seq):
        return _flatten_seq(e.left) + _flatten_seq(e.right)
    if isinstance(e, Empty):
        return []
    return [e]


def _step_lines(e: Expr, depth: int) -> list[str]:
    pad = "    " * depth
    if isinstance(e, Message):
        return [f"{pad}{e.sender} -> {e.receiver} : {e.message}({', '.join(str(a) for a in e.args)})"]
    if isinstance(e, Ref):
        return [f"{pad}ref {e.name}"]
    if isinstance(e, Loop):
        return [f"{pad}loop {e.bounds} {{"] + _block_lines(e.body, depth + 1) + [f"{pad}}}"]
    if isinstance(e, Choice):
        return _alternatives("choice", e.alternatives, depth)
    if isinstance(e, Interleave):
        branches = []
        while isinstance(e, Interleave):
            branches.append(e.left)
            e = e.right
        return _alternatives("par", branches + [e], depth)
    if isinstance(e, Guarded):
        # a guard in the middle of a sequence needs a block of its own
        return _alternatives("choice", [e], depth)
    if isinstance(e, Seq):
        return _block_lines(e, depth)
    raise ValueError(f"{type(e).__name__} has no textual form")


def _alternatives(keyword: str, branches, depth: int) -> list[str]:
    pad = "    " * depth
    out = [f"{pad}{keyword} {{"]
    for i, b in enumerate(branches):
        if i:
            out.append(f"{pad}|")
        out.extend(_block_lines(b, depth + 1))
    if len(out) == 1:
        # "choice { }" is an error; two empty alternatives denote the same {ε}
        out.append(f"{pad}|")
    out.append(f"{pad}}}")
    return out


def refs_in(e: Expr) -> set[str]:
    out = set()
    stack = [e]
    while stack:
        n = stack.pop()
        if isinstance(n, Ref):
            out.add(n.name)
        stack.extend(children(n))
    return out
