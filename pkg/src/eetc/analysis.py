"""Conformance questions over EET languages.

Every check returns a CheckReport. Witnesses are shortest traces, ties broken
lexicographically, so reports are reproducible byte for byte.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import automaton as fa
from .model import Document, Expr, Interaction, Trace
from .semantics import compile
from .tracelog import check_declared


class Question(enum.Enum):
    Member = "Member"
    LooseSegment = "LooseSegment"
    LooseEmbed = "LooseEmbed"
    Refines = "Refines"
    ConjoinNonEmpty = "ConjoinNonEmpty"
    Equivalent = "Equivalent"


@dataclass(frozen=True)
class CheckReport:
    question: Question
    holds: bool
    witness: Optional[Trace] = None
    stats: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "question": self.question.value,
            "holds": self.holds,
            "witness": None if self.witness is None else self.witness.lines(),
            "stats": {k: self.stats[k] for k in sorted(self.stats)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _stats(**automata) -> dict:
    out = {}
    for name, a in automata.items():
        out[f"{name}_states"] = a.n_states
        out[f"{name}_transitions"] = a.n_transitions
    return out


def member(t: Sequence[Interaction], e: Expr, doc: Document) -> CheckReport:
    """Complete reading: is ``t`` one of the traces ``e`` allows?"""
    t = Trace(tuple(t))
    check_declared(doc, t)
    a = compile(e, doc)
    return CheckReport(Question.Member, a.accepts(t), None, _stats(eet=a))


def member_embedded(t: Sequence[Interaction], e: Expr, doc: Document) -> CheckReport:
    """Does some trace of ``e`` contain ``t`` as a scattered subsequence?"""
    t = Trace(tuple(t))
    check_declared(doc, t)
    return _embed(fa.word(t.events), compile(e, doc))


def loose_consistent(scenario: Expr, behavior: Expr, mode: str, doc: Document) -> CheckReport:
    """Loose reading of ``scenario`` against ``behavior``.

    ``segment``: some trace is in both languages. ``embed``: some trace of
    ``behavior`` contains a trace of ``scenario`` with arbitrary other
    interactions in between.
    """
    s = compile(scenario, doc)
    b = compile(behavior, doc)
    if mode == "segment":
        prod = fa.intersect(s, b)
        empty, w = fa.is_empty(prod)
        return CheckReport(Question.LooseSegment, not empty, w,
                           _stats(scenario=s, behavior=b, product=prod))
    if mode == "embed":
        return _embed(s, b)
    raise ValueError(f"unknown mode {mode!r} (expected 'segment' or 'embed')")


def _embed(s: fa.InteractionAutomaton, b: fa.InteractionAutomaton) -> CheckReport:
    gappy = fa.with_gaps(s, s.alphabet | b.alphabet)
    prod = fa.intersect(gappy, b)
    empty, w = fa.is_empty(prod)
    return CheckReport(Question.LooseEmbed, not empty, w,
                       _stats(scenario=s, behavior=b, product=prod))


def _difference(x: fa.InteractionAutomaton, y: fa.InteractionAutomaton):
    comp = fa.complement(y, x.alphabet)
    prod = fa.intersect(x, comp)
    return comp, prod, fa.shortest_word(prod)


def refines(concrete: Expr, abstract: Expr, doc: Document) -> CheckReport:
    """Language inclusion L(concrete) <= L(abstract); witness when it fails."""
    c = compile(concrete, doc)
    a = compile(abstract, doc)
    comp, prod, w = _difference(c, a)
    return CheckReport(Question.Refines, w is None, w,
                       _stats(concrete=c, abstract=a, complement=comp, product=prod))


def conjoin_nonempty(es: Sequence[Expr], doc: Document) -> CheckReport:
    if not es:
        raise ValueError("conjunction of no EETs")
    parts = [compile(e, doc) for e in es]
    prod = parts[0]
    for p in parts[1:]:
        prod = fa.intersect(prod, p)
    empty, w = fa.is_empty(prod)
    stats = {f"operand{i}_{k}": v for i, p in enumerate(parts) for k, v in p.stats().items()}
    stats.update(_stats(product=prod))
    return CheckReport(Question.ConjoinNonEmpty, not empty, w, stats)


def equivalent(x: Expr, y: Expr, doc: Document) -> CheckReport:
    a = compile(x, doc)
    b = compile(y, doc)
    _, _, w1 = _difference(a, b)
    _, _, w2 = _difference(b, a)
    found = [w for w in (w1, w2) if w is not None]
    w = min(found, key=lambda t: (len(t), t)) if found else None
    return CheckReport(Question.Equivalent, w is None, w, _stats(left=a, right=b))
