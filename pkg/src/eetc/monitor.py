"""Online conformance monitoring against a complete interaction description."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import automaton as fa
from .errors import UnknownInteraction
from .model import Document, Expr, Interaction
from .semantics import compile

ACCEPTED_LIVE = "ACCEPTED-LIVE"
ACCEPTED_FINAL = "ACCEPTED-FINAL"
PENDING = "PENDING"
VIOLATED = "VIOLATED"


@dataclass(frozen=True, eq=False)
class CompiledMonitor:
    """Deterministic, complete automaton plus precomputed liveness."""

    doc: Document
    automaton: fa.InteractionAutomaton
    sink: int
    live: frozenset  # states with a non-empty continuation into an accepting state

    @classmethod
    def build(cls, e: Expr, doc: Document) -> "CompiledMonitor":
        d = fa.determinize(compile(e, doc))
        delta = list(d.delta)
        sink = next((s for s in d.states if s not in d.accepting
                     and all(ts == (s,) for ts in d.delta[s].values())), None)
        if sink is None:
            sink = len(delta)
            delta.append({a: (sink,) for a in d.sorted_alphabet})
        aut = fa.InteractionAutomaton(d.alphabet, len(delta), d.initial, d.accepting, tuple(delta))
        return cls(doc, aut, sink, _live_states(aut))

    def target(self, state: int, ev: Interaction) -> int:
        return self.automaton.delta[state].get(ev, (self.sink,))[0]


def _live_states(a: fa.InteractionAutomaton) -> frozenset:
    # backwards closure from predecessors of accepting states
    back: dict = {}
    for p, row in enumerate(a.delta):
        for ts in row.values():
            for q in ts:
                back.setdefault(q, set()).add(p)
    live = set()
    stack = []
    for f in a.accepting:
        for p in back.get(f, ()):
            if p not in live:
                live.add(p)
                stack.append(p)
    while stack:
        q = stack.pop()
        for p in back.get(q, ()):
            if p not in live:
                live.add(p)
                stack.append(p)
    return frozenset(live)


@dataclass(frozen=True)
class MonitorState:
    monitor: CompiledMonitor
    current: int
    consumed: int
    in_language: bool
    extensible: bool

    @property
    def verdict(self) -> str:
        if self.in_language:
            return ACCEPTED_LIVE if self.extensible else ACCEPTED_FINAL
        return PENDING if self.extensible else VIOLATED


def _at(m: CompiledMonitor, state: int, consumed: int) -> MonitorState:
    return MonitorState(m, state, consumed, state in m.automaton.accepting, state in m.live)


def start(e: Expr, doc: Document) -> MonitorState:
    m = CompiledMonitor.build(e, doc)
    (init,) = m.automaton.initial
    return _at(m, init, 0)


def step(s: MonitorState, ev: Interaction) -> MonitorState:
    why = s.monitor.doc.declares(ev)
    if why is not None:
        raise UnknownInteraction(f"{ev}: {why}", position=s.consumed)
    return _at(s.monitor, s.monitor.target(s.current, ev), s.consumed + 1)


def run_log(e: Expr, doc: Document, log: Iterable[Interaction]):
    """Fold ``step`` over ``log``.

    Returns the final state and one ``{"i", "event", "verdict"}`` record per
    event (``i`` counts from 1).
    """
    s = start(e, doc)
    return fold(s, log)


def fold(s: MonitorState, log: Iterable[Interaction]):
    records = []
    for ev in log:
        s = step(s, ev)
        records.append({"i": s.consumed, "event": str(ev), "verdict": s.verdict})
    return s, records


def reset(s: MonitorState) -> MonitorState:
    (init,) = s.monitor.automaton.initial
    return _at(s.monitor, init, 0)
