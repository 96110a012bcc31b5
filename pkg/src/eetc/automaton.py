"""Epsilon-free NFAs over interaction alphabets, and the usual algebra.

States are the integers ``0 .. n_states-1``. Every construction iterates
labels in sorted order and finishes with a canonical renumbering, so the same
inputs always give the same automaton (Interaction hashes vary between runs;
nothing here depends on them).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .model import Interaction, Trace


@dataclass(frozen=True, eq=False)
class InteractionAutomaton:
    alphabet: frozenset
    n_states: int
    initial: frozenset
    accepting: frozenset
    delta: tuple  # per state: {label: tuple of successor states}

    def __post_init__(self):
        assert len(self.delta) == self.n_states
        for row in self.delta:
            for label, targets in row.items():
                if label not in self.alphabet:
                    raise ValueError(f"transition label {label} outside the alphabet")
                if any(not 0 <= t < self.n_states for t in targets):
                    raise ValueError("transition to an unknown state")

    @property
    def states(self) -> range:
        return range(self.n_states)

    @cached_property
    def deterministic(self) -> bool:
        return len(self.initial) == 1 and all(
            len(ts) == 1 for row in self.delta for ts in row.values())

    @property
    def transitions(self) -> list[tuple[int, Interaction, int]]:
        return [(p, a, q) for p, row in enumerate(self.delta)
                for a in sorted(row) for q in row[a]]

    @cached_property
    def n_transitions(self) -> int:
        return sum(len(ts) for row in self.delta for ts in row.values())

    @cached_property
    def sorted_alphabet(self) -> tuple:
        return tuple(sorted(self.alphabet))

    def step(self, current: Iterable[int], label: Interaction) -> frozenset:
        out = set()
        for s in current:
            out.update(self.delta[s].get(label, ()))
        return frozenset(out)

    def accepts(self, word: Iterable[Interaction]) -> bool:
        current = self.initial
        for a in word:
            current = self.step(current, a)
            if not current:
                return False
        return not current.isdisjoint(self.accepting)

    def stats(self) -> dict:
        return {"states": self.n_states, "transitions": self.n_transitions}

    def __repr__(self):
        return (f"<InteractionAutomaton states={self.n_states} transitions={self.n_transitions} "
                f"alphabet={len(self.alphabet)}>")


class _Builder:
    """Mutable scratch automaton used inside the constructions."""

    def __init__(self, alphabet=()):
        self.alphabet = set(alphabet)
        self.delta: list[dict] = []
        self.initial: list[int] = []
        self.accepting: set[int] = set()

    def state(self) -> int:
        self.delta.append({})
        return len(self.delta) - 1

    def edge(self, p: int, a: Interaction, q: int):
        self.alphabet.add(a)
        self.delta[p].setdefault(a, set()).add(q)

    def embed(self, aut: InteractionAutomaton) -> int:
        """Copy ``aut`` in; returns the offset of its states."""
        off = len(self.delta)
        for row in aut.delta:
            self.delta.append({a: {q + off for q in ts} for a, ts in row.items()})
        self.alphabet |= aut.alphabet
        return off

    def freeze(self, trim=True) -> InteractionAutomaton:
        return _canonical(self.alphabet, self.delta, self.initial, self.accepting, trim)


def _canonical(alphabet, delta, initial, accepting, trim=True) -> InteractionAutomaton:
    """Renumber states in breadth-first order from the initial states.

    Unreachable states are always dropped; with ``trim`` states that cannot
    reach an accepting state are dropped as well.
    """
    if trim:
        alive = _coreachable(delta, accepting)
    else:
        alive = set(range(len(delta)))
    order: dict[int, int] = {}
    queue = deque()
    for s in sorted(set(initial)):
        if s in alive and s not in order:
            order[s] = len(order)
            queue.append(s)
    while queue:
        p = queue.popleft()
        row = delta[p]
        for a in sorted(row):
            for q in sorted(row[a]):
                if q in alive and q not in order:
                    order[q] = len(order)
                    queue.append(q)
    new_delta = []
    for old in order:  # insertion order == new numbering
        row = {}
        for a in sorted(delta[old]):
            ts = tuple(sorted(order[q] for q in delta[old][a] if q in order))
            if ts:
                row[a] = ts
        new_delta.append(row)
    return InteractionAutomaton(
        alphabet=frozenset(alphabet),
        n_states=len(order),
        initial=frozenset(order[s] for s in initial if s in order),
        accepting=frozenset(order[s] for s in accepting if s in order),
        delta=tuple(new_delta),
    )


def _coreachable(delta, accepting) -> set:
    back: dict[int, set] = {}
    for p, row in enumerate(delta):
        for ts in row.values():
            for q in ts:
                back.setdefault(q, set()).add(p)
    seen = set(accepting)
    stack = list(accepting)
    while stack:
        q = stack.pop()
        for p in back.get(q, ()):
            if p not in seen:
                seen.add(p)
                stack.append(p)
    return seen


# -- primitive languages -----------------------------------------------------

def empty_language(alphabet=()) -> InteractionAutomaton:
    return _Builder(alphabet).freeze()


def epsilon(alphabet=()) -> InteractionAutomaton:
    """Accepts exactly the empty trace."""
    b = _Builder(alphabet)
    s = b.state()
    b.initial.append(s)
    b.accepting.add(s)
    return b.freeze()


def symbol(a: Interaction) -> InteractionAutomaton:
    return word([a])


def word(events: Sequence[Interaction]) -> InteractionAutomaton:
    b = _Builder()
    prev = b.state()
    b.initial.append(prev)
    for a in events:
        nxt = b.state()
        b.edge(prev, a, nxt)
        prev = nxt
    b.accepting.add(prev)
    return b.freeze()


def universal(alphabet) -> InteractionAutomaton:
    """Accepts every trace over ``alphabet``."""
    b = _Builder(alphabet)
    s = b.state()
    b.initial.append(s)
    b.accepting.add(s)
    for a in sorted(alphabet):
        b.edge(s, a, s)
    return b.freeze()


def accepts_epsilon(a: InteractionAutomaton) -> bool:
    return not a.initial.isdisjoint(a.accepting)


# -- regular operations ------------------------------------------------------

def union(*parts: InteractionAutomaton) -> InteractionAutomaton:
    b = _Builder()
    for part in parts:
        off = b.embed(part)
        b.initial.extend(s + off for s in sorted(part.initial))
        b.accepting.update(s + off for s in part.accepting)
    return b.freeze()


def concat(x: InteractionAutomaton, y: InteractionAutomaton) -> InteractionAutomaton:
    b = _Builder()
    ox = b.embed(x)
    oy = b.embed(y)
    # leave x from any accepting state along y's first moves
    for f in sorted(x.accepting):
        for i in sorted(y.initial):
            for a in sorted(y.delta[i]):
                for q in y.delta[i][a]:
                    b.edge(f + ox, a, q + oy)
    b.initial.extend(s + ox for s in sorted(x.initial))
    if accepts_epsilon(x):
        b.initial.extend(s + oy for s in sorted(y.initial))
    b.accepting.update(s + oy for s in y.accepting)
    if accepts_epsilon(y):
        b.accepting.update(s + ox for s in x.accepting)
    return b.freeze()


def star(x: InteractionAutomaton) -> InteractionAutomaton:
    """Kleene closure: a fresh accepting start state plus back edges."""
    b = _Builder(x.alphabet)
    start = b.state()
    ox = b.embed(x)
    first = [(a, q + ox) for i in sorted(x.initial) for a in sorted(x.delta[i]) for q in x.delta[i][a]]
    for a, q in first:
        b.edge(start, a, q)
        for f in sorted(x.accepting):
            b.edge(f + ox, a, q)
    b.initial.append(start)
    b.accepting.add(start)
    b.accepting.update(s + ox for s in x.accepting)
    return b.freeze()


def optional(x: InteractionAutomaton) -> InteractionAutomaton:
    return union(epsilon(x.alphabet), x)


def repeat(x: InteractionAutomaton, lo: int, hi: Optional[int]) -> InteractionAutomaton:
    """Concatenations of k words of ``x`` with lo <= k <= hi (hi None: unbounded)."""
    out = epsilon(x.alphabet)
    for _ in range(lo):
        out = concat(out, x)
    if hi is None:
        return concat(out, star(x))
    tail = epsilon(x.alphabet)
    for _ in range(hi - lo):
        # (x(x(x)?)?)? keeps the tail linear in hi - lo
        tail = optional(concat(x, tail))
    return concat(out, tail)


def shuffle(x: InteractionAutomaton, y: InteractionAutomaton) -> InteractionAutomaton:
    """All interleavings: either side moves on its own, no synchronisation."""
    b = _Builder(x.alphabet | y.alphabet)
    ids: dict[tuple, int] = {}
    queue = deque()

    def get(p, q):
        if (p, q) not in ids:
            ids[(p, q)] = b.state()
            queue.append((p, q))
        return ids[(p, q)]

    for p in sorted(x.initial):
        for q in sorted(y.initial):
            b.initial.append(get(p, q))
    while queue:
        p, q = queue.popleft()
        s = ids[(p, q)]
        if p in x.accepting and q in y.accepting:
            b.accepting.add(s)
        for a in sorted(x.delta[p]):
            for p2 in x.delta[p][a]:
                b.edge(s, a, get(p2, q))
        for a in sorted(y.delta[q]):
            for q2 in y.delta[q][a]:
                b.edge(s, a, get(p, q2))
    return b.freeze()


def intersect(x: InteractionAutomaton, y: InteractionAutomaton) -> InteractionAutomaton:
    """Product automaton; the alphabet is the union of both alphabets."""
    b = _Builder(x.alphabet | y.alphabet)
    ids: dict[tuple, int] = {}
    queue = deque()

    def get(p, q):
        if (p, q) not in ids:
            ids[(p, q)] = b.state()
            queue.append((p, q))
        return ids[(p, q)]

    for p in sorted(x.initial):
        for q in sorted(y.initial):
            b.initial.append(get(p, q))
    while queue:
        p, q = queue.popleft()
        s = ids[(p, q)]
        if p in x.accepting and q in y.accepting:
            b.accepting.add(s)
        rx, ry = x.delta[p], y.delta[q]
        for a in sorted(rx.keys() & ry.keys()):
            for p2 in rx[a]:
                for q2 in ry[a]:
                    b.edge(s, a, get(p2, q2))
    return b.freeze()


def with_gaps(x: InteractionAutomaton, alphabet) -> InteractionAutomaton:
    """Self-loop on every symbol at every state: words containing a word of
    ``x`` as a (scattered) subsequence."""
    alphabet = set(alphabet) | x.alphabet
    b = _Builder(alphabet)
    off = b.embed(x)
    for s in range(x.n_states):
        for a in sorted(alphabet):
            b.edge(s + off, a, s + off)
    b.initial.extend(s + off for s in sorted(x.initial))
    b.accepting.update(s + off for s in x.accepting)
    return b.freeze()


def determinize(x: InteractionAutomaton, alphabet=()) -> InteractionAutomaton:
    """Subset construction, completed with a sink over ``x.alphabet | alphabet``.

    The result has exactly one initial state even for the empty language.
    """
    sigma = sorted(set(alphabet) | x.alphabet)
    start = frozenset(x.initial)
    ids = {start: 0}
    order = [start]
    delta = []
    i = 0
    while i < len(order):
        cur = order[i]
        row = {}
        for a in sigma:
            nxt = x.step(cur, a)
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            row[a] = (ids[nxt],)
        delta.append(row)
        i += 1
    accepting = frozenset(ids[s] for s in order if not s.isdisjoint(x.accepting))
    return InteractionAutomaton(frozenset(sigma), len(order), frozenset({0}), accepting, tuple(delta))


def complement(x: InteractionAutomaton, alphabet=()) -> InteractionAutomaton:
    """Traces over ``x.alphabet | alphabet`` that ``x`` rejects."""
    d = determinize(x, alphabet)
    return InteractionAutomaton(d.alphabet, d.n_states, d.initial,
                                frozenset(d.states) - d.accepting, d.delta)


def shortest_word(x: InteractionAutomaton) -> Optional[Trace]:
    """Shortest accepted trace, ties broken lexicographically; None if empty.

    Breadth-first search over subsets of states (an on-the-fly subset
    construction) with sorted labels: each subset is first reached by the
    least word leading to it, so the first accepting subset dequeued carries
    the least accepted word.
    """
    start = frozenset(x.initial)
    if not start:
        return None
    parent: dict[frozenset, Optional[tuple]] = {start: None}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        if p & x.accepting:
            events = []
            while parent[p] is not None:
                p, a = parent[p]
                events.append(a)
            return Trace(tuple(reversed(events)))
        labels = sorted({a for s in p for a in x.delta[s]})
        for a in labels:
            q = frozenset(t for s in p for t in x.delta[s].get(a, ()))
            if q not in parent:
                parent[q] = (p, a)
                queue.append(q)
    return None


def is_empty(x: InteractionAutomaton) -> tuple[bool, Optional[Trace]]:
    """(True, None) for the empty language, else (False, shortest witness)."""
    w = shortest_word(x)
    return (w is None, w)


def words(x: InteractionAutomaton, max_len: int) -> set[tuple]:
    """All accepted traces of length <= max_len, by explicit expansion."""
    out = set()
    frontier = {((), s) for s in x.initial}
    for _ in range(max_len + 1):
        nxt = set()
        for w, s in frontier:
            if s in x.accepting:
                out.add(w)
            if len(w) < max_len:
                for a, ts in x.delta[s].items():
                    for t in ts:
                        nxt.add((w + (a,), t))
        frontier = nxt
    return out


def dump(x: InteractionAutomaton) -> str:
    """Sorted edge list, stable across runs; suitable for golden files."""
    lines = [
        "initial: " + " ".join(str(s) for s in sorted(x.initial)),
        "accepting: " + " ".join(str(s) for s in sorted(x.accepting)),
    ]
    lines.extend(f"{p}\t-> {q} : {a}" for p, a, q in sorted(x.transitions, key=lambda t: (t[0], t[2], t[1])))
    return "\n".join(lines) + "\n"
