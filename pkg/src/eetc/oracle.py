"""Bounded enumeration of EET trace sets, straight from the inductive rules.

This is the reference the automaton compiler is tested against, so it
deliberately shares none of that code: parameters are carried in an
environment and expanded at scope roots, and every operator works on explicit
sets of tuples capped at the length bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ArityMismatch, BoundTooLarge, UnknownMessage, UnresolvedRef
from .model import (
    Choice, Dead, Document, Empty, Expr, Guarded, Interaction, Interleave, Loop,
    Message, Param, Ref, Seq, Trace,
)

MAX_BOUND = 12


@dataclass(frozen=True)
class BoundedDenotation:
    bound: int
    traces: tuple  # of Trace, sorted
    exhaustive_to_bound: bool = True

    def __contains__(self, t) -> bool:
        return _as_trace(t) in self._index

    def __len__(self):
        return len(self.traces)

    @property
    def _index(self) -> frozenset:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = frozenset(self.traces)
            object.__setattr__(self, "_idx", idx)
        return idx


def _as_trace(t) -> Trace:
    return t if isinstance(t, Trace) else Trace(tuple(t))


def denote(e: Expr, doc: Document, bound: int) -> BoundedDenotation:
    """Every trace of ``e`` with length at most ``bound``."""
    if bound > MAX_BOUND:
        raise BoundTooLarge(f"bound {bound} exceeds {MAX_BOUND}")
    if bound < 0:
        raise ValueError("bound must be non-negative")
    words = _Enumerator(doc, bound).scope(e, {})
    return BoundedDenotation(bound, tuple(sorted(Trace(w) for w in words)))


class _Enumerator:
    def __init__(self, doc: Document, bound: int):
        self.doc = doc
        self.bound = bound

    def domain_of(self, e: Expr) -> dict:
        """Parameter -> values, read off message signatures in ``e``."""
        out = {}
        stack = [e]
        while stack:
            n = stack.pop()
            if isinstance(n, Message):
                sig = self.doc.message_sigs.get(n.message)
                if sig is None:
                    raise UnknownMessage(n.message)
                if len(sig) != len(n.args):
                    raise ArityMismatch(n.message)
                for a, (_, dom) in zip(n.args, sig):
                    if isinstance(a, Param):
                        out[a.name] = self.doc.domains[dom]
            elif isinstance(n, (Seq, Interleave)):
                stack += [n.left, n.right]
            elif isinstance(n, Choice):
                stack += list(n.alternatives)
            elif isinstance(n, (Loop, Guarded)):
                stack.append(n.body)
        return out

    def level_params(self, e: Expr) -> set:
        """Parameters that occur in ``e`` but not inside a nested loop."""
        if isinstance(e, Message):
            return {a.name for a in e.args if isinstance(a, Param)}
        if isinstance(e, (Seq, Interleave)):
            return self.level_params(e.left) | self.level_params(e.right)
        if isinstance(e, Choice):
            return set().union(*(self.level_params(a) for a in e.alternatives))
        if isinstance(e, Guarded):
            names = {t.name for at in e.predicate.atoms for t in (at.left, at.right) if isinstance(t, Param)}
            return names | self.level_params(e.body)
        return set()

    def scope(self, e: Expr, env: dict) -> set:
        """Union over all assignments of the parameters this scope owns."""
        names = sorted(self.level_params(e) - env.keys())
        if not names:
            return self.ground(e, env)
        doms = self.domain_of(e)
        out = set()
        for values in itertools.product(*(doms[n] for n in names)):
            out |= self.ground(e, {**env, **dict(zip(names, values))})
        return out

    def ground(self, e: Expr, env: dict) -> set:
        n = self.bound
        if isinstance(e, Empty):
            return {()}
        if isinstance(e, Dead):
            return set()
        if isinstance(e, Ref):
            raise UnresolvedRef(e.name)
        if isinstance(e, Message):
            if n < 1:
                return set()
            args = tuple(env[a.name] if isinstance(a, Param) else a.value for a in e.args)
            return {(Interaction(e.sender, e.receiver, e.message, args),)}
        if isinstance(e, Choice):
            out = set()
            for alt in e.alternatives:
                out |= self.ground(alt, env)
            return out
        if isinstance(e, Seq):
            left = self.ground(e.left, env)
            right = self.ground(e.right, env)
            return {u + v for u in left for v in right if len(u) + len(v) <= n}
        if isinstance(e, Interleave):
            left = self.ground(e.left, env)
            right = self.ground(e.right, env)
            out = set()
            for u in left:
                for v in right:
                    if len(u) + len(v) <= n:
                        out |= interleavings(u, v)
            return out
        if isinstance(e, Guarded):
            for at in e.predicate.atoms:
                lv = env[at.left.name] if isinstance(at.left, Param) else at.left.value
                rv = env[at.right.name] if isinstance(at.right, Param) else at.right.value
                if (lv == rv) != (at.op == "=="):
                    return set()
            return self.ground(e.body, env)
        if isinstance(e, Loop):
            # each iteration chooses the loop-local parameters afresh
            body = self.scope(e.body, env)
            result = {()} if e.min == 0 else set()
            layer = {()}
            k = 0
            while e.max is None or k < e.max:
                k += 1
                nxt = {u + v for u in layer for v in body if len(u) + len(v) <= n}
                if nxt == layer:
                    # every later layer is the same set
                    result |= layer
                    break
                if not nxt:
                    break
                layer = nxt
                if k >= e.min:
                    result |= layer
            return result
        raise TypeError(f"unexpected node {type(e).__name__}")


def interleavings(u: tuple, v: tuple) -> set:
    """Every order-preserving merge of ``u`` and ``v``."""
    total = len(u) + len(v)
    out = set()
    for positions in itertools.combinations(range(total), len(u)):
        pos = set(positions)
        iu, iv = iter(u), iter(v)
        out.add(tuple(next(iu) if i in pos else next(iv) for i in range(total)))
    return out

