"""Compile closed EET expressions into interaction automata.

Parameter scoping: each parameter belongs to the outermost scope (the whole
expression, or one loop body) where it occurs outside any nested loop. Within
that scope all its occurrences share one value; a parameter that only occurs
inside a loop body is chosen afresh on every iteration. A Message with free
parameters therefore denotes the union over the assignments of its scope.

The union is taken as low in the tree as possible: a parameter is expanded at
the smallest node that covers all of its occurrences, which gives the same
language as expanding at the scope root but keeps the automata small.
"""

from __future__ import annotations

import itertools
from typing import Mapping

from . import automaton as fa
from .errors import UnresolvedRef
from .model import (
    Choice, Dead, Document, Empty, Expr, Guarded, Interleave, Loop, Message, Param, Ref,
    Seq, bind, children, free_params, walk,
)


def compile(e: Expr, doc: Document) -> fa.InteractionAutomaton:
    """Automaton accepting exactly the trace language of ``e``."""
    for n in walk(e):
        if isinstance(n, Ref):
            raise UnresolvedRef(f"reference to {n.name!r} must be resolved before compiling")
    domains = {name: doc.domains[dom] for name, dom in free_params(e, doc)}
    return _Compiler(domains).build(e, scope_params(e))


def scope_params(e: Expr) -> frozenset:
    """Parameters occurring in ``e`` outside of nested loops."""
    if isinstance(e, Loop):
        return frozenset()
    own = _own_params(e)
    for c in children(e):
        own |= scope_params(c)
    return frozenset(own)


def _own_params(e: Expr) -> set:
    if isinstance(e, Message):
        return {a.name for a in e.args if isinstance(a, Param)}
    if isinstance(e, Guarded):
        return e.predicate.params()
    return set()


def _all_params(e: Expr) -> set:
    out = set()
    for n in walk(e):
        out |= _own_params(n)
    return out


class _Compiler:
    def __init__(self, domains: Mapping[str, tuple]):
        self.domains = domains
        self.cache: dict = {}

    def build(self, e: Expr, pending: frozenset) -> fa.InteractionAutomaton:
        """``pending``: parameters of the current scope still unbound in ``e``."""
        key = (e, pending)
        hit = self.cache.get(key)
        if hit is None:
            hit = self.cache[key] = self._build(e, pending)
        return hit

    def _build(self, e: Expr, pending: frozenset) -> fa.InteractionAutomaton:
        kids = children(e)
        kid_params = [_all_params(c) for c in kids]
        if isinstance(e, Loop):
            # scope parameters are fixed across iterations
            here = pending & kid_params[0]
        else:
            here = pending & _own_params(e)
            counts: dict = {}
            for ps in kid_params:
                for p in ps & pending:
                    counts[p] = counts.get(p, 0) + 1
            here |= {p for p, k in counts.items() if k > 1}
        if here:
            names = sorted(here)
            rest = pending - here
            parts = [self.build(bind(e, dict(zip(names, values))), rest)
                     for values in itertools.product(*(self.domains[n] for n in names))]
            return fa.union(*parts)

        if isinstance(e, Empty):
            return fa.epsilon()
        if isinstance(e, Dead):
            return fa.empty_language()
        if isinstance(e, Message):
            return fa.symbol(e.interaction())
        if isinstance(e, Seq):
            return fa.concat(self.build(e.left, pending & kid_params[0]),
                             self.build(e.right, pending & kid_params[1]))
        if isinstance(e, Interleave):
            return fa.shuffle(self.build(e.left, pending & kid_params[0]),
                              self.build(e.right, pending & kid_params[1]))
        if isinstance(e, Choice):
            return fa.union(*(self.build(c, pending & ps) for c, ps in zip(kids, kid_params)))
        if isinstance(e, Loop):
            body = self.build(e.body, scope_params(e.body))
            return fa.repeat(body, e.min, e.max)
        if isinstance(e, Guarded):
            verdict = e.predicate.evaluate()
            if verdict is None:
                raise AssertionError(f"guard {e.predicate} reached with free parameters")
            if not verdict:
                return fa.empty_language()
            return self.build(e.body, pending & kid_params[0])
        raise TypeError(f"cannot compile {type(e).__name__}")
