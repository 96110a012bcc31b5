"""Seeded random EET expressions over a five-interaction test document."""

from __future__ import annotations

import random
from typing import Optional

from .model import (
    Atom, Choice, Const, Dead, Empty, Expr, Guarded, Interaction, Interleave, Loop, Message,
    Param, Predicate, Seq, param_names,
)
from .parser import parse

SMALL_DOC_TEXT = """\
domain D = { u, v }
component A, B
msg a()
msg b()
msg c(x: D)
msg d()
"""

SMALL_DOC = parse(SMALL_DOC_TEXT)

# the whole alphabet: a, b, c(u), c(v), d
POOL = (
    Interaction("A", "B", "a"),
    Interaction("B", "A", "b"),
    Interaction("A", "B", "c", ("u",)),
    Interaction("A", "B", "c", ("v",)),
    Interaction("B", "B", "d"),
)

LOOP_BOUNDS = ((0, 1), (0, 2), (0, None))

_LEAVES = (
    Message("A", "B", "a"),
    Message("B", "A", "b"),
    Message("B", "B", "d"),
    Message("A", "B", "c", (Const("u"),)),
    Message("A", "B", "c", (Const("v"),)),
    Message("A", "B", "c", (Param("x"),)),
    Message("A", "B", "c", (Param("y"),)),
)


def random_expr(rng: random.Random, depth: int = 4, guards: bool = True) -> Expr:
    """An expression whose syntax tree is at most ``depth`` levels deep."""
    if depth <= 1 or rng.random() < 0.25:
        r = rng.random()
        if r < 0.08:
            return Empty()
        if r < 0.10:
            return Dead()
        return rng.choice(_LEAVES)
    op = rng.choice(("seq", "seq", "choice", "loop", "par", "guard" if guards else "seq"))
    sub = depth - 1
    if op == "seq":
        return Seq(random_expr(rng, sub, guards), random_expr(rng, sub, guards))
    if op == "choice":
        return Choice(tuple(random_expr(rng, sub, guards) for _ in range(rng.choice((1, 2, 2, 3)))))
    if op == "loop":
        lo, hi = rng.choice(LOOP_BOUNDS)
        return Loop(random_expr(rng, sub, guards), lo, hi)
    if op == "par":
        return Interleave(random_expr(rng, sub, guards), random_expr(rng, sub, guards))
    body = random_expr(rng, sub, guards)
    pred = random_predicate(rng, body)
    return body if pred is None else Guarded(body, pred)


def random_predicate(rng: random.Random, body: Expr) -> Optional[Predicate]:
    names = sorted(param_names(body))
    if not names:
        return None
    terms = [Param(n) for n in names] + [Const("u"), Const("v")]
    atoms = []
    for _ in range(rng.choice((1, 1, 2))):
        left = Param(rng.choice(names))
        atoms.append(Atom(left, rng.choice(("==", "!=")), rng.choice(terms)))
    return Predicate(tuple(atoms))


def random_trace(rng: random.Random, alphabet, max_len: int = 8) -> tuple:
    alphabet = sorted(alphabet)
    if not alphabet:
        return ()
    return tuple(rng.choice(alphabet) for _ in range(rng.randint(0, max_len)))
