"""Re-check a Document against the data-model invariants, independently of the parser."""

from __future__ import annotations

from .model import (
    Choice, Const, Document, Guarded, Loop, Message, Param, Ref, param_names, walk,
)


def validate(doc: Document) -> list[str]:
    """Every invariant violation found; empty when the document is sound."""
    problems = []
    for name, values in doc.domains.items():
        if not values:
            problems.append(f"domain {name} is empty")
        if len(set(values)) != len(values):
            problems.append(f"domain {name} repeats a value")
    if len(set(doc.components)) != len(doc.components):
        problems.append("component declared twice")
    for name, sig in doc.message_sigs.items():
        for pname, dom in sig:
            if dom not in doc.domains:
                problems.append(f"message {name} uses undeclared domain {dom}")
        if len({p for p, _ in sig}) != len(sig):
            problems.append(f"message {name} repeats a parameter")

    for eet, body in doc.eets.items():
        kinds: dict = {}
        for n in walk(body):
            if isinstance(n, Message):
                problems += _check_message(doc, eet, n, kinds)
            elif isinstance(n, Choice) and not n.alternatives:
                problems.append(f"{eet}: empty choice")
            elif isinstance(n, Loop) and n.max is not None and n.max < n.min:
                problems.append(f"{eet}: loop bounds {n.bounds}")
            elif isinstance(n, Ref) and n.name not in doc.eets:
                problems.append(f"{eet}: reference to unknown EET {n.name}")
        for n in walk(body):
            if isinstance(n, Guarded):
                problems += _check_guard(doc, eet, n, kinds)
    problems += _check_acyclic(doc)
    return problems


def _check_message(doc, eet, m: Message, kinds: dict) -> list[str]:
    out = []
    for who in (m.sender, m.receiver):
        if who not in doc.components:
            out.append(f"{eet}: unknown component {who}")
    sig = doc.message_sigs.get(m.message)
    if sig is None:
        return out + [f"{eet}: unknown message {m.message}"]
    if len(sig) != len(m.args):
        return out + [f"{eet}: {m.message} arity"]
    for arg, (_, dom) in zip(m.args, sig):
        if isinstance(arg, Const) and arg.value not in doc.domains[dom]:
            out.append(f"{eet}: {arg.value} not in {dom}")
        if isinstance(arg, Param) and kinds.setdefault(arg.name, dom) != dom:
            out.append(f"{eet}: parameter {arg.name} has two domains")
    return out


def _check_guard(doc, eet, g: Guarded, kinds: dict) -> list[str]:
    out = []
    local = param_names(g.body)
    for atom in g.predicate.atoms:
        doms = []
        for t in (atom.left, atom.right):
            if isinstance(t, Param):
                if t.name not in local:
                    out.append(f"{eet}: guard mentions {t.name}, which its body does not use")
                doms.append({kinds.get(t.name)})
            else:
                doms.append({d for d, vals in doc.domains.items() if t.value in vals})
        if not (doms[0] & doms[1]):
            out.append(f"{eet}: ill-typed comparison {atom}")
    return out


def _check_acyclic(doc: Document) -> list[str]:
    graph = {name: {n.name for n in walk(body) if isinstance(n, Ref)} for name, body in doc.eets.items()}
    done, active = set(), set()

    def cyclic(n) -> bool:
        if n in active:
            return True
        if n in done or n not in graph:
            return False
        active.add(n)
        found = any(cyclic(m) for m in sorted(graph[n]))
        active.discard(n)
        done.add(n)
        return found

    return [f"reference cycle through {n}" for n in graph if cyclic(n)][:1]
