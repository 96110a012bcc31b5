"""Domain types: declarations, interactions, traces and the EET syntax tree.

Everything here is immutable after construction. Expression nodes are frozen
dataclasses, so structural equality and hashing come for free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import ArityMismatch, DomainMismatch, IncompleteBinding, UnknownMessage


# -- interactions and traces -------------------------------------------------

@dataclass(frozen=True, order=True)
class Interaction:
    """One synchronous message exchange; send and receive are a single event."""

    sender: str
    receiver: str
    message: str
    args: tuple = ()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))

    def __str__(self):
        return f"{self.sender} -> {self.receiver} : {self.message}({', '.join(self.args)})"


@dataclass(frozen=True, order=True)
class Trace:
    events: tuple = ()

    def __post_init__(self):
        if not isinstance(self.events, tuple):
            object.__setattr__(self, "events", tuple(self.events))

    def __len__(self):
        return len(self.events)

    def __iter__(self) -> Iterator[Interaction]:
        return iter(self.events)

    def __getitem__(self, i):
        return self.events[i]

    def __add__(self, other):
        return Trace(self.events + tuple(other))

    def lines(self) -> list[str]:
        return [str(ev) for ev in self.events]


# -- terms and predicates ----------------------------------------------------

@dataclass(frozen=True)
class Param:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: str

    def __str__(self):
        return self.value


Term = Union[Param, Const]


@dataclass(frozen=True)
class Atom:
    left: Term
    op: str  # "==" or "!="
    right: Term

    def __post_init__(self):
        if self.op not in ("==", "!="):
            raise ValueError(f"unsupported comparison {self.op!r}")

    def __str__(self):
        return f"{self.left} {self.op} {self.right}"


@dataclass(frozen=True)
class Predicate:
    """Conjunction of equality / disequality atoms."""

    atoms: tuple

    def __post_init__(self):
        if not isinstance(self.atoms, tuple):
            object.__setattr__(self, "atoms", tuple(self.atoms))

    def __str__(self):
        return " && ".join(str(a) for a in self.atoms)

    def params(self) -> set[str]:
        return {t.name for a in self.atoms for t in (a.left, a.right) if isinstance(t, Param)}

    def bind(self, binding: Mapping[str, str]) -> "Predicate":
        return Predicate(tuple(Atom(_bind_term(a.left, binding), a.op, _bind_term(a.right, binding))
                               for a in self.atoms))

    def evaluate(self) -> Optional[bool]:
        """Truth value of a ground predicate.

        Returns None while free parameters remain, except that an atom of the
        form ``x != x`` makes the conjunction false regardless of binding.
        """
        pending = False
        for a in self.atoms:
            if a.left == a.right:
                if a.op == "!=":
                    return False
                continue
            if isinstance(a.left, Const) and isinstance(a.right, Const):
                if (a.left.value == a.right.value) != (a.op == "=="):
                    return False
            else:
                pending = True
        return None if pending else True


def _bind_term(t: Term, binding: Mapping[str, str]) -> Term:
    if isinstance(t, Param) and t.name in binding:
        return Const(binding[t.name])
    return t


# -- expressions -------------------------------------------------------------

class Expr:
    """Base class for EET expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Empty(Expr):
    pass


@dataclass(frozen=True)
class Dead(Expr):
    """The empty language. Produced only by guards that fail; not writable in the DSL."""


@dataclass(frozen=True)
class Message(Expr):
    sender: str
    receiver: str
    message: str
    args: tuple = ()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))

    def is_ground(self) -> bool:
        return all(isinstance(a, Const) for a in self.args)

    def interaction(self) -> Interaction:
        if not self.is_ground():
            raise IncompleteBinding(f"message {self.message} still has formal parameters")
        return Interaction(self.sender, self.receiver, self.message, tuple(a.value for a in self.args))


@dataclass(frozen=True)
class Seq(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Choice(Expr):
    alternatives: tuple

    def __post_init__(self):
        if not isinstance(self.alternatives, tuple):
            object.__setattr__(self, "alternatives", tuple(self.alternatives))
        if not self.alternatives:
            raise ValueError("Choice needs at least one alternative")


@dataclass(frozen=True)
class Loop(Expr):
    body: Expr
    min: int = 0
    max: Optional[int] = None  # None: unbounded

    def __post_init__(self):
        if self.min < 0 or (self.max is not None and self.max < self.min):
            raise ValueError(f"bad loop bounds {self.min}..{self.max}")

    @property
    def bounds(self) -> str:
        return f"{self.min}..{'*' if self.max is None else self.max}"


@dataclass(frozen=True)
class Interleave(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Ref(Expr):
    name: str


@dataclass(frozen=True)
class Guarded(Expr):
    body: Expr
    predicate: Predicate


def children(e: Expr) -> tuple:
    if isinstance(e, (Seq, Interleave)):
        return (e.left, e.right)
    if isinstance(e, Choice):
        return e.alternatives
    if isinstance(e, (Loop, Guarded)):
        return (e.body,)
    return ()


def seq(*parts: Expr) -> Expr:
    """Right-nested sequence of ``parts``; Empty when there are none."""
    if not parts:
        return Empty()
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Seq(p, out)
    return out


def interleave(*parts: Expr) -> Expr:
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = Interleave(p, out)
    return out


def walk(e: Expr) -> Iterator[Expr]:
    yield e
    for c in children(e):
        yield from walk(c)


def message_count(e: Expr) -> int:
    return sum(1 for n in walk(e) if isinstance(n, Message))


# -- document ----------------------------------------------------------------

@dataclass(frozen=True, eq=True)
class Document:
    """A parsed ``.eet`` file. Treat the mappings as read-only."""

    domains: dict = field(default_factory=dict)        # name -> tuple of values
    components: tuple = ()                              # declaration order
    message_sigs: dict = field(default_factory=dict)   # name -> tuple of (param, domain)
    eets: dict = field(default_factory=dict)           # name -> Expr

    __hash__ = None

    def signature(self, message: str) -> tuple:
        try:
            return self.message_sigs[message]
        except KeyError:
            raise UnknownMessage(f"undeclared message {message!r}") from None

    def check_message(self, m: Message) -> tuple:
        sig = self.signature(m.message)
        if len(sig) != len(m.args):
            raise ArityMismatch(f"{m.message} expects {len(sig)} arguments, got {len(m.args)}")
        return sig

    def declares(self, ev: Interaction) -> Optional[str]:
        """None if ``ev`` is a declared interaction, else a reason it is not."""
        for who in (ev.sender, ev.receiver):
            if who not in self.components:
                return f"unknown component {who!r}"
        if ev.message not in self.message_sigs:
            return f"unknown message {ev.message!r}"
        sig = self.message_sigs[ev.message]
        if len(sig) != len(ev.args):
            return f"{ev.message} expects {len(sig)} arguments, got {len(ev.args)}"
        for (pname, dom), v in zip(sig, ev.args):
            if v not in self.domains[dom]:
                return f"value {v!r} for {pname} is not in domain {dom}"
        return None


# -- parameters --------------------------------------------------------------

def param_names(e: Expr) -> set[str]:
    """Names of all formal parameters in ``e`` (message arguments and guards)."""
    out = set()
    for n in walk(e):
        if isinstance(n, Message):
            out.update(a.name for a in n.args if isinstance(a, Param))
        elif isinstance(n, Guarded):
            out.update(n.predicate.params())
    return out


def free_params(e: Expr, doc: Document) -> set[tuple[str, str]]:
    """Every formal parameter of ``e`` paired with its domain.

    Referenced EETs are closed, so their parameters are not included.
    """
    domains: dict[str, str] = {}
    for n in walk(e):
        if not isinstance(n, Message):
            continue
        sig = doc.check_message(n)
        for a, (_, dom) in zip(n.args, sig):
            if isinstance(a, Param):
                if domains.setdefault(a.name, dom) != dom:
                    raise DomainMismatch(f"parameter {a.name} used with domains {domains[a.name]} and {dom}")
    loose = param_names(e) - domains.keys()
    if loose:
        raise DomainMismatch(f"parameters {sorted(loose)} occur only in predicates")
    return set(domains.items())


def bind(e: Expr, binding: Mapping[str, str]) -> Expr:
    """Replace the parameters named in ``binding``; others stay free.

    Guards that become decidable are dropped (true) or turned into Dead (false).
    """
    if isinstance(e, Message):
        if not any(isinstance(a, Param) and a.name in binding for a in e.args):
            return e
        return Message(e.sender, e.receiver, e.message, tuple(_bind_term(a, binding) for a in e.args))
    if isinstance(e, Seq):
        return Seq(bind(e.left, binding), bind(e.right, binding))
    if isinstance(e, Interleave):
        return Interleave(bind(e.left, binding), bind(e.right, binding))
    if isinstance(e, Choice):
        return Choice(tuple(bind(a, binding) for a in e.alternatives))
    if isinstance(e, Loop):
        return Loop(bind(e.body, binding), e.min, e.max)
    if isinstance(e, Guarded):
        pred = e.predicate.bind(binding)
        verdict = pred.evaluate()
        if verdict is False:
            return Dead()
        body = bind(e.body, binding)
        return body if verdict else Guarded(body, pred)
    return e


def substitute(e: Expr, binding: Mapping[str, str], doc: Optional[Document] = None) -> Expr:
    """Instantiate every formal parameter of ``e`` from ``binding``.

    With ``doc`` the values are also checked against the parameter domains.
    """
    missing = param_names(e) - set(binding)
    if missing:
        raise IncompleteBinding(f"no value for {', '.join(sorted(missing))}")
    if doc is not None:
        for name, dom in free_params(e, doc):
            if binding[name] not in doc.domains[dom]:
                raise DomainMismatch(f"{binding[name]!r} is not a value of {dom} (parameter {name})")
    return bind(e, binding)


def trace(events: Iterable[Interaction]) -> Trace:
    return Trace(tuple(events))
