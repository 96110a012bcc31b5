"""Extended Event Traces: parse, compile to automata, check and render."""

from .analysis import (
    CheckReport, Question, conjoin_nonempty, equivalent, loose_consistent, member,
    member_embedded, refines,
)
from .automaton import InteractionAutomaton
from .errors import EetError, ParseErrors
from .model import (
    Atom, Choice, Const, Dead, Document, Empty, Guarded, Interaction, Interleave, Loop,
    Message, Param, Predicate, Ref, Seq, Trace, free_params, substitute,
)
from .oracle import BoundedDenotation, denote
from .parser import format_document, parse, parse_file, resolve
from .semantics import compile

__version__ = "0.1.0"
