"""Exception hierarchy shared across the toolkit."""


class EetError(Exception):
    """Base class for every error raised by eetc."""


class UnknownMessage(EetError):
    pass


class ArityMismatch(EetError):
    pass


class IncompleteBinding(EetError):
    pass


class DomainMismatch(EetError):
    pass


class UnresolvedRef(EetError):
    pass


class UnknownName(EetError):
    pass


class UnknownInteraction(EetError):
    """An event that the document does not declare (a configuration error,
    not a protocol violation)."""

    def __init__(self, detail, position=None):
        super().__init__(detail if position is None else f"event {position}: {detail}")
        self.detail = detail
        self.position = position


class UnknownComponent(EetError):
    pass


class BoundTooLarge(EetError):
    pass


class LogFormatError(EetError):
    def __init__(self, line, detail):
        super().__init__(f"line {line}: {detail}")
        self.line = line
        self.detail = detail


class ParseErrors(EetError):
    """Raised by :func:`eetc.parser.parse`; carries every detected error."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))
