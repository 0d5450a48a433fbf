"""Exception hierarchy shared by all modules."""


class NegSimpError(Exception):
    pass


class IllFormedType(NegSimpError):
    pass


class TypeLatticeError(NegSimpError):
    """Raised when two distinct type parameters meet."""


class DomainMismatch(NegSimpError):
    pass


class PositionOutOfDomain(NegSimpError):
    pass


class OverlappingDomains(NegSimpError):
    pass


class Untypeable(NegSimpError):
    pass


class InvalidProperty(NegSimpError):
    pass


class DuplicateLocal(NegSimpError):
    pass


class UnknownNode(NegSimpError):
    pass


class TheoremViolation(AssertionError):
    """An extractor postcondition failed on a concrete call."""


class LimitExceeded(NegSimpError):
    def __init__(self, message, frontier=None):
        super().__init__(message)
        self.frontier = frontier


class UnboundVariable(NegSimpError):
    pass


class MissingCarrier(NegSimpError):
    pass


class ParseError(SyntaxError):
    """Syntax error carrying 1-based line and column."""

    def __init__(self, message, text="", pos=0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.lineno = line
        self.offset = col
        self.line = line
        self.column = col
