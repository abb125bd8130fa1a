"""Exception hierarchy shared by every module."""


class AlgRRError(Exception):
    """Base class for all engine errors."""


class ContextMismatch(AlgRRError):
    pass


class UnknownBundle(AlgRRError):
    pass


class UnsupportedKind(AlgRRError):
    pass


class RankMismatch(AlgRRError):
    pass


class NotDivisible(AlgRRError):
    pass


class NotFlat(AlgRRError):
    pass


class NoComplexStructure(AlgRRError):
    pass


class NotAlmostComplex(AlgRRError):
    pass


class DegreeMismatch(AlgRRError):
    pass


class UnsupportedLeafDimension(AlgRRError):
    pass


class NegativeWeight(AlgRRError):
    pass


class OddLeafDimension(AlgRRError):
    pass


class ArityError(AlgRRError):
    pass


class ParseError(AlgRRError):
    """Syntax error in a class expression.

    ``line`` and ``column`` are 1-based; ``expected`` is the set of token
    descriptions that would have been accepted at that position.
    """

    def __init__(self, message, line, column, expected=()):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        exp = ", ".join(sorted(repr(e) for e in self.expected))
        detail = f" (expected one of: {exp})" if exp else ""
        super().__init__(f"{message} at line {line}, column {column}{detail}")


class DescriptorIOError(AlgRRError):
    """A descriptor file could not be read."""


class SchemaError(AlgRRError):
    """A descriptor does not match the documented schema.

    ``pointer`` is a JSON pointer to the offending field.
    """

    def __init__(self, message, pointer=""):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")


class ValidationError(SchemaError):
    """A descriptor is well-formed but violates a module invariant."""


IoError = DescriptorIOError
