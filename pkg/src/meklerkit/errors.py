"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for all toolkit-specific errors."""


class SchemaError(ToolkitError):
    """Malformed JSON input (wrong shape, type, or value range)."""


class TooLarge(ToolkitError):
    """A brute-force sweep or enumeration exceeds its size bound."""


class NotAnOddPrime(ToolkitError):
    pass


class GraphNotNice(ToolkitError):
    pass


class ContextMismatch(ToolkitError):
    """Element coordinates do not fit the group context."""


class NotTypeP(ToolkitError):
    pass


class NoHandleFound(ToolkitError):
    """No commuting 1-nu element exists; falsifies the handle fact at this scale."""


class AmbiguousHandle(ToolkitError):
    """Several non-equivalent handles found; falsifies uniqueness at this scale."""


class NoComplement(ToolkitError):
    """No central complement for the transversal subgroup; should not happen for nice graphs."""


class LengthMismatch(ToolkitError):
    pass


class LevelsOutOfRange(ToolkitError):
    pass


class RangeOverflow(ToolkitError):
    pass


class ShapeMismatch(ToolkitError):
    """Witness family shape does not match the requested check."""


class FormulaSyntaxError(ToolkitError):
    def __init__(self, message, position):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class UnknownRelation(ToolkitError):
    pass


class ArityMismatch(ToolkitError):
    pass


class UnboundVariable(ToolkitError):
    pass
