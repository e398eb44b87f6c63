"""Exception hierarchy shared by every layer of depthkit."""


class DepthkitError(Exception):
    """Base class for all library errors."""


class DivisionByZero(DepthkitError, ZeroDivisionError):
    pass


class ShapeError(DepthkitError, ValueError):
    pass


class GradingError(DepthkitError, ValueError):
    """An entry or generator is not homogeneous of the expected degree."""


class RingError(DepthkitError, ValueError):
    """Modules or maps over different rings were combined."""


class InputError(DepthkitError, ValueError):
    pass


class BoundError(DepthkitError):
    """A computation needs more of a resolution than was computed."""


class PreconditionError(DepthkitError):
    """A lemma's hypotheses do not hold on the given instance.

    ``which`` names the failing quantity and ``value`` carries the offending
    number (usually a depth).
    """

    def __init__(self, message, which=None, value=None):
        super().__init__(message)
        self.which = which
        self.value = value


class InternalInconsistency(DepthkitError):
    """Two independent computations of the same invariant disagreed."""


class RegularElementError(DepthkitError):
    pass


class DepthZeroWitness(RegularElementError):
    """No regular element exists: some listed module has depth zero."""

    def __init__(self, index):
        super().__init__(f"module #{index} has depth 0")
        self.index = index


class SearchExhausted(RegularElementError):
    def __init__(self, message, transcript=None):
        super().__init__(message)
        self.transcript = transcript or []


class GenerationError(DepthkitError):
    pass


class ParseError(DepthkitError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)
        self.line = line
        self.column = column
