"""Exception types shared across the package."""


class SignDetError(Exception):
    """Base class for all errors raised by signdet."""


class ParseError(SignDetError, ValueError):
    """Malformed matrix text. ``row`` and ``col`` are 1-based (``None`` if unknown)."""

    def __init__(self, message, row=None, col=None):
        self.row = row
        self.col = col
        where = ""
        if row is not None and col is not None:
            where = f" at ({row},{col})"
        elif row is not None:
            where = f" at row {row}"
        super().__init__(f"{message}{where}")


class EmptyMatrix(SignDetError, ValueError):
    """A matrix with zero rows or zero columns."""


class IndexOutOfRange(SignDetError, IndexError):
    pass


class NotSquare(SignDetError, ValueError):
    pass


class NoPerfectMatching(SignDetError, ValueError):
    pass


class NotPerfectMatching(SignDetError, ValueError):
    """The supplied matching is not a perfect matching of the graph."""


class DimensionMismatch(SignDetError, ValueError):
    pass


class TooLarge(SignDetError, ValueError):
    """Input exceeds the brute-force oracle cap."""


class NotApplicable(SignDetError, ValueError):
    """Preconditions of a theorem-specific shortcut do not hold."""


class LimitExceeded(SignDetError):
    """An enumeration produced more items than its cap.

    ``partial`` holds whatever was collected before the cap was hit.
    """

    def __init__(self, limit, partial=None, what="items"):
        self.limit = limit
        self.partial = partial
        super().__init__(f"more than {limit} {what}; result truncated")


# shape disagreement between a stoichiometric matrix and a dependence pattern
ShapeMismatch = DimensionMismatch
