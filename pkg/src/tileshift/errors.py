"""Exception types shared across the package."""


class TileshiftError(Exception):
    """Base class for every error raised by this package."""


class NotAPermutation(TileshiftError):
    """An index array is not a bijection on 0..n-1."""


class CountMismatch(TileshiftError):
    """Color counts are inconsistent with the board or configuration."""


class NoMovesAvailable(TileshiftError):
    """The board has no pasting cycle of length >= 2, so nothing can move."""


class BudgetExceeded(TileshiftError):
    """A state or node budget was hit before the computation finished.

    ``partial`` carries whatever partial result was built, when one exists.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class StateNotInSpace(TileshiftError):
    """A configuration is not a vertex of the graph being queried."""


class IncompleteGraph(TileshiftError):
    """The operation needs a fully enumerated graph, not a truncated one."""


class Unsolvable(TileshiftError):
    """The start configuration provably lies outside the home component."""


class InvalidMove(TileshiftError):
    """The move does not exist on this board."""


class UnknownPuzzle(TileshiftError):
    """No puzzle registered under the given id."""


class UnknownSession(TileshiftError):
    """No live session with the given id."""


class ParseError(TileshiftError):
    """A puzzle document is structurally malformed."""


class ValidationError(TileshiftError):
    """A puzzle document breaks one of its invariants.

    ``field`` names the offending part of the document when known.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
