"""Exception hierarchy shared across the package."""


class CherryVineError(Exception):
    """Base class for all errors raised by this package."""


class StructureError(CherryVineError):
    """Malformed structure, e.g. an edge pointing at a missing cluster."""


class CherryTreeError(CherryVineError):
    """A junction tree violates the cherry-tree invariants.

    ``offenders`` holds the clusters involved in the violation.
    """

    def __init__(self, message, offenders=()):
        super().__init__(message)
        self.offenders = tuple(offenders)


class NotTruncatedRVineError(CherryVineError):
    """The cherry-tree is not a truncated R-vine; carries the witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BackwardFailure(CherryVineError):
    """No vine sequence was found although the precondition held."""


class SingularMatrixError(CherryVineError, ArithmeticError):
    """An elimination pivot fell below the singularity tolerance."""
