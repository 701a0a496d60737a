"""Exception hierarchy shared by every module of the package."""


class GenInverseError(Exception):
    """Base class for all errors raised by gencore."""


class DimensionMismatch(GenInverseError, ValueError):
    pass


class BackendUnsupported(GenInverseError):
    """The requested operation has no implementation for this scalar backend."""


class ConvergenceFailure(GenInverseError):
    """An iterative LAPACK routine (SVD, Schur, Sylvester) did not converge."""


class RankDecisionAmbiguous(GenInverseError):
    """Singular values sit too close to the rank cutoff to make a reliable call.

    Retry with the exact backend or with an adjusted tolerance.
    """


class ZeroMatrix(GenInverseError, ValueError):
    pass


class SingularGram(GenInverseError):
    """A Gram matrix of a full-rank factorization turned out singular."""


class NilpotentInput(GenInverseError):
    """The matrix is nilpotent, so its core part is empty."""


class IndexTooLarge(GenInverseError):
    def __init__(self, index, limit=1):
        super().__init__(f"Drazin index {index} exceeds {limit}")
        self.index = index
        self.limit = limit


class Inconsistent(GenInverseError):
    """The defining system of a generalized inverse has no solution."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SingularMatrix(GenInverseError, ZeroDivisionError):
    """An ordinary inverse was requested for a singular matrix."""
