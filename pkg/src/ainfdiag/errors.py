"""Exception types raised across the package."""


class AinfDiagError(Exception):
    pass


class DegreeOutOfRange(AinfDiagError, ValueError):
    pass


class IndexOutOfRange(AinfDiagError, IndexError):
    pass


class ArityMismatch(AinfDiagError, ValueError):
    pass


class NotSolvable(AinfDiagError):
    """Raised when a right-hand side is not a boundary; ``residual`` holds the witness."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class MissingLowerArity(AinfDiagError, KeyError):
    pass


class EndpointMismatch(AinfDiagError, ValueError):
    pass


class InvalidGraph(AinfDiagError, ValueError):
    pass


class IsLoop(AinfDiagError, ValueError):
    pass


class ParityMismatch(AinfDiagError, ValueError):
    pass


class NonInvertiblePairing(AinfDiagError, ValueError):
    pass


class DiagonalArityTooSmall(AinfDiagError, ValueError):
    pass
