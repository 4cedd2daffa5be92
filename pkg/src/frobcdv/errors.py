"""Exception hierarchy shared by all frobcdv modules."""


class FrobCdvError(Exception):
    """Base class for all errors raised by this package."""


class NoConvergence(FrobCdvError):
    """An iterative solver failed to reach its tolerance."""


class Singular(FrobCdvError):
    """Matrix inversion rejected: pivot/determinant below threshold."""


class EvaluationFailure(FrobCdvError):
    """A function could not be evaluated at a finite-difference stencil point."""


class DegenerateMetric(FrobCdvError):
    """The flat metric g = C_1ij is (numerically) degenerate."""


class NotSemisimple(FrobCdvError):
    """Eigenvalue gap of the Euler multiplication operator below threshold."""


class DefectiveU(FrobCdvError):
    """Euler multiplication operator is not (numerically) diagonalizable."""


class FrameDiscontinuity(FrobCdvError):
    """Eigenvalue matching across a stencil moved by more than gap/4."""


class NotNormalForm(FrobCdvError):
    """Operation requires a spec in antidiagonal normal form."""


class NonPositiveIterate(FrobCdvError):
    """PDE line search exhausted damping without an acceptable iterate."""


class ParseError(FrobCdvError):
    """Malformed spec or report file."""


class ValidationError(FrobCdvError):
    """Spec file parsed but is internally inconsistent."""


class UnknownName(FrobCdvError):
    """Requested catalog entry does not exist."""
