"""Exception types raised by covsteer."""


class CovsteerError(ValueError):
    """Base class for all validation failures in this package."""


class NonHermitian(CovsteerError):
    pass


class NonUnitTrace(CovsteerError):
    pass


class NotPositive(CovsteerError):
    pass


class DimensionMismatch(CovsteerError):
    pass


class InvalidParameter(CovsteerError):
    pass


class NotAnObservableSet(CovsteerError):
    """A list of matrices failed Hermiticity, orthonormality or completeness."""


class NonOrthogonalRotation(CovsteerError):
    pass


class ImaginaryExpectation(CovsteerError):
    pass


class MalformedBlocks(CovsteerError):
    """The kernel of a local block is not contained in the kernel of the
    correlation block, which no positive semidefinite covariance matrix allows."""


class PartialBobSet(CovsteerError):
    """The steered party's observable list is not a full LOO set."""


class Unphysical(CovsteerError):
    """A covariance matrix violates the uncertainty principle."""


class ParseError(CovsteerError):
    pass


class NoViolationInRange(CovsteerError):
    pass
