"""Exception hierarchy shared by all modules."""


class CMGrassError(Exception):
    """Base class for all package-specific errors."""


class ShapeMismatch(CMGrassError):
    pass


class NonPolynomialCoefficient(CMGrassError):
    pass


class NotUnitriangular(CMGrassError):
    pass


class SingularMatrix(CMGrassError):
    pass


class RepeatedPositions(CMGrassError):
    pass


class RepeatedEigenvalues(CMGrassError):
    pass


class NonDiagonalExact(CMGrassError):
    pass


class UnsupportedExactExponential(CMGrassError):
    pass


class NotNilpotent(CMGrassError):
    pass


class SingularValueAtSpectrum(CMGrassError):
    pass


class SpectrumMismatch(CMGrassError):
    pass


class SingularJet(CMGrassError):
    pass


class YNotScalar(CMGrassError):
    pass


class OutsideBigCell(CMGrassError):
    """Raised when a Baker-function denominator matrix is singular.

    Carries the offending determinant (or matrix) when available.
    """

    def __init__(self, message, det=None):
        super().__init__(message)
        self.det = det


class UnsupportedRank(CMGrassError):
    pass


class DegenerateCell(CMGrassError):
    pass


class NotInBetaImage(CMGrassError):
    pass


class UnsupportedCell(CMGrassError):
    pass


class UnsupportedPoleLocus(CMGrassError):
    pass


class NotDifferential(CMGrassError):
    """Raised when an operator expected to be differential has a negative-order tail.

    Attributes
    ----------
    order : int
        The highest negative order with a nonzero coefficient.
    coefficient
        The offending coefficient matrix (diagnostic payload).
    """

    def __init__(self, message, order=None, coefficient=None):
        super().__init__(message)
        self.order = order
        self.coefficient = coefficient
