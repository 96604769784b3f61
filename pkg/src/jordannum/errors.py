"""Exception types shared across the package."""


class JordanNumError(Exception):
    """Base class for all package-specific errors."""


class AlgebraMismatch(JordanNumError):
    """Operands belong to different algebras."""


class StructureError(JordanNumError):
    """Structure tensor or unit fails a construction invariant."""


class ParseError(JordanNumError):
    """Malformed algebra descriptor; carries the byte offset of the failure."""

    def __init__(self, message, offset=0):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class NotInvertible(JordanNumError):
    """Jordan inverse does not exist; carries the smallest singular value of U_a."""

    def __init__(self, message, smallest_singular_value=None):
        super().__init__(message)
        self.smallest_singular_value = smallest_singular_value


class OnSpectrum(JordanNumError):
    """A query point coincides with a spectrum point."""


class BranchCut(JordanNumError):
    """Spectrum touches the closed negative real axis; principal log undefined."""


class ContourViolation(JordanNumError):
    """Spectrum not strictly inside the integration contour."""


class QuadratureError(JordanNumError):
    """Contour/Cauchy quadrature failed its stability test."""


class UnsupportedAlgebra(JordanNumError):
    """Operation requires a specific algebra family."""


class InsufficientData(JordanNumError):
    """Too few usable grid points to report convergence."""


class NotSelfAdjoint(JordanNumError):
    """Operation requires a Hermitian element."""


class ZeroFunctional(JordanNumError):
    """Functional vanishes at the unit."""


class NotUMultiplicative(JordanNumError):
    """Functional violates the U-multiplicativity constraint at the unit."""


class BranchTrackingFailed(JordanNumError):
    """Phase unwrapping could not certify a continuous branch."""


class ZeroOnPath(JordanNumError):
    """Functional vanishes along the tracking path."""
