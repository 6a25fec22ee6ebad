"""Errors raised by the radixrational modules.

Every class carries the process exit code the management commands use when
the error escapes to the command line.
"""


class RadixRationalError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class RepresentationError(RadixRationalError):
    """A linear representation or representation file is structurally invalid."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{message} (at {location})"
        super().__init__(message)


class ShapeError(RepresentationError):
    """Matrix shapes do not conform for the requested operation."""


class BudgetExceeded(RadixRationalError):
    """An enumeration would exceed its configured budget."""


class SpectralError(RadixRationalError):
    """Eigenvalue or Jordan computation could not be certified."""

    def __init__(self, message, residual=None):
        self.residual = residual
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)


class NoSolutionGuarantee(RadixRationalError):
    """The dilation system is not admissible: rho does not exceed lambda*."""

    exit_code = 2

    def __init__(self, rho, jsr_bound, note=None):
        self.rho = rho
        self.jsr_bound = jsr_bound
        self.note = note or (
            "no continuous solution guaranteed: the eigenvalue modulus does "
            "not exceed the joint spectral radius"
        )
        super().__init__(f"{self.note} (rho={rho:.17g}, lambda*={jsr_bound:.17g})")


class NotRecognized(RadixRationalError):
    """Representation inference did not close within the allowed level."""


class UnsupportedOperation(RadixRationalError):
    """The operation is not defined for this input (domain or shape)."""


class ExpansionFileError(RadixRationalError):
    """An expansion report file is unreadable or inconsistent with the representation."""


class NonFiniteError(RadixRationalError):
    """A floating computation produced NaN or infinity."""
