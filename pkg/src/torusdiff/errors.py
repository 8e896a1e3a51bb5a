"""Exception types shared across the package.

Plain ``OverflowError`` (the builtin) is raised where a value exceeds the
representable double range, e.g. ``gamma(200)``.
"""


class TorusdiffError(Exception):
    """Base class for all package-specific errors."""


class DomainError(TorusdiffError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ShapeError(TorusdiffError, ValueError):
    """A sample or coefficient array has the wrong size for its grid."""


class SymmetryError(TorusdiffError):
    """Hermitian symmetry required for a real field is violated."""


class PositivityError(TorusdiffError, ValueError):
    """An elliptic symbol fails A(n) > 0 at some nonzero grid frequency."""


class InsufficientDataError(TorusdiffError):
    """Too few nonzero spectral shells to fit a decay exponent."""


class AmplificationOverflow(TorusdiffError, ArithmeticError):
    """The inversion denominator fell below the configured floor.

    Reconstructing this mode would amplify rounding noise past any
    meaningful level; callers either zero the mode and report it, or
    propagate this error.
    """


class CancellationError(TorusdiffError, ArithmeticError):
    """The extended-precision budget cannot certify the requested tolerance."""


class ConfigError(TorusdiffError):
    """Malformed or inconsistent run configuration."""
