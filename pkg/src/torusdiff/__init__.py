"""Spectral forward/inverse source solver for Caputo subdiffusion on T^N."""

from .errors import (
    AmplificationOverflow,
    CancellationError,
    ConfigError,
    DomainError,
    InsufficientDataError,
    PositivityError,
    ShapeError,
    SymmetryError,
    TorusdiffError,
)
from .mittag_leffler import MLParams, ml, ml_array, ml_asymptotic_check, ml_with_regime
from .special import gamma, lgamma, rgamma

__version__ = "0.1.0"
