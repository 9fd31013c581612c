"""High-precision verification of weight-4 central-binomial harmonic series."""

from .errors import (
    Apery4Error,
    DomainError,
    IntegrandError,
    NonConvergenceError,
    PrecisionExhaustedError,
    ResourceLimitError,
    UnknownIdError,
)
from .numerics import PrecisionContext, make_context
from .special import ClosedForm, Symbol, basis_value, closed_form_value

__version__ = "0.1.0"

__all__ = [
    "Apery4Error",
    "ClosedForm",
    "DomainError",
    "IntegrandError",
    "NonConvergenceError",
    "PrecisionContext",
    "PrecisionExhaustedError",
    "ResourceLimitError",
    "Symbol",
    "UnknownIdError",
    "basis_value",
    "closed_form_value",
    "make_context",
]
