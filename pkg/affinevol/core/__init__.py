from .errors import (
    AffineModelError,
    AssumptionError,
    BoundsError,
    DomainError,
    ModelSpecError,
    NoRootError,
    NonConvergentIntegralError,
    ParameterError,
    SignChangeError,
    StripError,
)

__all__ = [
    "AffineModelError",
    "AssumptionError",
    "BoundsError",
    "DomainError",
    "ModelSpecError",
    "NoRootError",
    "NonConvergentIntegralError",
    "ParameterError",
    "SignChangeError",
    "StripError",
]
