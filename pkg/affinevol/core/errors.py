"""Exception hierarchy shared by every affinevol subpackage."""


class AffineModelError(Exception):
    """Base class for all errors raised by affinevol."""


class DomainError(AffineModelError):
    """A generator or closed form was evaluated outside its effective domain."""


class NonConvergentIntegralError(AffineModelError):
    """A jump integral or quadrature failed, or produced NaN."""


class SignChangeError(AffineModelError):
    """R(u, .) vanishes strictly inside an implicit-time interval."""


class AssumptionError(AffineModelError):
    """A standing assumption (e.g. chi(0) < 0 and chi(1) < 0) does not hold."""


class NoRootError(AffineModelError):
    """R(u, .) has no zero below r_+(u), i.e. u lies outside I."""

    def __init__(self, u: float, message: str | None = None):
        self.u = u
        super().__init__(message or f"R({u!r}, .) has no root; u is not in I")


class ParameterError(AffineModelError):
    """Model parameters violate a family invariant."""


class StripError(AffineModelError):
    """Damping strip lies outside the finite-moment strip."""


class BoundsError(AffineModelError):
    """Option price outside the no-arbitrage bounds."""


class ModelSpecError(AffineModelError):
    """Malformed JSON model specification.

    Parameters:
    ----------
        field: Dotted path of the offending field
        message: Human readable diagnostic
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")
