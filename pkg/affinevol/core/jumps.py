"""Jump measure specifications with closed-form cumulant generating functions.

A jump measure on D = R x R>=0 (price jump x, variance jump y) is either
absent, a compound Poisson measure ``intensity * law(marks)`` or an analytic
cgf handle. Each spec evaluates its Levy-Khintchine integral

    int (exp(x u + y w) - 1 - omega(x, y) . (u, w)) m(dx, dy)

for the fixed truncation omega = (x / (1 + x^2), 0) (used in F) or
omega = (x / (1 + x^2), y / (1 + y^2)) (used in R).
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np
from scipy import integrate, stats

from affinevol.core.errors import NonConvergentIntegralError, ParameterError
from affinevol.utils.numerics import derivative, finiteness_boundary


def _exponential_moment(fn: Callable[[float], float], rate: float) -> float:
    value, _ = integrate.quad(
        lambda t: fn(t) * rate * math.exp(-rate * t), 0.0, math.inf
    )
    return value


def _damped(t: float) -> float:
    return t / (1.0 + t * t)


class MarkLaw(ABC):
    """Law of a single jump mark (x, y) supported on D."""

    @abstractmethod
    def mgf(self, u, w):
        """E[exp(u x + w y)], vectorised; no domain check."""

    @abstractmethod
    def in_domain(self, u: float, w: float) -> bool:
        """Whether the real moment generating function is finite."""

    @abstractmethod
    def mgf_dw(self, u: float, w: float) -> float:
        """Derivative of the mgf in w."""

    @abstractmethod
    def w_boundary(self, u: float) -> float:
        """sup{w >= 0 : mgf(u, w) < inf}; 0 if infinite at w = 0."""

    @abstractmethod
    def truncation_moments(self) -> tuple[float, float]:
        """(E[x / (1 + x^2)], E[y / (1 + y^2)])."""

    def u_bounds(self) -> tuple[float, float]:
        """Open interval of u with finite mgf at w = 0."""
        return -math.inf, math.inf


@dataclass(frozen=True)
class PriceExponential(MarkLaw):
    """One-sided exponential price jumps x = direction * E, E ~ Exp(mean)."""

    mean: float
    direction: int = -1

    def __post_init__(self):
        if self.mean <= 0:
            raise ParameterError("exponential mark mean must be positive")
        if self.direction not in (-1, 1):
            raise ParameterError("direction must be -1 or +1")

    def mgf(self, u, w):
        return 1.0 / (1.0 - self.direction * self.mean * u)

    def in_domain(self, u, w):
        return self.direction * self.mean * u < 1.0

    def mgf_dw(self, u, w):
        return 0.0

    def w_boundary(self, u):
        return math.inf if self.in_domain(u, 0.0) else 0.0

    @cached_property
    def _tau_x(self) -> float:
        return self.direction * _exponential_moment(_damped, 1.0 / self.mean)

    def truncation_moments(self):
        return self._tau_x, 0.0

    def u_bounds(self):
        edge = self.direction / self.mean
        return (-math.inf, edge) if self.direction > 0 else (edge, math.inf)


@dataclass(frozen=True)
class PriceDoubleExponential(MarkLaw):
    """Two-sided exponential price jumps.

    Upward with probability ``p_up`` and rate ``eta_up``, downward otherwise
    with rate ``eta_down``.
    """

    p_up: float
    eta_up: float
    eta_down: float

    def __post_init__(self):
        if not 0.0 <= self.p_up <= 1.0:
            raise ParameterError("p_up must lie in [0, 1]")
        if self.eta_up <= 0 or self.eta_down <= 0:
            raise ParameterError("exponential rates must be positive")

    def mgf(self, u, w):
        return self.p_up * self.eta_up / (self.eta_up - u) + (
            1.0 - self.p_up
        ) * self.eta_down / (self.eta_down + u)

    def in_domain(self, u, w):
        return -self.eta_down < u < self.eta_up

    def mgf_dw(self, u, w):
        return 0.0

    def w_boundary(self, u):
        return math.inf if self.in_domain(u, 0.0) else 0.0

    @cached_property
    def _tau_x(self) -> float:
        up = _exponential_moment(_damped, self.eta_up)
        down = _exponential_moment(_damped, self.eta_down)
        return self.p_up * up - (1.0 - self.p_up) * down

    def truncation_moments(self):
        return self._tau_x, 0.0

    def u_bounds(self):
        return -self.eta_down, self.eta_up


@dataclass(frozen=True)
class PriceGaussian(MarkLaw):
    """Gaussian price jumps N(mean, std^2)."""

    mean: float
    std: float

    def __post_init__(self):
        if self.std <= 0:
            raise ParameterError("Gaussian mark std must be positive")

    def mgf(self, u, w):
        return np.exp(self.mean * u + 0.5 * self.std**2 * u * u)

    def in_domain(self, u, w):
        return True

    def mgf_dw(self, u, w):
        return 0.0

    def w_boundary(self, u):
        return math.inf

    @cached_property
    def _tau_x(self) -> float:
        return float(
            stats.norm.expect(_damped, loc=self.mean, scale=self.std)
        )

    def truncation_moments(self):
        return self._tau_x, 0.0


@dataclass(frozen=True)
class VarianceExponential(MarkLaw):
    """Exponential variance jump y ~ Exp(mean) with price jump x = rho * y."""

    mean: float
    rho: float = 0.0

    def __post_init__(self):
        if self.mean <= 0:
            raise ParameterError("exponential mark mean must be positive")

    def mgf(self, u, w):
        return 1.0 / (1.0 - self.mean * (w + self.rho * u))

    def in_domain(self, u, w):
        return self.mean * (w + self.rho * u) < 1.0

    def mgf_dw(self, u, w):
        return self.mean / (1.0 - self.mean * (w + self.rho * u)) ** 2

    def w_boundary(self, u):
        return max(1.0 / self.mean - self.rho * u, 0.0)

    @cached_property
    def _taus(self) -> tuple[float, float]:
        rate = 1.0 / self.mean
        tau_x = _exponential_moment(lambda t: _damped(self.rho * t), rate)
        tau_y = _exponential_moment(_damped, rate)
        return tau_x, tau_y

    def truncation_moments(self):
        return self._taus

    def u_bounds(self):
        if self.rho == 0.0:
            return -math.inf, math.inf
        edge = 1.0 / (self.mean * self.rho)
        return (-math.inf, edge) if self.rho > 0 else (edge, math.inf)


@dataclass(frozen=True)
class PointMass(MarkLaw):
    """Deterministic mark (x, y)."""

    x: float
    y: float = 0.0

    def __post_init__(self):
        if self.y < 0:
            raise ParameterError("variance jump size must be nonnegative")

    def mgf(self, u, w):
        return np.exp(self.x * u + self.y * w)

    def in_domain(self, u, w):
        return True

    def mgf_dw(self, u, w):
        return self.y * math.exp(self.x * u + self.y * w)

    def w_boundary(self, u):
        return math.inf

    def truncation_moments(self):
        return _damped(self.x), _damped(self.y)


class JumpMeasureSpec(ABC):
    """A jump measure entering F (state-independent) or R (proportional)."""

    #: Whether the family satisfies the logarithmic moment condition on y.
    log_moment_condition: bool = True

    @abstractmethod
    def integral(self, u: float, w: float, truncate_w: bool) -> float:
        """Real Levy-Khintchine integral, +inf outside the domain."""

    @abstractmethod
    def integral_complex(self, u, w, truncate_w: bool):
        """Vectorised complex evaluation; no domain checks."""

    @abstractmethod
    def integral_dw(self, u: float, w: float, truncate_w: bool) -> float:
        """Derivative of :meth:`integral` in w."""

    @abstractmethod
    def w_boundary(self, u: float) -> float:
        """sup{w >= 0 : integral(u, w) < inf}; 0 if infinite at w = 0."""

    def is_zero(self) -> bool:
        return False

    def integrability_holds(self) -> bool:
        """Whether int ((x^2 + y) ^ 1) m < inf is known for the family."""
        return True


class NoJumps(JumpMeasureSpec):
    """The zero measure."""

    def integral(self, u, w, truncate_w):
        return 0.0

    def integral_complex(self, u, w, truncate_w):
        return np.zeros(np.broadcast(u, w).shape, dtype=complex)

    def integral_dw(self, u, w, truncate_w):
        return 0.0

    def w_boundary(self, u):
        return math.inf

    def is_zero(self):
        return True

    def __eq__(self, other):
        return isinstance(other, NoJumps)

    def __hash__(self):
        return hash(NoJumps)

    def __repr__(self):
        return "NoJumps()"


@dataclass(frozen=True)
class CompoundPoisson(JumpMeasureSpec):
    """Finite-activity measure ``intensity * law(marks)``."""

    intensity: float
    marks: MarkLaw

    def __post_init__(self):
        if self.intensity < 0:
            raise ParameterError("jump intensity must be nonnegative")

    def _compensator(self, u, w, truncate_w):
        tau_x, tau_y = self.marks.truncation_moments()
        return 1.0 + u * tau_x + (w * tau_y if truncate_w else 0.0)

    def integral(self, u, w, truncate_w):
        if self.intensity == 0.0:
            return 0.0
        if not self.marks.in_domain(u, w):
            return math.inf
        return self.intensity * (
            self.marks.mgf(u, w) - self._compensator(u, w, truncate_w)
        )

    def integral_complex(self, u, w, truncate_w):
        if self.intensity == 0.0:
            return np.zeros(np.broadcast(u, w).shape, dtype=complex)
        return self.intensity * (
            self.marks.mgf(u, w) - self._compensator(u, w, truncate_w)
        )

    def integral_dw(self, u, w, truncate_w):
        if self.intensity == 0.0:
            return 0.0
        if not self.marks.in_domain(u, w):
            return math.inf
        tau_y = self.marks.truncation_moments()[1] if truncate_w else 0.0
        return self.intensity * (self.marks.mgf_dw(u, w) - tau_y)

    def w_boundary(self, u):
        if self.intensity == 0.0:
            return math.inf
        return self.marks.w_boundary(u)

    def is_zero(self):
        return self.intensity == 0.0


@dataclass(frozen=True)
class AnalyticCgf(JumpMeasureSpec):
    """Jump integral supplied as a closed-form cgf along a direction.

    The contribution at (u, w) is ``kappa(a_x * u + a_y * w)``, with any
    truncation already absorbed into the drift. ``kappa`` must return +inf
    outside (kappa_minus, kappa_plus) and accept complex numpy arrays when
    the measure is used for pricing.
    """

    kappa: Callable
    kappa_minus: float = -math.inf
    kappa_plus: float = math.inf
    direction: tuple[float, float] = (1.0, 0.0)
    kappa_prime: Optional[Callable] = field(default=None, compare=False)
    log_moment_condition: bool = True

    def __post_init__(self):
        if self.kappa_minus > 0 or self.kappa_plus < 0:
            raise ParameterError("declared bounds must satisfy k- <= 0 <= k+")
        if self.direction[1] < 0:
            raise ParameterError("direction must not point outside D")

    def _theta(self, u, w):
        return self.direction[0] * u + self.direction[1] * w

    def _call(self, theta: float) -> float:
        try:
            value = float(self.kappa(theta))
        except (ArithmeticError, ValueError) as exc:
            raise NonConvergentIntegralError(
                f"cgf handle failed at {theta!r}: {exc}"
            ) from exc
        if math.isnan(value):
            raise NonConvergentIntegralError(
                f"cgf handle returned NaN at {theta!r}"
            )
        return value

    def integral(self, u, w, truncate_w):
        return self._call(self._theta(u, w))

    def integral_complex(self, u, w, truncate_w):
        return np.asarray(self.kappa(self._theta(u, w)), dtype=complex)

    def integral_dw(self, u, w, truncate_w):
        a_y = self.direction[1]
        if a_y == 0.0:
            return 0.0
        theta = self._theta(u, w)
        if self.kappa_prime is not None:
            return a_y * float(self.kappa_prime(theta))
        return a_y * derivative(self._call, theta)

    def w_boundary(self, u):
        a_x, a_y = self.direction
        if a_y == 0.0:
            return math.inf if math.isfinite(self._call(a_x * u)) else 0.0
        return finiteness_boundary(lambda w: self._call(self._theta(u, w)))

    def compensated(self, u: float) -> float:
        """kappa(u) - u * kappa(1), zero at u = 0 and u = 1."""
        return self._call(u) - u * self._call(1.0)

    def declared_bounds_consistent(self, offset: float = 1e-6) -> bool:
        """Check that kappa is finite just inside and infinite outside."""
        for edge, sign in ((self.kappa_minus, -1.0), (self.kappa_plus, 1.0)):
            if math.isinf(edge):
                continue
            step = offset * max(1.0, abs(edge))
            if not math.isfinite(self._call(edge - sign * step)):
                return False
            if math.isfinite(self._call(edge + sign * step)):
                return False
        return math.isfinite(self._call(0.0))
