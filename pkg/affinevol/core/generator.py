"""Generator pairs (F, R) and the evaluation entry points.

A generator pair is the couple of Levy-Khintchine-form functions driving the
generalized Riccati equations. It either comes from an
:class:`AdmissibleParameterSet` or from a closed form in
:mod:`affinevol.models`.
"""

import math
from abc import ABC, abstractmethod
from enum import Enum
from typing import Optional

import numpy as np

from affinevol.core.errors import DomainError
from affinevol.core.jumps import NoJumps
from affinevol.core.parameters import AdmissibleParameterSet
from affinevol.utils.numerics import checked, derivative, finiteness_boundary


class Provenance(Enum):
    """Where a generator pair comes from."""

    PARAMETERS = "parameters"
    CLOSED_FORM = "closed_form"


class GeneratorPair(ABC):
    """Extended-real maps F, R on R^2 plus their complex extensions.

    Real evaluation returns ``math.inf`` outside the effective domain.
    Complex evaluation is vectorised over numpy arrays and performs no
    domain checks; callers stay inside the finite-moment strip.
    """

    provenance: Provenance = Provenance.CLOSED_FORM
    name: str = "generator"

    @abstractmethod
    def F(self, u: float, w: float) -> float:
        pass

    @abstractmethod
    def R(self, u: float, w: float) -> float:
        pass

    @abstractmethod
    def F_complex(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def R_complex(self, u: np.ndarray, w: np.ndarray) -> np.ndarray:
        pass

    def dF_dw(self, u: float, w: float) -> float:
        return derivative(lambda x: self.F(u, x), w)

    def dR_dw(self, u: float, w: float) -> float:
        return derivative(lambda x: self.R(u, x), w)

    def chi(self, u: float) -> float:
        """dR/dw at w = 0."""
        return self.dR_dw(u, 0.0)

    def f_plus(self, u: float) -> float:
        if not math.isfinite(self.F(u, 0.0)):
            return 0.0
        return finiteness_boundary(lambda w: self.F(u, w))

    def r_plus(self, u: float) -> float:
        if not math.isfinite(self.R(u, 0.0)):
            return 0.0
        return finiteness_boundary(lambda w: self.R(u, w))

    def l_plus_hint(self) -> Optional[float]:
        """Closed-form l_+ when the model knows it."""
        return None

    def stationary_cgf_hint(self, w: float) -> Optional[float]:
        """Closed-form l(w) when the model knows it."""
        return None

    def stationary_cgf_complex(self, w: np.ndarray) -> Optional[np.ndarray]:
        """Closed-form l on complex arguments when the model knows it."""
        return None

    def jump_free(self) -> Optional["GeneratorPair"]:
        """Counterpart with the state-independent jump part removed."""
        return None

    def jump_kappa_minus(self) -> Optional[float]:
        """Lower cgf boundary of the state-independent price jumps."""
        return None

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


class ParametricGenerator(GeneratorPair):
    """Generator pair built from an admissible parameter set."""

    provenance = Provenance.PARAMETERS

    def __init__(self, params: AdmissibleParameterSet, name: str = "custom"):
        self.params = params
        self.name = name

    def _quadratic(self, matrix, u, w):
        return 0.5 * (
            matrix[0, 0] * u * u
            + 2.0 * matrix[0, 1] * u * w
            + matrix[1, 1] * w * w
        )

    def F(self, u, w):
        p = self.params
        jump = p.m.integral(u, w, False)
        if not math.isfinite(jump):
            return math.inf
        return (
            self._quadratic(p.a, u, w) + p.b[0] * u + p.b[1] * w - p.c + jump
        )

    def R(self, u, w):
        p = self.params
        jump = p.mu.integral(u, w, True)
        if not math.isfinite(jump):
            return math.inf
        return (
            self._quadratic(p.alpha, u, w)
            + p.beta[0] * u
            + p.beta[1] * w
            - p.gamma
            + jump
        )

    def F_complex(self, u, w):
        p = self.params
        return (
            self._quadratic(p.a, u, w)
            + p.b[0] * u
            + p.b[1] * w
            - p.c
            + p.m.integral_complex(u, w, False)
        )

    def R_complex(self, u, w):
        p = self.params
        return (
            self._quadratic(p.alpha, u, w)
            + p.beta[0] * u
            + p.beta[1] * w
            - p.gamma
            + p.mu.integral_complex(u, w, True)
        )

    def dF_dw(self, u, w):
        p = self.params
        return (
            p.a[0, 1] * u
            + p.a[1, 1] * w
            + p.b[1]
            + p.m.integral_dw(u, w, False)
        )

    def dR_dw(self, u, w):
        p = self.params
        return (
            p.alpha[0, 1] * u
            + p.alpha[1, 1] * w
            + p.beta[1]
            + p.mu.integral_dw(u, w, True)
        )

    def f_plus(self, u):
        if not math.isfinite(self.F(u, 0.0)):
            return 0.0
        return self.params.m.w_boundary(u)

    def r_plus(self, u):
        if not math.isfinite(self.R(u, 0.0)):
            return 0.0
        return self.params.mu.w_boundary(u)

    def jump_free(self):
        if self.params.m.is_zero():
            return None
        return ParametricGenerator(
            self.params.replace(m=NoJumps()),
            name=f"{self.name}-jump-free",
        )

    def jump_kappa_minus(self):
        m = self.params.m
        if m.is_zero():
            return None
        marks = getattr(m, "marks", None)
        if marks is not None:
            return marks.u_bounds()[0]
        return getattr(m, "kappa_minus", None)


def eval_F(g: GeneratorPair, u: float, w: float) -> float:
    """F(u, w), +inf outside the effective domain; NaN is rejected."""
    return checked(g.F(u, w), f"F({u!r}, {w!r})")


def eval_R(g: GeneratorPair, u: float, w: float) -> float:
    """R(u, w), +inf outside the effective domain; NaN is rejected."""
    return checked(g.R(u, w), f"R({u!r}, {w!r})")


def chi(g: GeneratorPair, u: float) -> float:
    """dR/dw(u, 0), possibly +inf.

    Raises:
    ------
        DomainError: If R(u, 0) is infinite
    """
    if not math.isfinite(eval_R(g, u, 0.0)):
        raise DomainError(f"chi undefined: R({u!r}, 0) = inf")
    return checked(g.chi(u), f"chi({u!r})")


def domain_boundary_F(g: GeneratorPair, u: float) -> float:
    """f_+(u) = sup{w >= 0 : F(u, w) < inf}."""
    return checked(g.f_plus(u), f"f_+({u!r})")


def domain_boundary_R(g: GeneratorPair, u: float) -> float:
    """r_+(u) = sup{w >= 0 : R(u, w) < inf}."""
    return checked(g.r_plus(u), f"r_+({u!r})")
