"""Barndorff-Nielsen-Shephard model driven by a Levy subordinator.

F(u, w) = lam kappa(w + rho u) - u lam kappa(rho)
R(u, w) = (u^2 - u) / 2 - lam w
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy import special

from affinevol.core.errors import ParameterError
from affinevol.core.generator import GeneratorPair
from affinevol.core.jumps import (
    AnalyticCgf,
    CompoundPoisson,
    JumpMeasureSpec,
    PointMass,
    VarianceExponential,
)
from affinevol.core.parameters import AdmissibleParameterSet


class Subordinator(ABC):
    """Background driving Levy subordinator with cgf kappa."""

    @property
    @abstractmethod
    def kappa_plus(self) -> float:
        pass

    @abstractmethod
    def kappa(self, theta: float) -> float:
        """Real cgf, +inf for theta >= kappa_plus."""

    @abstractmethod
    def kappa_complex(self, theta):
        pass

    @abstractmethod
    def kappa_prime(self, theta: float) -> float:
        pass

    def l(self, w: float) -> Optional[float]:
        """Closed form of int_0^w kappa(eta) / eta d eta, if known."""
        return None

    def l_complex(self, w) -> Optional[np.ndarray]:
        return None

    @abstractmethod
    def to_jump_measure(
        self, lam: float, rho: float
    ) -> Tuple[JumpMeasureSpec, float]:
        """Jump measure of (rho dZ, dZ) at speed lam and the drift b1."""


@dataclass(frozen=True)
class GammaOU(Subordinator):
    """Compound Poisson with rate a and Exp(b) jumps; stationary Gamma(a, b)."""

    a: float
    b: float

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ParameterError("Gamma-OU parameters must be positive")

    @property
    def kappa_plus(self):
        return self.b

    def kappa(self, theta):
        if theta >= self.b:
            return math.inf
        return self.a * theta / (self.b - theta)

    def kappa_complex(self, theta):
        return self.a * theta / (self.b - theta)

    def kappa_prime(self, theta):
        if theta >= self.b:
            return math.inf
        return self.a * self.b / (self.b - theta) ** 2

    def l(self, w):
        if w >= self.b:
            return math.inf
        return -self.a * math.log1p(-w / self.b)

    def l_complex(self, w):
        return -self.a * np.log(1.0 - np.asarray(w) / self.b)

    def to_jump_measure(self, lam, rho):
        spec = CompoundPoisson(
            lam * self.a, VarianceExponential(mean=1.0 / self.b, rho=rho)
        )
        tau_x = spec.marks.truncation_moments()[0]
        return spec, lam * self.a * tau_x - lam * self.kappa(rho)


@dataclass(frozen=True)
class InverseGaussianOU(Subordinator):
    """Subordinator with inverse Gaussian stationary law IG(delta, gamma)."""

    delta: float
    gamma: float

    def __post_init__(self):
        if self.delta <= 0 or self.gamma <= 0:
            raise ParameterError("IG-OU parameters must be positive")

    @property
    def kappa_plus(self):
        return 0.5 * self.gamma**2

    def kappa(self, theta):
        if theta >= self.kappa_plus:
            return math.inf
        return self.delta * theta / math.sqrt(self.gamma**2 - 2.0 * theta)

    def kappa_complex(self, theta):
        theta = np.asarray(theta, dtype=complex)
        return self.delta * theta / np.sqrt(self.gamma**2 - 2.0 * theta)

    def kappa_prime(self, theta):
        if theta >= self.kappa_plus:
            return math.inf
        s = self.gamma**2 - 2.0 * theta
        return self.delta * (self.gamma**2 - theta) / s**1.5

    def l(self, w):
        if w > self.kappa_plus:
            return math.inf
        return self.delta * (
            self.gamma - math.sqrt(max(self.gamma**2 - 2.0 * w, 0.0))
        )

    def l_complex(self, w):
        w = np.asarray(w, dtype=complex)
        return self.delta * (self.gamma - np.sqrt(self.gamma**2 - 2.0 * w))

    def to_jump_measure(self, lam, rho):
        spec = AnalyticCgf(
            kappa=lambda theta: lam * _dispatch(self, theta),
            kappa_minus=-math.inf,
            kappa_plus=self.kappa_plus,
            direction=(rho, 1.0),
            kappa_prime=lambda theta: lam * self.kappa_prime(theta),
        )
        return spec, -lam * self.kappa(rho)


@dataclass(frozen=True)
class PoissonOU(Subordinator):
    """Poisson jumps of fixed size c at rate a; kappa_+ is infinite."""

    a: float
    c: float

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0:
            raise ParameterError("Poisson-OU parameters must be positive")

    @property
    def kappa_plus(self):
        return math.inf

    def kappa(self, theta):
        return self.a * math.expm1(self.c * theta)

    def kappa_complex(self, theta):
        return self.a * (np.exp(self.c * np.asarray(theta)) - 1.0)

    def kappa_prime(self, theta):
        return self.a * self.c * math.exp(self.c * theta)

    def l(self, w):
        # a * (Ei(c w) - euler_gamma - log|c w|)
        if w == 0.0:
            return 0.0
        x = self.c * w
        return self.a * (special.expi(x) - np.euler_gamma - math.log(abs(x)))

    def to_jump_measure(self, lam, rho):
        marks = PointMass(x=rho * self.c, y=self.c)
        spec = CompoundPoisson(lam * self.a, marks)
        tau_x = spec.marks.truncation_moments()[0]
        return spec, lam * self.a * tau_x - lam * self.kappa(rho)


def _dispatch(sub: Subordinator, theta):
    if isinstance(theta, (float, int)):
        return sub.kappa(float(theta))
    return sub.kappa_complex(theta)


SUBORDINATORS = {
    "gamma": GammaOU,
    "inverse_gaussian": InverseGaussianOU,
    "poisson": PoissonOU,
}


@dataclass(frozen=True)
class BNSParams:
    """BNS parameters: speed lam > 0, leverage rho < 0, subordinator."""

    lam: float
    rho: float
    subordinator: Subordinator

    def __post_init__(self):
        if not self.lam > 0:
            raise ParameterError("lambda must be positive")
        if not self.rho < 0:
            raise ParameterError("rho must be negative")
        if not math.isfinite(self.subordinator.kappa(self.rho)):
            raise ParameterError("kappa(rho) must be finite")

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "BNSParams":
        sub = dict(config_dict["subordinator"])
        family = sub.pop("family")
        return cls(
            lam=float(config_dict["lambda"]),
            rho=float(config_dict["rho"]),
            subordinator=SUBORDINATORS[family](
                **{k: float(v) for k, v in sub.items()}
            ),
        )

    @property
    def kappa_plus(self) -> float:
        return self.subordinator.kappa_plus

    def to_parameters(self) -> AdmissibleParameterSet:
        spec, b1 = self.subordinator.to_jump_measure(self.lam, self.rho)
        return AdmissibleParameterSet(
            alpha=[[1.0, 0.0], [0.0, 0.0]],
            b=[b1, 0.0],
            beta=[-0.5, -self.lam],
            m=spec,
        )


class BNSGenerator(GeneratorPair):
    """Closed-form BNS generator pair."""

    name = "bns"

    def __init__(self, params: BNSParams):
        self.params = params
        self._kappa_rho = params.subordinator.kappa(params.rho)

    def F(self, u, w):
        p = self.params
        k = p.subordinator.kappa(w + p.rho * u)
        if not math.isfinite(k):
            return math.inf
        return p.lam * k - u * p.lam * self._kappa_rho

    def R(self, u, w):
        return 0.5 * (u * u - u) - self.params.lam * w

    def F_complex(self, u, w):
        p = self.params
        u = np.asarray(u, dtype=complex)
        theta = w + p.rho * u
        return p.lam * p.subordinator.kappa_complex(theta) - (
            u * p.lam * self._kappa_rho
        )

    def R_complex(self, u, w):
        u = np.asarray(u, dtype=complex)
        return 0.5 * (u * u - u) - self.params.lam * np.asarray(w)

    def dF_dw(self, u, w):
        p = self.params
        return p.lam * p.subordinator.kappa_prime(w + p.rho * u)

    def dR_dw(self, u, w):
        return -self.params.lam

    def chi(self, u):
        return -self.params.lam

    def f_plus(self, u):
        return max(self.params.kappa_plus - self.params.rho * u, 0.0)

    def r_plus(self, u):
        return math.inf

    def l_plus_hint(self):
        return self.params.kappa_plus

    def stationary_cgf_hint(self, w):
        return self.params.subordinator.l(w)

    def stationary_cgf_complex(self, w):
        return self.params.subordinator.l_complex(w)


def bns_generator(p: BNSParams) -> BNSGenerator:
    """Build the closed-form BNS generator."""
    return BNSGenerator(p)


class BNSClosedForm:
    """Every closed form of the BNS model."""

    def __init__(self, params: BNSParams):
        self.params = params
        self.lam = params.lam
        self.rho = params.rho
        self.kappa_plus = params.kappa_plus

    def w(self, u: float) -> float:
        return (u * u - u) / (2.0 * self.lam)

    def h(self, u: float) -> float:
        p = self.params
        k = p.subordinator.kappa(
            u * u / (2.0 * p.lam) + u * (p.rho - 1.0 / (2.0 * p.lam))
        )
        if not math.isfinite(k):
            return math.inf
        return p.lam * k - u * p.lam * p.subordinator.kappa(p.rho)

    def f_plus(self, u: float) -> float:
        return max(self.kappa_plus - self.rho * u, 0.0)

    def _log_time(self, u: float, level: float) -> float:
        if 0.0 <= u <= 1.0:
            return math.inf
        ratio = 2.0 * self.lam * level / (u * (u - 1.0))
        if ratio >= 1.0:
            return math.inf
        return max(0.0, -math.log1p(-ratio) / self.lam)

    def T_star(self, u: float) -> float:
        return self._log_time(u, self.f_plus(u))

    def _horizon(self, t: float) -> float:
        return -math.expm1(-self.lam * t)

    def u_plus(self, t: float) -> float:
        if math.isinf(self.kappa_plus):
            return math.inf
        e = self._horizon(t)
        lam, rho = self.lam, self.rho
        return (
            0.5
            - rho * lam / e
            + math.sqrt(
                0.25
                + (2.0 * self.kappa_plus - rho) * lam / e
                + (rho * lam / e) ** 2
            )
        )

    def u_minus(self, t: float) -> float:
        if math.isinf(self.kappa_plus):
            return -math.inf
        e = self._horizon(t)
        lam, rho = self.lam, self.rho
        return (
            0.5
            - rho * lam / e
            - math.sqrt(
                0.25
                + (2.0 * self.kappa_plus - rho) * lam / e
                + (rho * lam / e) ** 2
            )
        )

    def l(self, w: float) -> Optional[float]:
        return self.params.subordinator.l(w)

    @property
    def l_plus(self) -> float:
        return self.kappa_plus

    def T_star_S(self, u: float) -> float:
        return self._log_time(u, min(self.f_plus(u), self.kappa_plus))

    def u_plus_S(self, t: float) -> float:
        if math.isinf(self.kappa_plus):
            return math.inf
        e = self._horizon(t)
        return 0.5 + math.sqrt(0.25 + 2.0 * self.kappa_plus * self.lam / e)

    def u_minus_S(self, t: float) -> float:
        return self.u_minus(t)


def bns_closed(p: BNSParams) -> BNSClosedForm:
    """Closed forms of the BNS model with parameters ``p``."""
    return BNSClosedForm(p)
