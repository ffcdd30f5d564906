"""Bates model: jump intensity proportional to the variance.

R(u, w) = Heston R(u, w) + kappa~(u), F(u, w) = lam theta w.
"""

import math
from dataclasses import dataclass

import numpy as np

from affinevol.core.errors import DomainError, ParameterError
from affinevol.core.jumps import CompoundPoisson, MarkLaw, PriceGaussian
from affinevol.models.heston import (
    HestonGenerator,
    HestonParams,
    _arctan_time,
    _mark_mgf,
    _real_root_time,
    compensated_jump_cgf,
)


@dataclass(frozen=True)
class BatesParams:
    """Heston parameters plus state-proportional price jumps."""

    heston: HestonParams
    intensity: float
    marks: MarkLaw

    def __post_init__(self):
        if self.intensity < 0:
            raise ParameterError("jump intensity must be nonnegative")
        if not math.isfinite(_mark_mgf(self.marks, 1.0)):
            raise ParameterError("jumps need a finite first exponential moment")

    @classmethod
    def gaussian(
        cls, heston: HestonParams, intensity: float, mean: float, std: float
    ) -> "BatesParams":
        return cls(heston, intensity, PriceGaussian(mean, std))

    def kappa_tilde(self, u: float) -> float:
        return compensated_jump_cgf(self.intensity, self.marks, u)

    def kappa_tilde_complex(self, u):
        return self.intensity * (
            self.marks.mgf(u, 0.0) - 1.0
        ) - u * self.intensity * (_mark_mgf(self.marks, 1.0) - 1.0)

    def delta(self, u: float) -> float:
        """chi(u)^2 - zeta^2 (u^2 - u + 2 kappa~(u)); -inf off-domain."""
        jump = self.kappa_tilde(u)
        if not math.isfinite(jump):
            return -math.inf
        h = self.heston
        return h.chi(u) ** 2 - h.zeta**2 * (u * u - u + 2.0 * jump)

    def to_parameters(self):
        tau_x = self.marks.truncation_moments()[0]
        drift = self.intensity * (tau_x - (_mark_mgf(self.marks, 1.0) - 1.0))
        base = self.heston.to_parameters(
            mu=CompoundPoisson(self.intensity, self.marks)
        )
        return base.replace(beta=[-0.5 + drift, -self.heston.lam])


class BatesGenerator(HestonGenerator):
    """Closed-form Bates generator pair."""

    name = "bates"

    def __init__(self, params: BatesParams):
        super().__init__(params.heston)
        self.bates = params

    def R(self, u, w):
        jump = self.bates.kappa_tilde(u)
        if not math.isfinite(jump):
            return math.inf
        return self._R(u, w) + jump

    def R_complex(self, u, w):
        u = np.asarray(u, dtype=complex)
        return self._R(u, w) + self.bates.kappa_tilde_complex(u)

    def r_plus(self, u):
        return math.inf if math.isfinite(self.R(u, 0.0)) else 0.0


def bates_generator(p: BatesParams) -> BatesGenerator:
    """Build the closed-form Bates generator."""
    return BatesGenerator(p)


def bates_closed_w(p: BatesParams, u: float) -> float:
    """Stable equilibrium (-chi(u) - sqrt(Delta(u))) / zeta^2."""
    if u == 0.0 or u == 1.0:
        return 0.0
    disc = p.delta(u)
    if disc < 0:
        raise DomainError(f"Delta({u!r}) < 0: u is not in I")
    return (-p.heston.chi(u) - math.sqrt(disc)) / p.heston.zeta**2


def bates_closed_h(p: BatesParams, u: float) -> float:
    """Long-term rate h(u) = lam theta w(u)."""
    return p.heston.lam * p.heston.theta * bates_closed_w(p, u)


def bates_closed_Tstar(p: BatesParams, u: float) -> float:
    """Explosion time: +inf, the arctan branch, or 0 off the jump domain."""
    if 0.0 <= u <= 1.0:
        return math.inf
    disc = p.delta(u)
    if disc == -math.inf:
        return 0.0
    chi = p.heston.chi(u)
    if disc < 0:
        return _arctan_time(chi, math.sqrt(-disc))
    if chi > 0:
        return _real_root_time(chi, disc)
    return math.inf
