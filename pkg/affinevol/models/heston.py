"""Heston and Heston-with-jumps: generators and closed forms.

R(u, w) = (u^2 - u)/2 + zeta^2 w^2 / 2 - lam w + u w rho zeta
F(u, w) = lam theta w            (+ kappa~(u) with independent jumps)
"""

import math
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from affinevol.core.errors import DomainError, ParameterError
from affinevol.core.generator import GeneratorPair
from affinevol.core.jumps import (
    AnalyticCgf,
    CompoundPoisson,
    MarkLaw,
    PriceExponential,
)
from affinevol.core.parameters import AdmissibleParameterSet
from affinevol.utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class HestonParams:
    """Heston parameters.

    Attributes:
    ----------
    lam : float
        Mean-reversion speed lambda > 0
    theta : float
        Long-run variance > 0
    zeta : float
        Volatility of variance > 0
    rho : float
        Correlation in [-1, 1]
    """

    lam: float
    theta: float
    zeta: float
    rho: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ParameterError("lambda must be positive")
        if not self.theta > 0:
            raise ParameterError("theta must be positive")
        if not self.zeta > 0:
            raise ParameterError("zeta must be positive")
        if not -1.0 <= self.rho <= 1.0:
            raise ParameterError("rho must lie in [-1, 1]")

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "HestonParams":
        return cls(
            lam=float(config_dict["lambda"]),
            theta=float(config_dict["theta"]),
            zeta=float(config_dict["zeta"]),
            rho=float(config_dict["rho"]),
        )

    def to_dict(self) -> Dict[str, float]:
        return {
            "lambda": self.lam,
            "theta": self.theta,
            "zeta": self.zeta,
            "rho": self.rho,
        }

    def chi(self, u):
        return self.rho * self.zeta * u - self.lam

    def chi_plus(self, u):
        return self.rho * self.zeta * u + self.lam

    def delta(self, u):
        """Discriminant chi(u)^2 - zeta^2 (u^2 - u)."""
        return self.chi(u) ** 2 - self.zeta**2 * (u * u - u)

    @property
    def long_term_ok(self) -> bool:
        """chi(1) < 0, needed by every long-term operation."""
        return self.lam > self.rho * self.zeta

    def to_parameters(self, b1: float = 0.0, mu=None) -> AdmissibleParameterSet:
        """Levy-Khintchine embedding of the diffusive Heston part."""
        rz = self.rho * self.zeta
        kwargs = {}
        if mu is not None:
            kwargs["mu"] = mu
        return AdmissibleParameterSet(
            alpha=[[1.0, rz], [rz, self.zeta**2]],
            b=[b1, self.lam * self.theta],
            beta=[-0.5, -self.lam],
            **kwargs,
        )


class HestonGenerator(GeneratorPair):
    """Closed-form Heston generator pair."""

    name = "heston"

    def __init__(self, params: HestonParams):
        self.params = params

    def _R(self, u, w):
        p = self.params
        return (
            0.5 * (u * u - u)
            + 0.5 * p.zeta**2 * w * w
            - p.lam * w
            + u * w * p.rho * p.zeta
        )

    def F(self, u, w):
        return self.params.lam * self.params.theta * w

    def R(self, u, w):
        return self._R(u, w)

    def F_complex(self, u, w):
        return self.params.lam * self.params.theta * np.asarray(w) + 0j

    def R_complex(self, u, w):
        return self._R(np.asarray(u, dtype=complex), w)

    def dF_dw(self, u, w):
        return self.params.lam * self.params.theta

    def dR_dw(self, u, w):
        p = self.params
        return p.zeta**2 * w - p.lam + u * p.rho * p.zeta

    def chi(self, u):
        return self.params.chi(u)

    def f_plus(self, u):
        return math.inf

    def r_plus(self, u):
        return math.inf

    def l_plus_hint(self):
        return HestonStationary(self.params).l_plus

    def stationary_cgf_hint(self, w):
        return HestonStationary(self.params).l(w)

    def stationary_cgf_complex(self, w):
        return HestonStationary(self.params).l_complex(w)


def heston_generator(p: HestonParams) -> HestonGenerator:
    """Build the closed-form Heston generator."""
    return HestonGenerator(p)


def heston_closed_w(p: HestonParams, u: float) -> float:
    """Stable equilibrium ((lam - u rho zeta) - sqrt(Delta)) / zeta^2.

    Raises:
    ------
        DomainError: If Delta(u) < 0
    """
    if u == 0.0 or u == 1.0:
        return 0.0
    disc = p.delta(u)
    if disc < 0:
        raise DomainError(f"Delta({u!r}) < 0: u is not in I")
    return (-p.chi(u) - math.sqrt(disc)) / p.zeta**2


def heston_closed_h(p: HestonParams, u: float) -> float:
    """Long-term rate h(u) = lam theta w(u)."""
    return p.lam * p.theta * heston_closed_w(p, u)


def heston_interval_I(p: HestonParams) -> Tuple[float, float]:
    """Endpoints of I = {u : Delta(u) >= 0}, roots of a concave quadratic."""
    z2 = p.zeta**2
    qa = z2 * (p.rho**2 - 1.0)
    qb = z2 - 2.0 * p.lam * p.rho * p.zeta
    qc = p.lam**2
    if qa == 0.0:
        root = -qc / qb
        return (root, math.inf) if qb > 0 else (-math.inf, root)
    disc = math.sqrt(qb * qb - 4.0 * qa * qc)
    roots = sorted(((-qb + disc) / (2 * qa), (-qb - disc) / (2 * qa)))
    return roots[0], roots[1]


def heston_excluded_case(p: HestonParams, u: float) -> bool:
    """Real negative roots of R(u, .) outside [0, 1].

    Here Delta(u) >= 0 but chi(u) > 0, so R(u, .) > 0 on [0, inf) and the
    moment still explodes. This needs chi(1) >= 0.
    """
    return (u < 0.0 or u > 1.0) and p.delta(u) >= 0 and p.chi(u) > 0


def _arctan_time(chi: float, root: float) -> float:
    # (2 / root) (arctan(root / chi) + pi 1{chi < 0}), root = sqrt(-Delta)
    if chi == 0.0:
        return math.pi / root
    angle = math.atan(root / chi) + (math.pi if chi < 0 else 0.0)
    return 2.0 * angle / root


def _real_root_time(chi: float, disc: float) -> float:
    if disc == 0.0:
        return 2.0 / chi
    root = math.sqrt(disc)
    return math.log((chi + root) / (chi - root)) / root


def heston_closed_Tstar(p: HestonParams, u: float) -> float:
    """Moment explosion time of the Heston model."""
    if 0.0 <= u <= 1.0:
        return math.inf
    disc = p.delta(u)
    if disc < 0:
        return _arctan_time(p.chi(u), math.sqrt(-disc))
    if heston_excluded_case(p, u):
        logger.warning("Heston excluded branch hit at u=%r", u)
        return _real_root_time(p.chi(u), disc)
    return math.inf


def heston_closed_riccati(p: HestonParams, t: float, u):
    """Classical closed-form (phi, psi) at w0 = 0, real or complex u.

    Uses the g = (b - d) / (b + d) representation, continuous in u along
    the usual pricing contours.
    """
    u_arr = np.asarray(u, dtype=complex)
    b = p.lam - p.rho * p.zeta * u_arr
    d = np.sqrt(b * b - p.zeta**2 * (u_arr * u_arr - u_arr))
    g = (b - d) / (b + d)
    decay = np.exp(-d * t)
    psi = (b - d) / p.zeta**2 * (1.0 - decay) / (1.0 - g * decay)
    phi = (
        p.lam
        * p.theta
        / p.zeta**2
        * ((b - d) * t - 2.0 * np.log((1.0 - g * decay) / (1.0 - g)))
    )
    if np.isrealobj(u):
        phi, psi = np.real(phi), np.real(psi)
    if np.ndim(u) == 0:
        return phi.item(), psi.item()
    return phi, psi


@dataclass(frozen=True)
class HestonStationary:
    """Closed forms of the Heston model in the stationary variance regime.

    The invariant law of V is Gamma with shape 2 lam theta / zeta^2 and
    rate 2 lam / zeta^2.
    """

    params: HestonParams

    @property
    def l_plus(self) -> float:
        return 2.0 * self.params.lam / self.params.zeta**2

    @property
    def shape(self) -> float:
        return 2.0 * self.params.lam * self.params.theta / self.params.zeta**2

    def l(self, w: float) -> float:
        if w >= self.l_plus:
            return math.inf
        return -self.shape * math.log1p(-w / self.l_plus)

    def l_complex(self, w):
        return -self.shape * np.log(1.0 - np.asarray(w) / self.l_plus)

    def l_prime0(self) -> float:
        """Stationary mean of V, equal to theta."""
        return self.shape / self.l_plus

    def T_star_S(self, u: float) -> float:
        """Explosion time in the stationary regime."""
        if 0.0 <= u <= 1.0:
            return math.inf
        p = self.params
        disc, chi, chi_p = p.delta(u), p.chi(u), p.chi_plus(u)
        lam = p.lam
        if disc < 0:
            root = math.sqrt(-disc)
            denom = chi_p * chi - disc
            if denom == 0.0:
                return math.pi / root
            angle = math.atan(2.0 * lam * root / denom)
            return 2.0 * (angle + (math.pi if denom < 0 else 0.0)) / root
        if disc == 0.0:
            r = -chi / p.zeta**2
            if 0.0 <= r <= self.l_plus:
                return math.inf
            return 2.0 / p.zeta**2 * (1.0 / (r - self.l_plus) - 1.0 / r)
        root = math.sqrt(disc)
        if not heston_excluded_case(p, u) and root >= -chi_p:
            return math.inf
        num = chi_p * chi + 2.0 * lam * root - disc
        den = chi_p * chi - 2.0 * lam * root - disc
        return math.log(abs(num / den)) / root


def heston_stationary_closed(p: HestonParams) -> HestonStationary:
    """Closed-form stationary law and T*^S.

    Raises:
    ------
        ParameterError: If chi(1) >= 0
    """
    if not p.long_term_ok:
        raise ParameterError("stationary regime needs lam > rho zeta")
    return HestonStationary(p)


@dataclass(frozen=True)
class HestonJumpParams:
    """Heston plus independent compound Poisson price jumps.

    Attributes:
    ----------
    heston : HestonParams
        Diffusive part
    intensity : float
        Jump intensity
    marks : MarkLaw
        Price-jump law (one-dimensional, embedded as (x, 0))
    """

    heston: HestonParams
    intensity: float
    marks: MarkLaw

    def __post_init__(self):
        if self.intensity < 0:
            raise ParameterError("jump intensity must be nonnegative")
        if self.kappa_minus >= 0:
            raise ParameterError("jump cgf must be finite below zero")
        if not math.isfinite(_mark_mgf(self.marks, 1.0)):
            raise ParameterError("jumps need a finite first exponential moment")

    @classmethod
    def exponential(
        cls, heston: HestonParams, intensity: float, mean: float
    ) -> "HestonJumpParams":
        """Downward exponential jumps with mean size ``mean``."""
        return cls(heston, intensity, PriceExponential(mean, direction=-1))

    @property
    def kappa_minus(self) -> float:
        return self.marks.u_bounds()[0]

    @property
    def kappa_plus(self) -> float:
        return self.marks.u_bounds()[1]

    def kappa_tilde(self, u: float) -> float:
        """Compensated jump cgf, zero at u = 0 and u = 1."""
        return compensated_jump_cgf(self.intensity, self.marks, u)

    def kappa_tilde_complex(self, u):
        return self.intensity * (
            self.marks.mgf(u, 0.0) - 1.0
        ) - u * self.intensity * (_mark_mgf(self.marks, 1.0) - 1.0)

    def to_parameters(self) -> AdmissibleParameterSet:
        tau_x = self.marks.truncation_moments()[0]
        drift = self.intensity * (
            tau_x - (_mark_mgf(self.marks, 1.0) - 1.0)
        )
        base = self.heston.to_parameters(b1=drift)
        return base.replace(m=CompoundPoisson(self.intensity, self.marks))


def _mark_mgf(marks: MarkLaw, u: float) -> float:
    if not marks.in_domain(u, 0.0):
        return math.inf
    return float(marks.mgf(u, 0.0))


def price_jump_cgf(intensity: float, marks: MarkLaw) -> AnalyticCgf:
    """Uncompensated cgf intensity (M(theta) - 1) of the price jumps."""
    lo, hi = marks.u_bounds()
    return AnalyticCgf(
        lambda theta: intensity * (_mark_mgf(marks, theta) - 1.0),
        kappa_minus=lo,
        kappa_plus=hi,
    )


def compensated_jump_cgf(intensity: float, marks: MarkLaw, u: float) -> float:
    """intensity (M(u) - 1) - u intensity (M(1) - 1); +inf off-domain."""
    if intensity == 0.0:
        return 0.0
    return price_jump_cgf(intensity, marks).compensated(u)


class HestonJumpGenerator(HestonGenerator):
    """Heston with state-independent jumps: F gains kappa~(u)."""

    name = "heston_jumps"

    def __init__(self, params: HestonJumpParams):
        super().__init__(params.heston)
        self.jump_params = params

    def F(self, u, w):
        jump = self.jump_params.kappa_tilde(u)
        if not math.isfinite(jump):
            return math.inf
        return super().F(u, w) + jump

    def F_complex(self, u, w):
        return super().F_complex(u, w) + self.jump_params.kappa_tilde_complex(
            np.asarray(u, dtype=complex)
        )

    def f_plus(self, u):
        return math.inf if math.isfinite(self.F(u, 0.0)) else 0.0

    def jump_free(self):
        return HestonGenerator(self.params)

    def jump_kappa_minus(self):
        return self.jump_params.kappa_minus


def heston_jump_generator(p: HestonJumpParams) -> HestonJumpGenerator:
    """Build the Heston generator with price jumps."""
    return HestonJumpGenerator(p)
