"""Moment explosion times in the primary and stationary regimes.

T*(u) is the first time E[S_t^u] becomes infinite. It is 0 when F(u,0),
R(u,0) or chi(u) is infinite, +inf when psi(., u, 0) settles at a zero of
R(u, .) inside the domain of F, and otherwise the time psi needs to reach
min(f_+(u), r_+(u)). The stationary time additionally caps that level at
l_+.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

from scipy import optimize

from affinevol.core.errors import AssumptionError, NoRootError
from affinevol.core.generator import (
    GeneratorPair,
    chi,
    domain_boundary_F,
    domain_boundary_R,
    eval_F,
    eval_R,
)
from affinevol.longterm.equilibria import smallest_zero
from affinevol.longterm.stationary import l_plus
from affinevol.riccati.solver import implicit_time_of_level
from affinevol.utils.logger import setup_logger

logger = setup_logger(__name__)


class Branch(Enum):
    """Rule that produced an explosion time."""

    IMMEDIATE = "immediate"
    NEVER = "never"
    INTEGRAL = "integral"


@dataclass(frozen=True)
class ExplosionTime:
    """An explosion time and the rule that produced it."""

    u: float
    value: float
    branch: Branch

    def __float__(self) -> float:
        return self.value


def _valley(g: GeneratorPair, u: float, upper: float) -> Tuple[float, ...]:
    """Interior minimiser of R(u, .) on [0, upper] as a quadrature hint."""
    if g.dR_dw(u, 0.0) >= 0.0:
        return ()
    if math.isfinite(upper):
        hi = upper * (1.0 - 1e-12)
    else:
        hi = 1.0
        while eval_R(g, u, 2.0 * hi) < eval_R(g, u, hi) and hi < 1e12:
            hi *= 2.0
        hi *= 2.0
    result = optimize.minimize_scalar(
        lambda w: eval_R(g, u, w),
        bounds=(0.0, hi),
        method="bounded",
        options={"xatol": 1e-12 * max(1.0, hi)},
    )
    return (float(result.x),)


def _settles(g: GeneratorPair, u: float, upper: float) -> bool:
    """psi(., u, 0) converges to a zero of R(u, .) below ``upper``."""
    if eval_R(g, u, 0.0) <= 0.0:
        return True
    try:
        w = smallest_zero(g, u)
    except NoRootError:
        return False
    return w <= upper and math.isfinite(eval_F(g, u, w))


def _immediate(g: GeneratorPair, u: float) -> bool:
    f0, r0 = eval_F(g, u, 0.0), eval_R(g, u, 0.0)
    if not (math.isfinite(f0) and math.isfinite(r0)):
        return True
    return not math.isfinite(chi(g, u))


def _time(
    g: GeneratorPair, u: float, cap: float = math.inf
) -> ExplosionTime:
    if _immediate(g, u):
        return ExplosionTime(u, 0.0, Branch.IMMEDIATE)
    upper = min(domain_boundary_F(g, u), domain_boundary_R(g, u), cap)
    if _settles(g, u, upper):
        return ExplosionTime(u, math.inf, Branch.NEVER)
    if upper <= 0.0:
        return ExplosionTime(u, 0.0, Branch.IMMEDIATE)
    value = implicit_time_of_level(
        g, u, 0.0, upper, points=_valley(g, u, upper)
    )
    return ExplosionTime(u, value, Branch.INTEGRAL)


def explosion_time(g: GeneratorPair, u: float) -> ExplosionTime:
    """T*(u) with the branch that produced it."""
    return _time(g, float(u))


def explosion_time_stationary(
    g: GeneratorPair, u: float, level: Optional[float] = None
) -> ExplosionTime:
    """T*^S(u) for V_0 drawn from the stationary law.

    ``level`` is l_+ when the caller already knows it.

    Raises:
    ------
        AssumptionError: Unless chi(0) < 0 and m satisfies the log-moment
        condition
    """
    level = l_plus(g) if level is None else level
    return _time(g, float(u), cap=level)


@dataclass(frozen=True)
class ExplosionProfile:
    """Primary and stationary explosion times at one u."""

    u: float
    primary: ExplosionTime
    stationary: Optional[ExplosionTime]

    @property
    def T_star(self) -> float:
        return self.primary.value

    @property
    def T_star_S(self) -> Optional[float]:
        return None if self.stationary is None else self.stationary.value


def explosion_profile(
    g: GeneratorPair, u: float, level: Optional[float] = None
) -> ExplosionProfile:
    """Both explosion times at ``u``.

    The stationary one is None when the stationary law does not exist.
    """
    primary = explosion_time(g, u)
    try:
        stationary = explosion_time_stationary(g, u, level)
    except AssumptionError as exc:
        logger.debug("no stationary regime: %s", exc)
        stationary = None
    return ExplosionProfile(float(u), primary, stationary)
