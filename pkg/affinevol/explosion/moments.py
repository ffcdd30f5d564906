"""Critical moments, Lee wing slopes and the jump cutoff time."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from affinevol.core.errors import DomainError, ParameterError
from affinevol.core.generator import GeneratorPair
from affinevol.explosion.times import (
    explosion_time,
    explosion_time_stationary,
)
from affinevol.longterm.stationary import l_plus
from affinevol.utils.logger import setup_logger
from affinevol.utils.numerics import bisect_predicate

logger = setup_logger(__name__)

MOMENT_CAP = 1e6


class Regime(Enum):
    """Law of V_0: the given initial value or the stationary law."""

    PRIMARY = "primary"
    STATIONARY = "stationary"


def as_regime(regime) -> Regime:
    """Coerce a name or Regime; unknown names raise ParameterError."""
    try:
        return Regime(regime.value if isinstance(regime, Regime) else regime)
    except ValueError:
        raise ParameterError(f"unknown regime: {regime!r}") from None


def time_function(
    g: GeneratorPair, regime=Regime.PRIMARY
) -> Callable[[float], float]:
    """u -> T*(u) in the requested regime."""
    if as_regime(regime) is Regime.PRIMARY:
        return lambda u: explosion_time(g, u).value
    level = l_plus(g)
    return lambda u: explosion_time_stationary(g, u, level).value


def _outward(
    alive: Callable[[float], bool], anchor: float, direction: float
) -> float:
    last, k = anchor, 0
    while True:
        trial = anchor + direction * 2.0**k
        if not alive(trial):
            break
        last = trial
        if abs(trial) >= MOMENT_CAP:
            return direction * math.inf
        k += 1
    return bisect_predicate(alive, last, trial, rel_tol=1e-13)


@dataclass(frozen=True)
class CriticalMoments:
    """Bounds of the finite-moment strip at maturity T."""

    T: float
    u_minus: float
    u_plus: float
    regime: Regime


def critical_moments(
    g: GeneratorPair, T: float, regime=Regime.PRIMARY
) -> CriticalMoments:
    """u_+(T) = sup{u >= 1 : T*(u) > T} and u_-(T) = inf{u <= 0 : ...}.

    Each side is bracketed outward from [0, 1] by doubling and refined by
    bisection; a side with no explosion up to |u| = 1e6 reports +-inf.
    """
    if not T > 0.0:
        raise ParameterError(f"maturity must be positive, got {T!r}")
    regime = as_regime(regime)
    times = time_function(g, regime)
    alive = lambda u: times(u) > T  # noqa: E731
    result = CriticalMoments(
        T, _outward(alive, 0.0, -1.0), _outward(alive, 1.0, 1.0), regime
    )
    logger.debug("critical moments %s", result)
    return result


def sigma(x: float) -> float:
    """Lee's map 2 - 4(sqrt(x^2 + x) - x), with sigma(inf) = 0."""
    if math.isinf(x):
        return 0.0
    if x < 0.0:
        raise ParameterError(f"sigma needs x >= 0, got {x!r}")
    if x == 0.0:
        return 2.0
    return 2.0 - 4.0 * x / (math.sqrt(x * x + x) + x)


@dataclass(frozen=True)
class WingSlopes:
    """Asymptotic slopes of the implied total variance V(T, xi) / |xi|."""

    T: float
    u_minus: float
    u_plus: float
    left_slope: float
    right_slope: float
    regime: Regime = Regime.PRIMARY


def lee_slopes(
    g: GeneratorPair,
    T: float,
    regime=Regime.PRIMARY,
    moments: Optional[CriticalMoments] = None,
) -> WingSlopes:
    """Wing slopes sigma(-u_-(T)) and sigma(u_+(T) - 1)."""
    moments = moments or critical_moments(g, T, regime)
    return WingSlopes(
        T,
        moments.u_minus,
        moments.u_plus,
        sigma(-moments.u_minus),
        sigma(moments.u_plus - 1.0),
        moments.regime,
    )


def cutoff_time(g: GeneratorPair) -> float:
    """T# = T*(kappa_-) of the jump-free model.

    After T# the left critical moment no longer feels the jumps. Returns
    +inf when kappa_- = -inf.

    Raises:
    ------
        DomainError: If the model has no state-independent jump part
    """
    base, kappa_minus = g.jump_free(), g.jump_kappa_minus()
    if base is None or kappa_minus is None:
        raise DomainError(f"{g!r} has no state-independent jump part")
    if math.isinf(kappa_minus):
        return math.inf
    cutoff = explosion_time(base, kappa_minus).value
    logger.info("cutoff time T# = %r at kappa_- = %r", cutoff, kappa_minus)
    return cutoff
