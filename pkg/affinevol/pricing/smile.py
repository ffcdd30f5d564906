"""Implied variance smiles, the forward smile limits and wing checks."""

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional

import numpy as np
from scipy import integrate

from affinevol.core.errors import BoundsError, ParameterError
from affinevol.core.generator import GeneratorPair
from affinevol.explosion.moments import Regime, as_regime, lee_slopes
from affinevol.models.heston import HestonParams, heston_closed_riccati
from affinevol.pricing.black_scholes import implied_variance
from affinevol.pricing.fourier import (
    DEFAULT_FOURIER,
    FourierConfig,
    FourierPricer,
)
from affinevol.riccati.solver import DEFAULT_CONFIG, SolverConfig
from affinevol.utils.logger import setup_logger
from affinevol.utils.table import Table

logger = setup_logger(__name__)


@dataclass(frozen=True)
class SmilePoint:
    """Call price and total implied variance at (T, xi)."""

    T: float
    xi: float
    call_price: float
    implied_variance: Optional[float]


@dataclass(frozen=True)
class ForwardSmilePoint:
    """Forward-start call price and implied volatility."""

    tau: float
    T: float
    xi: float
    price: float
    implied_vol: Optional[float]


def _implied(price: float, T: float, xi: float) -> Optional[float]:
    try:
        return implied_variance(price, T, xi)
    except BoundsError as exc:
        logger.warning("no implied variance at xi=%r: %s", xi, exc)
        return None


def smile(
    g: GeneratorPair,
    T: float,
    xis: Iterable[float],
    V0: Optional[float] = None,
    regime=Regime.PRIMARY,
    u_damp: Optional[float] = None,
    cfg: SolverConfig = DEFAULT_CONFIG,
    fourier: FourierConfig = DEFAULT_FOURIER,
) -> List[SmilePoint]:
    """Call prices and total implied variances V(T, xi) on a xi-grid."""
    xis = [float(x) for x in xis]
    pricer = FourierPricer(g, T, V0, regime, cfg, fourier)
    prices = pricer.call_prices(xis, u_damp)
    return [
        SmilePoint(T, xi, float(p), _implied(float(p), T, xi))
        for xi, p in zip(xis, prices)
    ]


def smile_table(points: List[SmilePoint]) -> Table:
    """Tabulate a smile."""
    table = Table(["T", "xi", "price", "implied_variance"])
    for p in points:
        table.add(p.T, p.xi, p.call_price, p.implied_variance)
    return table


def forward_smile(
    g: GeneratorPair,
    T: float,
    xis: Iterable[float],
    tau: float,
    V0: Optional[float] = None,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> List[ForwardSmilePoint]:
    """Forward-start smile sigma(tau, T, xi) for tau = 0 or tau = inf.

    tau = 0 is the vanilla smile started at V0; tau -> inf is the smile
    under the stationary variance law.
    """
    if tau == 0.0:
        regime = Regime.PRIMARY
    elif math.isinf(tau) and tau > 0:
        regime = Regime.STATIONARY
    else:
        raise ParameterError(
            f"forward smile supports tau = 0 or tau = inf, got {tau!r}"
        )
    points = smile(g, T, xis, V0, regime, cfg=cfg)
    return [
        ForwardSmilePoint(
            tau,
            p.T,
            p.xi,
            p.call_price,
            None
            if p.implied_variance is None
            else math.sqrt(p.implied_variance / p.T),
        )
        for p in points
    ]


def forward_smile_table(points: List[ForwardSmilePoint]) -> Table:
    """Tabulate a forward smile."""
    table = Table(["tau", "T", "xi", "price", "implied_vol"])
    for p in points:
        table.add(p.tau, p.T, p.xi, p.price, p.implied_vol)
    return table


def wing_slope_ratio(
    g: GeneratorPair,
    T: float,
    xi: float,
    V0: Optional[float] = None,
    regime=Regime.PRIMARY,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> float:
    """(V(T, xi) / |xi|) divided by the Lee slope of the matching wing.

    NaN when the price clips to intrinsic and no implied variance exists.
    """
    if xi == 0.0:
        raise ParameterError("wing slope needs xi != 0")
    regime = as_regime(regime)
    pricer = FourierPricer(g, T, V0, regime, cfg)
    price = float(pricer.call_prices([xi])[0])
    variance = _implied(price, T, xi)
    if variance is None:
        return math.nan
    slopes = lee_slopes(g, T, regime, moments=pricer.moments)
    predicted = slopes.right_slope if xi > 0 else slopes.left_slope
    if predicted == 0.0:
        return math.inf
    return variance / abs(xi) / predicted


def lewis_call_price_heston(
    p: HestonParams, T: float, xi: float, V0: float
) -> float:
    """Heston call price by the single-integral formula on Re u = 1/2.

    C = 1 - e^{xi/2} / pi * int_0^inf Re[e^{-i v xi} Phi(1/2 + i v)]
        / (v^2 + 1/4) dv, with Phi from the closed-form Riccati solution.
    """

    def integrand(v: float) -> float:
        phi, psi = heston_closed_riccati(p, T, np.array([0.5 + 1j * v]))
        value = np.exp(phi[0] + V0 * psi[0] - 1j * v * xi)
        return float(value.real) / (v * v + 0.25)

    total, _ = integrate.quad(
        integrand, 0.0, math.inf, epsabs=1e-13, epsrel=1e-12, limit=500
    )
    return 1.0 - math.exp(0.5 * xi) / math.pi * total
