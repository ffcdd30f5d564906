"""Black-Scholes prices and implied variance in normalised units.

Spot and rates are folded into the log-moneyness xi = log(K / F), so a call
pays (e^X - e^xi)_+ with E[e^X] = 1 and V denotes total variance sigma^2 T.
"""

import math

from scipy import optimize
from scipy.stats import norm

from affinevol.core.errors import BoundsError, ParameterError

VARIANCE_TOL = 1e-10


def intrinsic(xi: float) -> float:
    """Lower no-arbitrage bound (1 - e^xi)_+ of the call price."""
    return max(1.0 - math.exp(xi), 0.0)


def bs_call(xi: float, variance: float) -> float:
    """Call price for total variance ``variance``."""
    if variance <= 0.0:
        return intrinsic(xi)
    s = math.sqrt(variance)
    d1 = -xi / s + 0.5 * s
    return float(norm.cdf(d1) - math.exp(xi) * norm.cdf(d1 - s))


def implied_variance(
    price: float, T: float, xi: float, tol: float = VARIANCE_TOL
) -> float:
    """Total implied variance V(T, xi) reproducing ``price``.

    Raises:
    ------
        BoundsError: Unless intrinsic(xi) < price < 1
    """
    if not T > 0.0:
        raise ParameterError(f"maturity must be positive, got {T!r}")
    lower = intrinsic(xi)
    if not lower < price < 1.0:
        raise BoundsError(
            f"price {price!r} outside ({lower!r}, 1) at xi={xi!r}"
        )
    hi = 1.0
    while bs_call(xi, hi) <= price:
        hi *= 2.0
        if hi > 1e6:
            raise BoundsError(f"price {price!r} too close to 1")
    return optimize.brentq(
        lambda v: bs_call(xi, v) - price, 0.0, hi, xtol=tol, maxiter=500
    )
