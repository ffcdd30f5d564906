"""Stationary law of the variance factor.

Its cumulant generating function is
l(w) = int_w^0 F(0, eta) / R(0, eta) d eta, finite for w < l_+.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from affinevol.core.errors import AssumptionError, NonConvergentIntegralError
from affinevol.core.generator import (
    GeneratorPair,
    chi,
    domain_boundary_F,
    domain_boundary_R,
    eval_F,
    eval_R,
)
from affinevol.longterm.equilibria import unstable_zero
from affinevol.utils.logger import setup_logger

logger = setup_logger(__name__)

NEAR_ZERO = 1e-10
SEGMENT_NODES = 64


def require_stationary(g: GeneratorPair) -> float:
    """Return chi(0), raising unless the stationary law exists."""
    x0 = chi(g, 0.0)
    if not x0 < 0.0:
        raise AssumptionError(f"stationary law needs chi(0) < 0, got {x0!r}")
    params = getattr(g, "params", None)
    measure = getattr(params, "m", None)
    if measure is not None and not measure.log_moment_condition:
        raise AssumptionError(
            "jump measure of F violates the logarithmic moment condition"
        )
    return x0


def stationary_limit(g: GeneratorPair) -> float:
    """min(w~(0), f_+(0), r_+(0)), the right end of dom l."""
    unstable = unstable_zero(g, 0.0, 0.0)
    limit = math.inf if unstable is None else unstable
    return min(limit, domain_boundary_F(g, 0.0), domain_boundary_R(g, 0.0))


def l_plus(g: GeneratorPair) -> float:
    """Right end of the domain of the stationary cgf."""
    require_stationary(g)
    hint = g.l_plus_hint()
    return hint if hint is not None else stationary_limit(g)


def _ratio(g: GeneratorPair, slope0: float):
    def ratio(eta: float) -> float:
        if abs(eta) < NEAR_ZERO:
            return slope0
        return eval_F(g, 0.0, eta) / eval_R(g, 0.0, eta)

    return ratio


def numeric_stationary_cgf(g: GeneratorPair, w: float) -> float:
    """l(w) by quadrature, +inf for w >= l_+."""
    x0 = require_stationary(g)
    if w == 0.0:
        return 0.0
    if w > 0.0 and w >= stationary_limit(g):
        return math.inf
    ratio = _ratio(g, g.dF_dw(0.0, 0.0) / x0)
    sign = 1.0 if w < 0.0 else -1.0
    # eta = -sign * exp(-s) maps the tail at 0 to s -> inf
    value, _ = integrate.quad(
        lambda s: ratio(-sign * math.exp(-s)) * math.exp(-s),
        -math.log(abs(w)),
        math.inf,
        epsabs=0.0,
        epsrel=1e-12,
        limit=200,
    )
    if math.isnan(value):
        raise NonConvergentIntegralError(f"l({w!r}) returned NaN")
    return sign * value


def stationary_cgf(g: GeneratorPair, w: float) -> float:
    """l(w), using a closed form when the model provides one."""
    require_stationary(g)
    hint = g.stationary_cgf_hint(w)
    if hint is not None:
        return hint
    return numeric_stationary_cgf(g, w)


def stationary_cgf_complex(g: GeneratorPair, w: np.ndarray) -> np.ndarray:
    """l(w) for complex w along the segment [0, w].

    l(w) = -w int_0^1 F(0, s w) / R(0, s w) ds by Gauss-Legendre.
    """
    w = np.asarray(w, dtype=complex)
    hint = g.stationary_cgf_complex(w)
    if hint is not None:
        return hint
    x0 = require_stationary(g)
    slope0 = g.dF_dw(0.0, 0.0) / x0
    nodes, weights = np.polynomial.legendre.leggauss(SEGMENT_NODES)
    s = 0.5 * (nodes + 1.0)
    eta = w[..., None] * s
    zero = np.zeros_like(eta)
    ratio = g.F_complex(zero, eta) / g.R_complex(zero, eta)
    value = -w * (0.5 * ratio @ weights)
    tiny = np.abs(w) < 1e-12
    return np.where(tiny, -w * slope0, value)


@dataclass
class StationaryLaw:
    """Stationary distribution of V through its cgf."""

    generator: GeneratorPair
    l_plus: float

    def cgf(self, w: float) -> float:
        return stationary_cgf(self.generator, w)

    def cgf_complex(self, w: np.ndarray) -> np.ndarray:
        return stationary_cgf_complex(self.generator, w)

    def mean(self) -> float:
        """E[V_inf] = l'(0) = -F_w(0,0) / chi(0)."""
        return -self.generator.dF_dw(0.0, 0.0) / chi(self.generator, 0.0)


def stationary_law(g: GeneratorPair) -> StationaryLaw:
    """The invariant law of V; raises AssumptionError when it does not exist."""
    return StationaryLaw(g, l_plus(g))
