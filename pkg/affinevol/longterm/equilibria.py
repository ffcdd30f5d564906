"""Long-term behaviour of the Riccati flow.

For each u the stable equilibrium w(u) is the smallest zero of R(u, .),
the unstable one is the next zero. ``I`` is the interval where w(u) exists
and ``J`` the subinterval where h(u) = F(u, w(u)) is finite.
"""

import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np
from scipy import optimize

from affinevol.core.errors import AssumptionError, NoRootError
from affinevol.core.generator import (
    GeneratorPair,
    chi,
    domain_boundary_R,
    eval_F,
    eval_R,
)
from affinevol.utils.logger import setup_logger
from affinevol.utils.numerics import BRACKET_CAP, bisect_predicate
from affinevol.utils.table import Table

logger = setup_logger(__name__)

U_CAP = 1e6
ENDPOINT_TOL = 1e-10
TANGENCY_TOL = 1e-12
ROOT_XTOL = 1e-14


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi], possibly unbounded."""

    lo: float
    hi: float

    def contains(self, u: float) -> bool:
        return self.lo <= u <= self.hi

    def interior(self, u: float) -> bool:
        return self.lo < u < self.hi

    def __str__(self) -> str:
        return f"[{self.lo:.10g}, {self.hi:.10g}]"


def require_long_term(g: GeneratorPair) -> Tuple[float, float]:
    """Return (chi(0), chi(1)), raising unless both are negative."""
    x0, x1 = chi(g, 0.0), chi(g, 1.0)
    if not (x0 < 0.0 and x1 < 0.0):
        raise AssumptionError(
            f"long-term analysis needs chi(0) < 0 and chi(1) < 0, "
            f"got chi(0) = {x0!r}, chi(1) = {x1!r}"
        )
    return x0, x1


def _root(g: GeneratorPair, u: float, lo: float, hi: float) -> float:
    return optimize.brentq(
        lambda w: eval_R(g, u, w), lo, hi, xtol=ROOT_XTOL, maxiter=200
    )


def _next_trial(w: float, r_plus: float) -> float:
    if math.isinf(r_plus):
        return 2.0 * w
    return min(2.0 * w, 0.5 * (w + r_plus))


def _first_trial(r_plus: float) -> float:
    return 1.0 if math.isinf(r_plus) else min(1.0, 0.5 * r_plus)


def smallest_zero(g: GeneratorPair, u: float) -> float:
    """Smallest zero of R(u, .) without the long-term assumption check."""
    if u in (0.0, 1.0):
        return 0.0
    r0 = eval_R(g, u, 0.0)
    if not math.isfinite(r0):
        raise NoRootError(u, f"R({u!r}, 0) = inf")
    if r0 == 0.0:
        return 0.0
    if r0 < 0.0:
        w = -1.0
        while eval_R(g, u, w) <= 0.0:
            if w < -BRACKET_CAP:
                raise NoRootError(u, f"R({u!r}, .) stays negative below 0")
            w *= 2.0
        return _root(g, u, w, 0.0)

    if g.dR_dw(u, 0.0) >= 0.0:
        raise NoRootError(u)
    r_plus = domain_boundary_R(g, u)
    points, values = [0.0], [r0]
    w = _first_trial(r_plus)
    while True:
        v = eval_R(g, u, w)
        if v <= 0.0:
            return _root(g, u, points[-1], w)
        if v >= values[-1]:
            lo = points[-2] if len(points) > 1 else 0.0
            return _root_near_minimum(g, u, lo, w, r0)
        points.append(w)
        values.append(v)
        at_boundary = math.isfinite(r_plus) and (
            r_plus - w <= 1e-12 * max(1.0, r_plus)
        )
        if w > BRACKET_CAP or at_boundary:
            raise NoRootError(
                u, f"R({u!r}, .) positive up to r_+ = {r_plus!r}"
            )
        w = _next_trial(w, r_plus)


def _root_near_minimum(
    g: GeneratorPair, u: float, lo: float, hi: float, r0: float
) -> float:
    result = optimize.minimize_scalar(
        lambda w: eval_R(g, u, w),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-13 * max(1.0, hi)},
    )
    w_min = float(result.x)
    r_min = eval_R(g, u, w_min)
    if r_min < 0.0:
        return _root(g, u, lo, w_min)
    if r_min <= TANGENCY_TOL * max(1.0, abs(r0)):
        return w_min
    raise NoRootError(u, f"min R({u!r}, .) = {r_min!r} > 0")


def solve_w(g: GeneratorPair, u: float) -> float:
    """Stable equilibrium w(u), the smallest zero of R(u, .).

    Raises:
    ------
        AssumptionError: Unless chi(0) < 0 and chi(1) < 0
        NoRootError: If u is not in I
    """
    require_long_term(g)
    return smallest_zero(g, u)


def _in_I(g: GeneratorPair, u: float) -> bool:
    try:
        smallest_zero(g, u)
    except NoRootError:
        return False
    return True


def _in_J(g: GeneratorPair, u: float) -> bool:
    try:
        w = smallest_zero(g, u)
    except NoRootError:
        return False
    return math.isfinite(eval_F(g, u, w))


def _endpoint(pred, anchor: float, direction: float) -> float:
    last_in, k = anchor, 0
    while True:
        trial = anchor + direction * 2.0**k
        if not pred(trial):
            break
        last_in = trial
        if abs(trial) >= U_CAP:
            return direction * math.inf
        k += 1
    return bisect_predicate(
        pred, last_in, trial, rel_tol=1e-15, abs_tol=ENDPOINT_TOL
    )


def compute_interval_I(g: GeneratorPair) -> Interval:
    """I = {u : R(u, .) has a zero}, a closed interval containing [0, 1]."""
    require_long_term(g)
    pred = lambda u: _in_I(g, u)  # noqa: E731
    interval = Interval(_endpoint(pred, 0.0, -1.0), _endpoint(pred, 1.0, 1.0))
    logger.debug("I = %s for %s", interval, g)
    return interval


def _J_endpoint(
    g: GeneratorPair, anchor: float, end: float, samples: int = 64
) -> float:
    if math.isfinite(end) and _in_J(g, end):
        return end
    pred = lambda u: _in_J(g, u)  # noqa: E731
    if math.isinf(end):
        return _endpoint(pred, anchor, math.copysign(1.0, end))
    grid = np.linspace(anchor, end, samples + 1)
    last_in = anchor
    for u in grid[1:]:
        if not pred(float(u)):
            return bisect_predicate(
                pred, last_in, float(u), rel_tol=1e-15, abs_tol=ENDPOINT_TOL
            )
        last_in = float(u)
    return last_in


def compute_interval_J(
    g: GeneratorPair, I: Optional[Interval] = None
) -> Interval:
    """J = {u in I : F(u, w(u)) < inf}."""
    I = I or compute_interval_I(g)
    return Interval(_J_endpoint(g, 0.0, I.lo), _J_endpoint(g, 1.0, I.hi))


def compute_h(g: GeneratorPair, u: float) -> float:
    """h(u) = F(u, w(u)), +inf when u lies in I but not in J."""
    return eval_F(g, u, solve_w(g, u))


@dataclass(frozen=True)
class Equilibria:
    """Stable and unstable zeros of R(u, .)."""

    u: float
    stable: float
    unstable: Optional[float]
    marginal: bool

    @property
    def kind(self) -> str:
        return "marginal" if self.marginal else "hyperbolic"


def unstable_zero(
    g: GeneratorPair, u: float, stable: float
) -> Optional[float]:
    """Next zero of R(u, .) above max(0, stable), or None."""
    start = max(0.0, stable)
    if eval_R(g, u, start) >= 0.0:
        start += max(1e-8, 1e-6 * abs(start))
        if eval_R(g, u, start) >= 0.0:
            return None
    r_plus = domain_boundary_R(g, u)
    last_neg, step = start, 1.0
    while True:
        w = start + step
        if w >= r_plus:
            w = 0.5 * (last_neg + r_plus)
            if r_plus - last_neg <= 1e-12 * max(1.0, r_plus):
                return None
        v = eval_R(g, u, w)
        if v > 0.0:
            return _root(g, u, last_neg, w)
        last_neg = w
        if w - start > BRACKET_CAP:
            return None
        step = 2.0 * (w - start)


def classify_equilibria(g: GeneratorPair, u: float) -> Equilibria:
    """Stable and unstable zeros of R(u, .) and their hyperbolicity."""
    stable = solve_w(g, u)
    slope = g.dR_dw(u, stable)
    marginal = abs(slope) <= 1e-8 * max(1.0, abs(stable))
    unstable = None if marginal else unstable_zero(g, u, stable)
    return Equilibria(u, stable, unstable, marginal)


@dataclass(frozen=True)
class ConvergenceBounds:
    """Rate constants for the convergence of psi and phi/t.

    |psi(t,u,0) - w(u)| <= C exp(-rate t) and
    |phi(t,u,0)/t - h(u)| <= omega C (1 - exp(-rate t)) / (rate t)
    for every u in [0, 1].
    """

    rate: float
    omega: float
    constant: float

    def psi_bound(self, t: float) -> float:
        return self.constant * math.exp(-self.rate * t)

    def phi_rate_bound(self, t: float) -> float:
        if t <= 0.0:
            return self.omega * self.constant
        x = self.rate * t
        return self.omega * self.constant * -math.expm1(-x) / x


def _refined_max(fn, grid: np.ndarray) -> float:
    values = np.array([fn(float(u)) for u in grid])
    k = int(np.argmax(values))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    if hi <= lo:
        return float(values[k])
    result = optimize.minimize_scalar(
        lambda u: -fn(u),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return max(float(values[k]), -float(result.fun))


def convergence_bounds(
    g: GeneratorPair, samples: int = 101
) -> ConvergenceBounds:
    """Compute rate = min(|chi(0)|, |chi(1)|), omega and C."""
    x0, x1 = require_long_term(g)
    grid = np.linspace(0.0, 1.0, samples)
    omega = _refined_max(lambda u: g.dF_dw(u, 0.0), grid)
    constant = _refined_max(lambda u: abs(smallest_zero(g, u)), grid)
    return ConvergenceBounds(min(abs(x0), abs(x1)), omega, constant)


@dataclass(frozen=True)
class ProfileRow:
    """One u-sample of the long-term profile."""

    u: float
    w: Optional[float]
    h: Optional[float]
    unstable: Optional[float]
    in_I: bool
    in_J: bool


@dataclass
class LongTermProfile:
    """I, J, the rate constants and sampled (w, h, w~) curves."""

    I: Interval
    J: Interval
    bounds: ConvergenceBounds
    rows: List[ProfileRow]

    def w(self, u: float) -> Optional[float]:
        return next((r.w for r in self.rows if r.u == u), None)

    def to_table(self) -> Table:
        table = Table(
            ["u", "w", "h", "in_I", "in_J", "w_unstable"],
            footer=[
                f"I={self.I}",
                f"J={self.J}",
                f"rate={self.bounds.rate!r} omega={self.bounds.omega!r} "
                f"C={self.bounds.constant!r}",
            ],
        )
        for r in self.rows:
            table.add(r.u, r.w, r.h, r.in_I, r.in_J, r.unstable)
        return table


def _profile_row(g: GeneratorPair, u: float, I: Interval, J: Interval):
    if not I.contains(u):
        return ProfileRow(u, None, None, None, False, False)
    try:
        eq = classify_equilibria(g, u)
    except NoRootError:
        logger.debug("u=%r on the edge of I=%s has no root", u, I)
        return ProfileRow(u, None, None, None, False, False)
    h = eval_F(g, u, eq.stable)
    in_J = J.contains(u) and math.isfinite(h)
    return ProfileRow(
        u, eq.stable, h if in_J else None, eq.unstable, True, in_J
    )


def long_term_profile(
    g: GeneratorPair, u_grid: Iterable[float], mapper: Callable = map
) -> LongTermProfile:
    """Sample w, h and the unstable branch on ``u_grid``.

    ``mapper`` evaluates the rows; it must preserve order.
    """
    I = compute_interval_I(g)
    J = compute_interval_J(g, I)
    rows = list(mapper(lambda u: _profile_row(g, float(u), I, J), u_grid))
    return LongTermProfile(I, J, convergence_bounds(g), rows)
