"""Small numerical helpers shared across subpackages.

Extended reals are plain floats where ``math.inf`` is a legal value and NaN
is not.
"""

import math
from typing import Callable

import numpy as np

from affinevol.core.errors import NonConvergentIntegralError

BRACKET_CAP = 1e12
MAX_BISECTIONS = 60


def checked(value: float, what: str) -> float:
    """Return ``value`` as float, raising if it is NaN."""
    value = float(value)
    if math.isnan(value):
        raise NonConvergentIntegralError(f"{what} evaluated to NaN")
    return value


def finiteness_boundary(
    fn: Callable[[float], float],
    start: float = 0.0,
    cap: float = BRACKET_CAP,
    rel_tol: float = 1e-10,
) -> float:
    """Locate ``sup{w >= start : fn(w) < inf}``.

    The bracket grows geometrically from ``start + 1`` and the boundary is
    then refined by bisection.

    Parameters:
    ----------
        fn: Extended-real map, finite on an interval (-inf, boundary)
        start: Left end of the search
        cap: Largest distance tried before returning +inf
        rel_tol: Relative tolerance on the located boundary

    Returns:
    -------
        The boundary, ``start`` when fn(start) is infinite, or +inf
    """
    if not math.isfinite(fn(start)):
        return start
    lo, step = start, 1.0
    while True:
        hi = start + step
        if not math.isfinite(fn(hi)):
            break
        lo = hi
        if step >= cap:
            return math.inf
        step *= 2.0
    return bisect_predicate(
        lambda w: math.isfinite(fn(w)), lo, hi, rel_tol=rel_tol
    )


def bisect_predicate(
    pred: Callable[[float], bool],
    lo: float,
    hi: float,
    rel_tol: float = 1e-12,
    abs_tol: float = 0.0,
    max_iter: int = MAX_BISECTIONS,
) -> float:
    """Bisect a monotone predicate, true at ``lo`` and false at ``hi``.

    Returns the last point where the predicate held.
    """
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
        if abs(hi - lo) <= max(abs_tol, rel_tol * max(abs(lo), abs(hi))):
            break
    return lo


def derivative(
    fn: Callable[[float], float], w: float, interior_step: float = 1e-4
) -> float:
    """Richardson-extrapolated derivative of ``fn`` at ``w``.

    Uses central differences when ``fn`` is finite to the right of ``w``;
    otherwise a backward difference with step 1e-6 * max(1, |w|).
    """
    f0 = fn(w)
    if not math.isfinite(f0):
        return math.inf
    scale = max(1.0, abs(w))
    h = interior_step * scale
    if math.isfinite(fn(w + h)):
        d_h = (fn(w + h) - fn(w - h)) / (2.0 * h)
        d_h2 = (fn(w + 0.5 * h) - fn(w - 0.5 * h)) / h
        return (4.0 * d_h2 - d_h) / 3.0
    h = 1e-6 * scale
    d_h = (f0 - fn(w - h)) / h
    d_h2 = (f0 - fn(w - 0.5 * h)) / (0.5 * h)
    return 2.0 * d_h2 - d_h


def gauss_legendre_panels(
    a: float, b: float, n_panels: int, order: int = 16
) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on ``[a, b]``."""
    x, wts = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * wts[None, :]).ravel()
    return nodes, weights
