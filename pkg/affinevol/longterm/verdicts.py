"""Conservativeness and martingale verdicts.

The process is conservative iff F(0,0) = R(0,0) = 0 and the Osgood
integral of 1/R(0, .) diverges at 0-. A finite chi(0) is sufficient. The
martingale property is the same test at u = 1.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import accumulate
from typing import List

from affinevol.core.errors import AffineModelError
from affinevol.core.generator import GeneratorPair, chi, eval_F, eval_R
from affinevol.riccati.solver import implicit_time_of_level
from affinevol.utils.logger import setup_logger

logger = setup_logger(__name__)

OSGOOD_START = 0.1
OSGOOD_DEPTH = 12
DIVERGENT_RATIO = 0.8
CONVERGENT_RATIO = 0.5


class Verdict(Enum):
    """Outcome of a property check."""

    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


@dataclass
class PropertyReport:
    """Verdict on one property plus the evidence behind it."""

    prop: str
    verdict: Verdict
    reason: str
    partial_integrals: List[float] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.YES

    def __str__(self) -> str:
        return f"{self.prop}: {self.verdict.value} ({self.reason})"


def osgood_increments(
    g: GeneratorPair,
    u: float,
    start: float = OSGOOD_START,
    depth: int = OSGOOD_DEPTH,
) -> List[float]:
    """int d eta / R(u, eta) over each decade toward 0-, k = 1..depth.

    Each decade is a separate quadrature with a relative tolerance, so the
    k-th entry stays accurate when it is far below the running total.
    """
    return [
        implicit_time_of_level(
            g, u, -start * 10.0 ** -(k - 1), -start * 10.0**-k
        )
        for k in range(1, depth + 1)
    ]


def osgood_partial_integrals(
    g: GeneratorPair,
    u: float,
    start: float = OSGOOD_START,
    depth: int = OSGOOD_DEPTH,
) -> List[float]:
    """int_{-start}^{-start 10^-k} d eta / R(u, eta) for k = 1..depth."""
    return list(accumulate(osgood_increments(g, u, start, depth)))


def classify_increments(increments: List[float]) -> Verdict:
    """YES if the decade increments do not decay, NO if they decay fast."""
    steps = [abs(x) for x in increments]
    ratios = [b / a for a, b in zip(steps, steps[1:]) if a > 0]
    tail = ratios[-4:]
    if len(tail) < 4:
        return Verdict.INCONCLUSIVE
    if all(r >= DIVERGENT_RATIO for r in tail):
        return Verdict.YES
    if all(r <= CONVERGENT_RATIO for r in tail):
        return Verdict.NO
    return Verdict.INCONCLUSIVE


def classify_osgood(partials: List[float]) -> Verdict:
    """YES if the partial integrals diverge, NO if they converge."""
    return classify_increments(
        [b - a for a, b in zip(partials, partials[1:])]
    )


def _check(
    g: GeneratorPair, u: float, prop: str, depth: int
) -> PropertyReport:
    f0, r0 = eval_F(g, u, 0.0), eval_R(g, u, 0.0)
    if f0 != 0.0 or r0 != 0.0:
        return PropertyReport(
            prop, Verdict.NO, f"F({u:g},0) = {f0!r}, R({u:g},0) = {r0!r}"
        )
    rate = chi(g, u)
    if math.isfinite(rate):
        return PropertyReport(
            prop, Verdict.YES, f"chi({u:g}) = {rate!r} is finite"
        )
    try:
        increments = osgood_increments(g, u, depth=depth)
    except AffineModelError as exc:
        logger.warning("Osgood test at u=%r failed: %s", u, exc)
        return PropertyReport(prop, Verdict.INCONCLUSIVE, str(exc))
    verdict = classify_increments(increments)
    reason = {
        Verdict.YES: "Osgood integral diverges",
        Verdict.NO: "Osgood integral converges",
        Verdict.INCONCLUSIVE: f"Osgood test undecided at depth {depth}",
    }[verdict]
    if verdict is Verdict.INCONCLUSIVE:
        logger.warning("%s at u=%r: %s", prop, u, reason)
    return PropertyReport(
        prop, verdict, reason, list(accumulate(increments))
    )


def conservativeness_check(
    g: GeneratorPair, depth: int = OSGOOD_DEPTH
) -> PropertyReport:
    """Decide whether the price process is conservative."""
    return _check(g, 0.0, "conservative", depth)


def martingale_check(
    g: GeneratorPair, depth: int = OSGOOD_DEPTH
) -> PropertyReport:
    """Decide whether the discounted price is a martingale."""
    base = conservativeness_check(g, depth)
    if base.verdict is Verdict.NO:
        return PropertyReport(
            "martingale", Verdict.NO, f"not conservative: {base.reason}"
        )
    if base.verdict is Verdict.INCONCLUSIVE:
        return PropertyReport(
            "martingale", Verdict.INCONCLUSIVE, base.reason
        )
    return _check(g, 1.0, "martingale", depth)
