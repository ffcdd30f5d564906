"""Admissible parameter sets and their validation."""

from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from affinevol.core.jumps import JumpMeasureSpec, NoJumps
from affinevol.utils.logger import setup_logger

logger = setup_logger(__name__)

PSD_TOL = 1e-12


def _as_matrix(value) -> np.ndarray:
    matrix = np.asarray(value, dtype=float)
    if matrix.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {matrix.shape}")
    return matrix


def _as_vector(value) -> np.ndarray:
    vector = np.asarray(value, dtype=float)
    if vector.shape != (2,):
        raise ValueError(f"expected a 2-vector, got shape {vector.shape}")
    return vector


@dataclass(frozen=True, eq=False)
class AdmissibleParameterSet:
    """The tuple (a, alpha, b, beta, c, gamma, m, mu) defining F and R.

    Attributes:
    ----------
    a : np.ndarray
        State-independent diffusion matrix
    alpha : np.ndarray
        State-proportional diffusion matrix
    b : np.ndarray
        State-independent drift
    beta : np.ndarray
        State-proportional drift
    c : float
        State-independent killing rate
    gamma : float
        State-proportional killing rate
    m : JumpMeasureSpec
        State-independent jump measure (truncated with (x/(1+x^2), 0))
    mu : JumpMeasureSpec
        State-proportional jump measure (truncated with
        (x/(1+x^2), y/(1+y^2)))
    """

    a: np.ndarray = field(default_factory=lambda: np.zeros((2, 2)))
    alpha: np.ndarray = field(default_factory=lambda: np.zeros((2, 2)))
    b: np.ndarray = field(default_factory=lambda: np.zeros(2))
    beta: np.ndarray = field(default_factory=lambda: np.zeros(2))
    c: float = 0.0
    gamma: float = 0.0
    m: JumpMeasureSpec = field(default_factory=NoJumps)
    mu: JumpMeasureSpec = field(default_factory=NoJumps)

    def __post_init__(self):
        object.__setattr__(self, "a", _as_matrix(self.a))
        object.__setattr__(self, "alpha", _as_matrix(self.alpha))
        object.__setattr__(self, "b", _as_vector(self.b))
        object.__setattr__(self, "beta", _as_vector(self.beta))
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "gamma", float(self.gamma))
        for arr in (self.a, self.alpha, self.b, self.beta):
            arr.setflags(write=False)

    def replace(self, **changes: Any) -> "AdmissibleParameterSet":
        """Return a copy with some fields replaced."""
        fields = {
            "a": self.a,
            "alpha": self.alpha,
            "b": self.b,
            "beta": self.beta,
            "c": self.c,
            "gamma": self.gamma,
            "m": self.m,
            "mu": self.mu,
        }
        fields.update(changes)
        return AdmissibleParameterSet(**fields)


@dataclass(frozen=True)
class ConditionResult:
    """Outcome of one admissibility condition."""

    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    """Pass/fail list of the admissibility conditions."""

    conditions: List[ConditionResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(cond.passed for cond in self.conditions)

    def failures(self) -> List[ConditionResult]:
        return [cond for cond in self.conditions if not cond.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "conditions": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.conditions
            ],
        }

    def __str__(self) -> str:
        lines = [
            f"[{'pass' if c.passed else 'FAIL'}] {c.name}"
            + (f" ({c.detail})" if c.detail else "")
            for c in self.conditions
        ]
        return "\n".join(lines)


def _is_psd(matrix: np.ndarray) -> bool:
    if not np.allclose(matrix, matrix.T, atol=PSD_TOL):
        return False
    return bool(np.linalg.eigvalsh(matrix).min() >= -PSD_TOL)


def validate_admissibility(p: AdmissibleParameterSet) -> ValidationReport:
    """Check every admissibility condition and report each one.

    Parameters:
    ----------
        p: Parameter set to check

    Returns:
    -------
        Report with one entry per condition; passes iff all hold
    """
    report = ValidationReport()
    add = report.conditions.append

    add(ConditionResult("a positive semi-definite", _is_psd(p.a)))
    add(ConditionResult("alpha positive semi-definite", _is_psd(p.alpha)))
    zero_block = p.a[0, 1] == 0.0 and p.a[1, 0] == 0.0 and p.a[1, 1] == 0.0
    add(
        ConditionResult(
            "a12 = a21 = a22 = 0",
            bool(zero_block),
            "" if zero_block else f"a = {p.a.tolist()}",
        )
    )
    add(
        ConditionResult(
            "b in R x R>=0",
            bool(p.b[1] >= 0.0),
            "" if p.b[1] >= 0.0 else f"b2 = {p.b[1]!r}",
        )
    )
    add(
        ConditionResult(
            "beta in R^2", bool(np.all(np.isfinite(p.beta)))
        )
    )
    add(
        ConditionResult(
            "c >= 0", p.c >= 0.0, "" if p.c >= 0.0 else f"c = {p.c!r}"
        )
    )
    add(
        ConditionResult(
            "gamma >= 0",
            p.gamma >= 0.0,
            "" if p.gamma >= 0.0 else f"gamma = {p.gamma!r}",
        )
    )
    add(
        ConditionResult(
            "m integrates (x^2 + y) ^ 1", p.m.integrability_holds()
        )
    )

    if not report.passed:
        logger.info(
            "Admissibility failed: %s",
            ", ".join(c.name for c in report.failures()),
        )
    return report
