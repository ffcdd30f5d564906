"""Embedded Cash-Karp 5(4) Runge-Kutta stepper.

The stepper works on numpy state vectors of any scalar kind (float or
complex), so the same code integrates the real Riccati system and the
vectorised complex system used for Fourier pricing.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

# Cash-Karp tableau
C = np.array([0.0, 1 / 5, 3 / 10, 3 / 5, 1.0, 7 / 8])
A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (3 / 10, -9 / 10, 6 / 5),
    (-11 / 54, 5 / 2, -70 / 27, 35 / 27),
    (1631 / 55296, 175 / 512, 575 / 13824, 44275 / 110592, 253 / 4096),
)
B5 = np.array([37 / 378, 0.0, 250 / 621, 125 / 594, 0.0, 512 / 1771])
# B5 minus the embedded 4th order weights
E = np.array(
    [
        -277 / 64512,
        0.0,
        6925 / 370944,
        -6925 / 202752,
        -277 / 14336,
        277 / 7084,
    ]
)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0


@dataclass
class StepResult:
    """Outcome of one attempted step.

    ``finite`` is False when a stage produced a non-finite derivative; the
    step must then be retried with a smaller h.
    """

    y: np.ndarray
    error_norm: float
    finite: bool

    @property
    def accepted(self) -> bool:
        return self.finite and self.error_norm <= 1.0


class CashKarpStepper:
    """Adaptive embedded Runge-Kutta stepper for y' = f(t, y).

    Parameters:
    ----------
        fun: Right-hand side, returning an array shaped like y
        rel_tol: Relative tolerance per component
        abs_tol: Absolute tolerance per component
    """

    def __init__(
        self,
        fun: Callable[[float, np.ndarray], np.ndarray],
        rel_tol: float,
        abs_tol: float,
    ):
        self.fun = fun
        self.rel_tol = rel_tol
        self.abs_tol = abs_tol
        self.n_evaluations = 0

    def attempt(self, t: float, y: np.ndarray, h: float) -> StepResult:
        k = []
        for stage in range(6):
            y_stage = y
            for coeff, k_j in zip(A[stage], k):
                y_stage = y_stage + h * coeff * k_j
            with np.errstate(all="ignore"):
                k_stage = np.asarray(self.fun(t + C[stage] * h, y_stage))
            self.n_evaluations += 1
            if not np.all(np.isfinite(k_stage)):
                return StepResult(y, np.inf, False)
            k.append(k_stage)

        slopes = np.stack(k)
        y_new = y + h * np.tensordot(B5, slopes, axes=1)
        err = h * np.tensordot(E, slopes, axes=1)
        if not np.all(np.isfinite(y_new)):
            return StepResult(y, np.inf, False)
        scale = self.abs_tol + self.rel_tol * np.maximum(
            np.abs(y), np.abs(y_new)
        )
        return StepResult(y_new, float(np.max(np.abs(err) / scale)), True)

    @staticmethod
    def next_step(h: float, error_norm: float) -> float:
        """Standard step-size update for a 5(4) pair."""
        if error_norm == 0.0:
            return h * MAX_FACTOR
        factor = SAFETY * error_norm ** (-0.2)
        return h * min(MAX_FACTOR, max(MIN_FACTOR, factor))

    def integrate(
        self,
        y0: np.ndarray,
        t_end: float,
        max_step: float,
        first_step: float = 1e-3,
        min_step: float = 1e-14,
    ) -> np.ndarray:
        """Integrate from t=0 to t_end without event handling.

        Raises:
        ------
            FloatingPointError: If the step size underflows
        """
        t, y = 0.0, np.asarray(y0)
        h = min(first_step, max_step, t_end)
        while t < t_end:
            h = min(h, max_step, t_end - t)
            result = self.attempt(t, y, h)
            if result.accepted:
                t = t_end if t_end - t <= h else t + h
                y = result.y
                h = self.next_step(h, result.error_norm)
            else:
                h = (
                    0.5 * h
                    if not result.finite
                    else self.next_step(h, result.error_norm)
                )
            if h < min_step * max(1.0, t):
                raise FloatingPointError(f"step size underflow at t={t!r}")
        return y
