"""Generalized Riccati equations: solving, cgf evaluation, implicit time.

For fixed u the pair (psi, phi) solves

    d/dt psi = R(u, psi),  psi(0) = w0
    d/dt phi = F(u, psi),  phi(0) = 0

and the joint cgf of (X_t, V_t) is phi + V0 * psi + X0 * u.
"""

import math
import warnings
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate

from affinevol.core.errors import (
    DomainError,
    NonConvergentIntegralError,
    ParameterError,
    SignChangeError,
)
from affinevol.core.generator import (
    GeneratorPair,
    domain_boundary_F,
    domain_boundary_R,
    eval_F,
    eval_R,
)
from affinevol.riccati.stepper import CashKarpStepper
from affinevol.utils.logger import setup_logger
from affinevol.utils.table import Table

logger = setup_logger(__name__)

QUAD_LIMIT = 200
SIGN_SAMPLES = 64


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and thresholds of the Riccati solver.

    Attributes:
    ----------
    rel_tol : float
        Relative local error tolerance
    abs_tol : float
        Absolute local error tolerance
    max_step : float
        Largest step, further capped at 1 / max(1, |chi(u)|)
    blowup_threshold : float
        |psi| above this counts as blow-up
    domain_margin : float
        psi within this distance of min(f_+, r_+) counts as blow-up
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    max_step: float = 1.0
    blowup_threshold: float = 1e10
    domain_margin: float = 1e-12

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value > 0:
                raise ParameterError(f"{name} must be positive, got {value!r}")

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "SolverConfig":
        """Create a SolverConfig from a dictionary, ignoring unknown keys."""
        defaults = cls()
        return cls(
            rel_tol=float(config_dict.get("rel_tol", defaults.rel_tol)),
            abs_tol=float(config_dict.get("abs_tol", defaults.abs_tol)),
            max_step=float(config_dict.get("max_step", defaults.max_step)),
            blowup_threshold=float(
                config_dict.get("blowup_threshold", defaults.blowup_threshold)
            ),
            domain_margin=float(
                config_dict.get("domain_margin", defaults.domain_margin)
            ),
        )

    def with_tolerance(self, tol: float) -> "SolverConfig":
        return SolverConfig(
            rel_tol=tol,
            abs_tol=tol,
            max_step=self.max_step,
            blowup_threshold=self.blowup_threshold,
            domain_margin=self.domain_margin,
        )


DEFAULT_CONFIG = SolverConfig()


class StatusKind(Enum):
    """Terminal states of a Riccati integration."""

    COMPLETED = "completed"
    BLEW_UP = "blew_up_at"
    LEFT_DOMAIN = "left_domain_at"


@dataclass(frozen=True)
class SolverStatus:
    """How an integration ended, with the time of failure if any."""

    kind: StatusKind
    time: Optional[float] = None

    def __str__(self) -> str:
        if self.kind is StatusKind.COMPLETED:
            return self.kind.value
        return f"{self.kind.value}={self.time!r}"


COMPLETED = SolverStatus(StatusKind.COMPLETED)


@dataclass
class RiccatiSolution:
    """Time grid of (t, psi, phi) for one (u, w0) plus solver diagnostics."""

    u: float
    w0: float
    grid: List[Tuple[float, float, float]]
    status: SolverStatus
    config: SolverConfig
    n_evaluations: int = 0
    rejected_steps: int = 0
    notes: List[str] = field(default_factory=list)

    @property
    def times(self) -> np.ndarray:
        return np.array([row[0] for row in self.grid])

    @property
    def psi(self) -> np.ndarray:
        return np.array([row[1] for row in self.grid])

    @property
    def phi(self) -> np.ndarray:
        return np.array([row[2] for row in self.grid])

    @property
    def final(self) -> Tuple[float, float, float]:
        return self.grid[-1]

    @property
    def blew_up(self) -> bool:
        return self.status.kind is StatusKind.BLEW_UP

    def to_table(self) -> Table:
        table = Table(["t", "psi", "phi"], footer=[f"status={self.status}"])
        table.extend(self.grid)
        return table

    def to_csv(self) -> str:
        return self.to_table().to_csv()


def _step_cap(g: GeneratorPair, u: float, cfg: SolverConfig) -> float:
    try:
        rate = g.chi(u)
    except (ArithmeticError, DomainError):
        return cfg.max_step
    if not math.isfinite(rate):
        return cfg.max_step
    return min(cfg.max_step, 1.0 / max(1.0, abs(rate)))


def solve_riccati(
    g: GeneratorPair,
    u: float,
    w0: float,
    t_end: float,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> RiccatiSolution:
    """Integrate psi and phi jointly on [0, t_end].

    Parameters:
    ----------
        g: Generator pair
        u: Real moment order
        w0: Initial value psi(0)
        t_end: Horizon
        cfg: Solver tolerances

    Returns:
    -------
        Solution grid with status Completed, BlewUpAt or LeftDomainAt

    Raises:
    ------
        DomainError: If R(u, w0) is infinite (immediate explosion)
    """
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    if not math.isfinite(eval_R(g, u, w0)):
        raise DomainError(f"R({u!r}, {w0!r}) = inf: explosion at t = 0")

    grid = [(0.0, float(w0), 0.0)]
    if not math.isfinite(eval_F(g, u, w0)):
        return RiccatiSolution(
            u, w0, grid, SolverStatus(StatusKind.BLEW_UP, 0.0), cfg
        )

    upper = min(domain_boundary_F(g, u), domain_boundary_R(g, u))
    h_max = _step_cap(g, u, cfg)

    def rhs(t, y):
        psi = float(y[0])
        return np.array([g.R(u, psi), g.F(u, psi)])

    stepper = CashKarpStepper(rhs, cfg.rel_tol, cfg.abs_tol)
    t, y = 0.0, np.array([float(w0), 0.0])
    h = min(h_max, t_end, 1e-2) if t_end > 0 else 0.0
    status = COMPLETED
    rejected = 0

    def escape_time(psi: float) -> Optional[float]:
        if math.isfinite(upper) and psi >= upper:
            return t
        if not g.R(u, psi) > 0:
            return None
        return t + implicit_time_of_level(g, u, psi, upper)

    while t < t_end:
        h = min(h, h_max, t_end - t)
        result = stepper.attempt(t, y, h)
        if result.accepted:
            t = t_end if t_end - t <= h else t + h
            y = result.y
            grid.append((t, float(y[0]), float(y[1])))
            h = stepper.next_step(h, result.error_norm)
            psi = float(y[0])
            if abs(psi) > cfg.blowup_threshold or (
                math.isfinite(upper) and psi >= upper - cfg.domain_margin
            ):
                t_blow = escape_time(psi)
                if t_blow is not None and t_blow <= t_end:
                    status = SolverStatus(StatusKind.BLEW_UP, t_blow)
                    break
            continue

        rejected += 1
        h = 0.5 * h if not result.finite else stepper.next_step(
            h, result.error_norm
        )
        if h < 1e-14 * max(1.0, t):
            psi = float(y[0])
            t_blow = escape_time(psi)
            if t_blow is not None and t_blow <= t_end:
                status = SolverStatus(StatusKind.BLEW_UP, t_blow)
            else:
                status = SolverStatus(StatusKind.LEFT_DOMAIN, t)
            break

    logger.debug(
        "solve_riccati u=%r w0=%r: %s after %d evaluations (%d rejected)",
        u,
        w0,
        status,
        stepper.n_evaluations,
        rejected,
    )
    return RiccatiSolution(
        u, float(w0), grid, status, cfg, stepper.n_evaluations, rejected
    )


def cgf(
    g: GeneratorPair,
    t: float,
    u: float,
    w: float,
    X0: float,
    V0: float,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> float:
    """log E[exp(u X_t + w V_t)] = phi + V0 psi + X0 u, or +inf.

    Raises:
    ------
        ParameterError: If V0 <= 0
        DomainError: If the solution left the domain before t
    """
    if not V0 > 0:
        raise ParameterError("V0 must be positive")
    solution = solve_riccati(g, u, w, t, cfg)
    if solution.status.kind is StatusKind.BLEW_UP:
        return math.inf
    if solution.status.kind is StatusKind.LEFT_DOMAIN:
        raise DomainError(
            f"solution left the domain at t={solution.status.time!r}"
        )
    _, psi, phi = solution.final
    return phi + V0 * psi + X0 * u


def solve_riccati_complex(
    g: GeneratorPair,
    u: np.ndarray,
    t_end: float,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> Tuple[np.ndarray, np.ndarray]:
    """(phi, psi)(t_end, u, 0) for an array of complex u in one solve.

    The u values must lie in the finite-moment strip; no blow-up handling
    is attempted.

    Raises:
    ------
        NonConvergentIntegralError: If the step size underflows
    """
    u = np.asarray(u, dtype=complex).ravel()
    n = u.size

    def rhs(t, y):
        psi = y[:n]
        return np.concatenate([g.R_complex(u, psi), g.F_complex(u, psi)])

    stepper = CashKarpStepper(rhs, cfg.rel_tol, cfg.abs_tol)
    try:
        y = stepper.integrate(
            np.zeros(2 * n, dtype=complex), t_end, cfg.max_step
        )
    except FloatingPointError as exc:
        raise NonConvergentIntegralError(
            f"complex Riccati solve failed: {exc}"
        ) from exc
    logger.debug(
        "complex Riccati solve over %d nodes: %d evaluations",
        n,
        stepper.n_evaluations,
    )
    return y[n:], y[:n]


def check_flow_property(
    g: GeneratorPair,
    u: float,
    w: float,
    t: float,
    s: float,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> Tuple[float, float]:
    """Residuals of phi(t+s) = phi(t) + phi(s, u, psi(t)) and the psi law.

    Raises:
    ------
        DomainError: If any of the three solves is not finite
    """
    first = solve_riccati(g, u, w, t, cfg)
    whole = solve_riccati(g, u, w, t + s, cfg)
    if first.status != COMPLETED or whole.status != COMPLETED:
        raise DomainError("flow property requires finite solutions")
    _, psi_t, phi_t = first.final
    second = solve_riccati(g, u, psi_t, s, cfg)
    if second.status != COMPLETED:
        raise DomainError("flow property requires finite solutions")
    _, psi_s, phi_s = second.final
    _, psi_ts, phi_ts = whole.final
    return abs(phi_ts - phi_t - phi_s), abs(psi_ts - psi_s)


def _sample_points(lo: float, hi: float) -> np.ndarray:
    if math.isfinite(hi):
        return np.linspace(lo, hi, SIGN_SAMPLES + 2)[1:-1]
    angles = np.linspace(0.0, 0.5 * math.pi, SIGN_SAMPLES + 2)[1:-1]
    return lo + np.tan(angles)


def implicit_time_of_level(
    g: GeneratorPair,
    u: float,
    w_from: float,
    w_to: float,
    points: Sequence[float] = (),
    rel_tol: float = 1e-12,
) -> float:
    """Time psi needs to move from w_from to w_to: int dR^{-1}.

    An infinite ``w_to`` is handled by the substitution eta = w_from +
    tan(s). ``points`` marks interior locations where the integrand is
    nearly singular.

    Raises:
    ------
        SignChangeError: If R(u, .) vanishes strictly inside the interval
        NonConvergentIntegralError: If the quadrature returns NaN
    """
    if w_from == w_to:
        return 0.0
    if math.isinf(w_from):
        raise ValueError("w_from must be finite")
    lo, hi = min(w_from, w_to), max(w_from, w_to)
    orientation = 1.0 if w_to > w_from else -1.0

    samples = [g.R(u, float(x)) for x in _sample_points(lo, hi)]
    finite = [v for v in samples if math.isfinite(v)]
    if any(v == 0.0 for v in finite) or (
        any(v > 0 for v in finite) and any(v < 0 for v in finite)
    ):
        raise SignChangeError(
            f"R({u!r}, .) changes sign inside [{lo!r}, {hi!r}]"
        )

    def reciprocal(eta: float) -> float:
        value = g.R(u, eta)
        if value == 0.0:
            return math.inf
        return 1.0 / value

    breaks = sorted(p for p in points if lo < p < hi)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if math.isfinite(hi):
            value, error = integrate.quad(
                reciprocal,
                lo,
                hi,
                epsabs=0.0,
                epsrel=rel_tol,
                limit=QUAD_LIMIT,
                points=breaks or None,
            )
        else:

            def mapped(s: float) -> float:
                c = math.cos(s)
                if c <= 0.0:
                    return 0.0
                return reciprocal(lo + math.tan(s)) / (c * c)

            value, error = integrate.quad(
                mapped,
                0.0,
                0.5 * math.pi,
                epsabs=0.0,
                epsrel=rel_tol,
                limit=QUAD_LIMIT,
                points=[math.atan(p - lo) for p in breaks] or None,
            )
    if math.isnan(value):
        raise NonConvergentIntegralError(
            f"implicit time integral for u={u!r} returned NaN"
        )
    if error > 1e-6 * max(1.0, abs(value)):
        logger.warning(
            "implicit time u=%r [%r, %r]: quadrature error estimate %.3g",
            u,
            lo,
            hi,
            error,
        )
    return orientation * value
