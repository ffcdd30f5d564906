"""Damped Fourier inversion of the affine cgf.

With u = u_damp + i v and alpha = u_damp - 1,

    price(xi) = e^{-alpha xi} / pi
        * int_0^inf Re[e^{-i v xi} Phi(u) / ((alpha + i v)(alpha + 1 + i v))] dv

is the call price for u_damp > 1 and the put price for u_damp < 0. The
strip must lie inside (u_-(T), u_+(T)) of the chosen regime.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Iterable, Optional

import numpy as np
from scipy import optimize

from affinevol.core.errors import ParameterError, StripError
from affinevol.core.generator import GeneratorPair
from affinevol.explosion.moments import (
    CriticalMoments,
    Regime,
    as_regime,
    critical_moments,
)
from affinevol.longterm.stationary import (
    require_stationary,
    stationary_cgf,
    stationary_cgf_complex,
)
from affinevol.pricing.black_scholes import intrinsic
from affinevol.riccati.solver import (
    DEFAULT_CONFIG,
    SolverConfig,
    StatusKind,
    solve_riccati,
    solve_riccati_complex,
)
from affinevol.utils.logger import setup_logger
from affinevol.utils.numerics import gauss_legendre_panels

logger = setup_logger(__name__)

SCAN_NODES = (0.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 500.0)
DAMPING_CAP = 40.0


@dataclass(frozen=True)
class FourierConfig:
    """Truncation and quadrature settings for the inversion integral."""

    v_cap: float = 500.0
    tail_tol: float = 1e-13
    panel_width: float = 2.0
    order: int = 16
    richardson_tol: float = 1e-8

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "FourierConfig":
        known = {k: v for k, v in config_dict.items() if k in asdict(cls())}
        return cls(**known)


DEFAULT_FOURIER = FourierConfig()


class FourierPricer:
    """Prices calls at maturity T from the primary or stationary cgf.

    Parameters:
    ----------
        g: Generator pair of a martingale model
        T: Maturity
        V0: Initial variance, required in the primary regime
        regime: ``primary`` (V_0 = V0) or ``stationary`` (V_0 ~ invariant law)
        cfg: Riccati solver tolerances
        fourier: Inversion settings
    """

    def __init__(
        self,
        g: GeneratorPair,
        T: float,
        V0: Optional[float] = None,
        regime=Regime.PRIMARY,
        cfg: SolverConfig = DEFAULT_CONFIG,
        fourier: FourierConfig = DEFAULT_FOURIER,
    ):
        if not T > 0.0:
            raise ParameterError(f"maturity must be positive, got {T!r}")
        self.g = g
        self.T = float(T)
        self.regime = as_regime(regime)
        if self.regime is Regime.PRIMARY:
            if V0 is None or not V0 > 0.0:
                raise ParameterError("V0 must be positive")
        else:
            require_stationary(g)
        self.V0 = V0
        self.cfg = cfg
        self.fourier = fourier
        self._moments: Optional[CriticalMoments] = None

    @property
    def moments(self) -> CriticalMoments:
        if self._moments is None:
            self._moments = critical_moments(self.g, self.T, self.regime)
            logger.info(
                "T=%r %s strip: (%r, %r)",
                self.T,
                self.regime.value,
                self._moments.u_minus,
                self._moments.u_plus,
            )
        return self._moments

    def log_mgf(self, u: float) -> float:
        """log E[S_T^u] for real u, +inf past the critical moments."""
        solution = solve_riccati(self.g, u, 0.0, self.T, self.cfg)
        if solution.status.kind is not StatusKind.COMPLETED:
            return math.inf
        _, psi, phi = solution.final
        if self.regime is Regime.PRIMARY:
            return phi + self.V0 * psi
        return phi + stationary_cgf(self.g, psi)

    def log_mgf_complex(self, u: np.ndarray) -> np.ndarray:
        phi, psi = solve_riccati_complex(self.g, u, self.T, self.cfg)
        if self.regime is Regime.PRIMARY:
            return phi + self.V0 * psi
        return phi + stationary_cgf_complex(self.g, psi)

    def check_strip(self, u_damp: float) -> None:
        """Raise StripError unless u_damp is a valid damping abscissa."""
        m = self.moments
        if 0.0 <= u_damp <= 1.0 or not m.u_minus < u_damp < m.u_plus:
            raise StripError(
                f"u_damp={u_damp!r} must lie in ({m.u_minus!r}, 0) or "
                f"(1, {m.u_plus!r})"
            )

    def optimal_damping(self, xi: float) -> float:
        """Damping minimising the integrand at v = 0.

        The out-of-the-money side is used: calls for xi >= 0, puts below.
        """
        m = self.moments
        if xi >= 0.0:
            lo, hi = 1.0, min(m.u_plus, 1.0 + DAMPING_CAP)
        else:
            lo, hi = max(m.u_minus, -DAMPING_CAP), 0.0
        if not hi > lo:
            raise StripError(f"empty damping strip ({lo!r}, {hi!r})")
        margin = 1e-3 * (hi - lo)

        def objective(u: float) -> float:
            return self.log_mgf(u) - (u - 1.0) * xi - math.log((u - 1.0) * u)

        result = optimize.minimize_scalar(
            objective,
            bounds=(lo + margin, hi - margin),
            method="bounded",
            options={"xatol": 1e-3},
        )
        return float(result.x)

    def _truncation(self, u_damp: float) -> float:
        alpha = u_damp - 1.0
        v = np.array(SCAN_NODES)
        v = v[v <= self.fourier.v_cap]
        log_phi = self.log_mgf_complex(u_damp + 1j * v)
        envelope = np.exp(log_phi.real) / np.abs(
            (alpha + 1j * v) * (alpha + 1.0 + 1j * v)
        )
        target = self.fourier.tail_tol * envelope[0]
        for vk, ek in zip(v[1:], envelope[1:]):
            if ek * vk <= target:
                return float(vk)
        logger.info(
            "u_damp=%r: integrand not decayed at v=%r",
            u_damp,
            self.fourier.v_cap,
        )
        return float(self.fourier.v_cap)

    def transform(self, xis: np.ndarray, u_damp: float) -> np.ndarray:
        """Raw damped transform: calls for u_damp > 1, puts for u_damp < 0."""
        xis = np.atleast_1d(np.asarray(xis, dtype=float))
        alpha = u_damp - 1.0
        v_max = self._truncation(u_damp)
        width = min(
            self.fourier.panel_width,
            2.0 * math.pi / max(1.0, float(np.max(np.abs(xis)))),
        )
        n = 2 * max(2, math.ceil(v_max / width / 2.0))
        fine, fine_w = gauss_legendre_panels(
            0.0, v_max, n, self.fourier.order
        )
        coarse, coarse_w = gauss_legendre_panels(
            0.0, v_max, n // 2, self.fourier.order
        )
        v = np.concatenate([fine, coarse])
        kernel = np.exp(self.log_mgf_complex(u_damp + 1j * v)) / (
            (alpha + 1j * v) * (alpha + 1.0 + 1j * v)
        )
        phase = np.exp(-1j * np.outer(xis, v)) * kernel
        scale = np.exp(-alpha * xis) / math.pi
        fine_value = scale * (phase[:, : fine.size].real @ fine_w)
        coarse_value = scale * (phase[:, fine.size :].real @ coarse_w)
        gap = float(np.max(np.abs(fine_value - coarse_value)))
        if gap > self.fourier.richardson_tol:
            logger.warning(
                "u_damp=%r: panel refinement changed prices by %.3g",
                u_damp,
                gap,
            )
        return fine_value

    def call_prices(
        self, xis: Iterable[float], u_damp: Optional[float] = None
    ) -> np.ndarray:
        """Call prices on a log-moneyness grid.

        With ``u_damp`` given, one Riccati solve serves the whole grid.
        Otherwise each xi is priced out of the money with its own damping.
        """
        xis = np.atleast_1d(np.asarray(list(xis), dtype=float))
        if u_damp is not None:
            self.check_strip(u_damp)
            raw = self.transform(xis, u_damp)
            prices = raw if u_damp > 1.0 else raw + 1.0 - np.exp(xis)
        else:
            prices = np.empty_like(xis)
            for k, xi in enumerate(xis):
                damp = self.optimal_damping(xi)
                raw = self.transform(np.array([xi]), damp)[0]
                prices[k] = raw if damp > 1.0 else raw + 1.0 - math.exp(xi)
        lower = np.array([intrinsic(xi) for xi in xis])
        return np.clip(prices, lower, 1.0)


def price_calls(
    g: GeneratorPair,
    T: float,
    xis: Iterable[float],
    V0: float,
    u_damp: Optional[float] = None,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """Call prices at V_0 = V0 on a log-moneyness grid."""
    return FourierPricer(g, T, V0, Regime.PRIMARY, cfg).call_prices(
        xis, u_damp
    )


def call_price(
    g: GeneratorPair,
    T: float,
    xi: float,
    V0: float,
    u_damp: Optional[float] = None,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> float:
    """Price of (e^{X_T} - e^xi)_+ with S_0 = 1 and V_0 = V0.

    Raises:
    ------
        StripError: If u_damp lies outside the finite-moment strip
    """
    return float(price_calls(g, T, [xi], V0, u_damp, cfg)[0])


def stationary_call_price(
    g: GeneratorPair,
    T: float,
    xi: float,
    u_damp: Optional[float] = None,
    cfg: SolverConfig = DEFAULT_CONFIG,
) -> float:
    """Call price when V_0 is drawn from the stationary law.

    Raises:
    ------
        AssumptionError: If the stationary law does not exist
        StripError: If u_damp lies outside the stationary strip
    """
    pricer = FourierPricer(g, T, regime=Regime.STATIONARY, cfg=cfg)
    return float(pricer.call_prices([xi], u_damp)[0])
