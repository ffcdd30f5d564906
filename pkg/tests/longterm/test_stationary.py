import math
import unittest

import numpy as np

from affinevol.core.errors import AssumptionError
from affinevol.core.generator import ParametricGenerator
from affinevol.core.jumps import AnalyticCgf
from affinevol.core.parameters import AdmissibleParameterSet
from affinevol.longterm.stationary import (
    l_plus,
    numeric_stationary_cgf,
    stationary_cgf,
    stationary_cgf_complex,
    stationary_law,
)
from affinevol.models.bns import BNSGenerator, BNSParams, GammaOU
from affinevol.models.heston import (
    HestonGenerator,
    HestonParams,
    heston_stationary_closed,
)
from affinevol.riccati.solver import solve_riccati

FIG1 = HestonParams(lam=1.3253, theta=0.0354, zeta=0.3877, rho=-0.7165)


class TestHestonStationary(unittest.TestCase):
    """Test the stationary cgf against the Gamma law of the Heston model."""

    def setUp(self):
        self.closed = heston_stationary_closed(FIG1)
        self.g = ParametricGenerator(FIG1.to_parameters(), "fig1")

    def test_numeric_matches_gamma(self):
        """Test l(w) by quadrature on both sides of zero."""
        for w in (-20.0, -5.0, -0.5, 0.01, 5.0, 15.0):
            expected = self.closed.l(w)
            self.assertAlmostEqual(
                numeric_stationary_cgf(self.g, w),
                expected,
                delta=1e-9 * max(1.0, abs(expected)),
            )
        self.assertEqual(numeric_stationary_cgf(self.g, 0.0), 0.0)

    def test_l_plus(self):
        """Test l_+ = 2 lam / zeta^2 with and without the closed form."""
        self.assertAlmostEqual(l_plus(HestonGenerator(FIG1)), 17.635, 2)
        self.assertAlmostEqual(
            l_plus(self.g), self.closed.l_plus, delta=1e-8
        )

    def test_beyond_l_plus(self):
        """Test that l is infinite past l_+."""
        self.assertEqual(numeric_stationary_cgf(self.g, 18.0), math.inf)
        self.assertEqual(
            stationary_cgf(HestonGenerator(FIG1), 18.0), math.inf
        )

    def test_invariance(self):
        """Test l(psi(t, 0, w)) + phi(t, 0, w) = l(w)."""
        for w in (-2.0, 3.0):
            for t in (1.0, 10.0):
                _, psi, phi = solve_riccati(self.g, 0.0, w, t).final
                self.assertAlmostEqual(
                    stationary_cgf(self.g, psi) + phi,
                    stationary_cgf(self.g, w),
                    delta=1e-8,
                )

    def test_complex(self):
        """Test the segment quadrature on complex arguments."""
        w = np.array([-1.0 + 2.0j, 3.0 - 1.0j, 0.5j, 1e-14 + 0j])
        np.testing.assert_allclose(
            stationary_cgf_complex(self.g, w),
            self.closed.l_complex(w),
            atol=1e-10,
        )

    def test_mean(self):
        """Test that the stationary mean is theta."""
        law = stationary_law(self.g)
        self.assertAlmostEqual(law.mean(), FIG1.theta, places=10)
        self.assertAlmostEqual(law.l_plus, self.closed.l_plus, delta=1e-8)
        self.assertAlmostEqual(law.cgf(-1.0), self.closed.l(-1.0), 9)


class TestBNSStationary(unittest.TestCase):
    """Test the stationary cgf of the Gamma-OU model."""

    def test_numeric_matches_closed(self):
        """Test quadrature against -a log(1 - w / b)."""
        sub = GammaOU(0.5, 12.5)
        g = BNSGenerator(BNSParams(1.0, -0.5, sub))
        for w in (-10.0, 5.0, 12.0):
            self.assertAlmostEqual(
                numeric_stationary_cgf(g, w), sub.l(w), delta=1e-9
            )
        self.assertEqual(l_plus(g), 12.5)


class TestStationaryAssumptions(unittest.TestCase):
    """Test when the stationary law is refused."""

    def test_positive_chi0(self):
        """Test that beta2 > 0 raises an AssumptionError."""
        params = AdmissibleParameterSet(
            alpha=[[1.0, 0.0], [0.0, 0.1]], b=[0.0, 0.1], beta=[-0.5, 0.2]
        )
        with self.assertRaises(AssumptionError):
            l_plus(ParametricGenerator(params))

    def test_log_moment_condition(self):
        """Test that a jump measure without log moments is refused."""
        params = FIG1.to_parameters().replace(
            m=AnalyticCgf(lambda theta: 0.0, log_moment_condition=False)
        )
        with self.assertRaises(AssumptionError):
            stationary_law(ParametricGenerator(params))


if __name__ == "__main__":
    unittest.main()
