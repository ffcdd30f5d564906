import math
import unittest

import numpy as np

from affinevol.core.generator import GeneratorPair, ParametricGenerator
from affinevol.longterm.verdicts import (
    Verdict,
    classify_osgood,
    conservativeness_check,
    martingale_check,
    classify_increments,
    osgood_increments,
    osgood_partial_integrals,
)
from affinevol.models.heston import HestonGenerator, HestonParams

FIG1 = HestonParams(lam=1.3253, theta=0.0354, zeta=0.3877, rho=-0.7165)


class SingularGenerator(GeneratorPair):
    """F = 0 and R(u, w) = rate(w) for w <= 0, infinite above."""

    def __init__(self, rate):
        self.rate = rate

    def F(self, u, w):
        return 0.0

    def R(self, u, w):
        if w > 0.0:
            return math.inf
        if w == 0.0:
            return 0.0
        return self.rate(w)

    def F_complex(self, u, w):
        return np.zeros_like(np.asarray(w, dtype=complex))

    def R_complex(self, u, w):
        raise NotImplementedError

    def chi(self, u):
        return math.inf


class TestVerdicts(unittest.TestCase):
    """Test the conservativeness and martingale verdicts."""

    def test_heston(self):
        """Test that the Heston model is a conservative martingale."""
        g = HestonGenerator(FIG1)
        self.assertIs(conservativeness_check(g).verdict, Verdict.YES)
        report = martingale_check(g)
        self.assertTrue(report.holds)
        self.assertIn("chi(1)", report.reason)

    def test_killing(self):
        """Test that c > 0 makes the process non-conservative."""
        params = FIG1.to_parameters().replace(c=0.1)
        g = ParametricGenerator(params)
        self.assertIs(conservativeness_check(g).verdict, Verdict.NO)
        report = martingale_check(g)
        self.assertIs(report.verdict, Verdict.NO)
        self.assertIn("not conservative", report.reason)

    def test_drift_breaks_martingale(self):
        """Test that a wrong price drift gives R(1, 0) != 0."""
        params = FIG1.to_parameters().replace(beta=[-0.4, -FIG1.lam])
        report = martingale_check(ParametricGenerator(params))
        self.assertIs(report.verdict, Verdict.NO)

    def test_osgood_divergent(self):
        """Test R = w log(-w), whose Osgood integral diverges."""
        g = SingularGenerator(lambda w: w * math.log(-w))
        report = conservativeness_check(g)
        self.assertIs(report.verdict, Verdict.YES)
        self.assertEqual(len(report.partial_integrals), 12)

    def test_osgood_convergent(self):
        """Test R = sqrt(-w), whose Osgood integral converges."""
        g = SingularGenerator(lambda w: math.sqrt(-w))
        self.assertIs(conservativeness_check(g).verdict, Verdict.NO)
        self.assertIs(martingale_check(g).verdict, Verdict.NO)

    def test_partial_integrals_grow(self):
        """Test that partial integrals are monotone for a positive R."""
        g = SingularGenerator(lambda w: math.sqrt(-w))
        partials = osgood_partial_integrals(g, 0.0, depth=5)
        self.assertEqual(len(partials), 5)
        self.assertTrue(all(b > a for a, b in zip(partials, partials[1:])))

    def test_deep_decades_are_accurate(self):
        """Test decade integrals of 1 / sqrt(-eta) down to 1e-13."""
        g = SingularGenerator(lambda w: math.sqrt(-w))
        increments = osgood_increments(g, 0.0)
        for k, value in enumerate(increments, start=1):
            a = 0.1 * 10.0 ** -(k - 1)
            exact = 2.0 * (math.sqrt(a) - math.sqrt(a / 10.0))
            with self.subTest(k=k):
                self.assertAlmostEqual(value / exact, 1.0, delta=1e-9)
        self.assertIs(classify_increments(increments), Verdict.NO)
        partials = conservativeness_check(g).partial_integrals
        self.assertAlmostEqual(
            partials[-1], 2.0 * math.sqrt(0.1) * (1.0 - 10.0**-6), delta=1e-10
        )


class TestClassifyOsgood(unittest.TestCase):
    """Test the step-ratio classification."""

    def test_harmonic_steps(self):
        """Test steps decaying like 1 / k as divergent."""
        partials = list(np.cumsum([1.0 / k for k in range(10, 22)]))
        self.assertIs(classify_osgood(partials), Verdict.YES)

    def test_geometric_steps(self):
        """Test steps decaying like 10^-k as convergent."""
        partials = list(np.cumsum([10.0**-k for k in range(12)]))
        self.assertIs(classify_osgood(partials), Verdict.NO)

    def test_undecided(self):
        """Test ratios between the thresholds."""
        partials = list(np.cumsum([0.65**k for k in range(12)]))
        self.assertIs(classify_osgood(partials), Verdict.INCONCLUSIVE)
        self.assertIs(classify_osgood([1.0]), Verdict.INCONCLUSIVE)


if __name__ == "__main__":
    unittest.main()
