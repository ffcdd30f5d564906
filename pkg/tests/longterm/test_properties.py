import math
import unittest

import numpy as np

from affinevol.longterm.equilibria import compute_interval_I, solve_w
from affinevol.models.factory import PRESETS, build_generator

TRIPLES = 1000
TOL = 1e-9
U_CLIP = 20.0


def sampling_range(interval):
    """Interior of I with 5% trimmed off finite ends, clipped to +-20."""
    lo = max(interval.lo, -U_CLIP)
    hi = min(interval.hi, U_CLIP)
    margin = 0.05 * (hi - lo)
    if math.isfinite(interval.lo):
        lo += margin
    if math.isfinite(interval.hi):
        hi -= margin
    return lo, hi


class TestEquilibriumProperties(unittest.TestCase):
    """Test w(u) on random draws from I."""

    def setUp(self):
        self.rng = np.random.default_rng(7)

    def test_w_convex(self):
        """Test random convexity triples for w on I."""
        for name, spec in PRESETS.items():
            g = build_generator(spec)
            lo, hi = sampling_range(compute_interval_I(g))
            for _ in range(TRIPLES):
                u1, u2 = (float(u) for u in self.rng.uniform(lo, hi, size=2))
                t = float(self.rng.uniform())
                rhs = t * solve_w(g, u1) + (1.0 - t) * solve_w(g, u2)
                mid = solve_w(g, t * u1 + (1.0 - t) * u2)
                with self.subTest(preset=name, u1=u1, u2=u2, t=t):
                    self.assertLessEqual(mid, rhs + TOL * max(1.0, abs(rhs)))

    def test_w_vanishes_on_unit_endpoints(self):
        """Test w(0) = w(1) = 0 and w < 0 strictly inside (0, 1)."""
        for name, spec in PRESETS.items():
            g = build_generator(spec)
            with self.subTest(preset=name):
                self.assertEqual(solve_w(g, 0.0), 0.0)
                self.assertEqual(solve_w(g, 1.0), 0.0)
                for u in self.rng.uniform(0.01, 0.99, size=20):
                    self.assertLess(solve_w(g, float(u)), 0.0)


if __name__ == "__main__":
    unittest.main()
