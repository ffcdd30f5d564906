import math
import unittest

import numpy as np

from affinevol.core.generator import chi
from affinevol.models.factory import PRESETS, build_generator

TRIPLES = 1000
SAMPLES = 1000
TOL = 1e-9


def assert_convex_triple(case, fn, z1, z2, t):
    """Assert fn(t z1 + (1 - t) z2) <= t fn(z1) + (1 - t) fn(z2)."""
    mid = tuple(t * a + (1.0 - t) * b for a, b in zip(z1, z2))
    rhs = t * fn(*z1) + (1.0 - t) * fn(*z2)
    case.assertLessEqual(fn(*mid), rhs + TOL * max(1.0, abs(rhs)))


class TestGeneratorProperties(unittest.TestCase):
    """Test convexity and domain properties of F, R and chi on random draws."""

    def setUp(self):
        self.rng = np.random.default_rng(20240611)
        self.generators = {
            name: build_generator(spec) for name, spec in PRESETS.items()
        }

    def draw_point(self):
        """A random (u, w) inside the common finite region of the presets."""
        return (
            float(self.rng.uniform(-8.0, 8.0)),
            float(self.rng.uniform(-3.0, 3.0)),
        )

    def test_convexity_of_F_and_R(self):
        """Test random convexity triples for F and R."""
        for name, g in self.generators.items():
            for label, fn in (("F", g.F), ("R", g.R)):
                for _ in range(TRIPLES):
                    z1, z2 = self.draw_point(), self.draw_point()
                    t = float(self.rng.uniform())
                    with self.subTest(preset=name, fn=label, z1=z1, z2=z2):
                        assert_convex_triple(self, fn, z1, z2, t)

    def test_convexity_of_chi(self):
        """Test random convexity triples for chi."""
        for name, g in self.generators.items():
            fn = lambda u: chi(g, u)  # noqa: E731
            for _ in range(TRIPLES):
                u1, u2 = self.rng.uniform(-8.0, 8.0, size=2)
                t = float(self.rng.uniform())
                with self.subTest(preset=name, u1=u1, u2=u2):
                    assert_convex_triple(
                        self, fn, (float(u1),), (float(u2),), t
                    )

    def test_domain_monotone_in_w(self):
        """Test that finiteness at (u, w) carries over to every eta <= w."""
        for name, g in self.generators.items():
            finite_hits = 0
            for _ in range(SAMPLES):
                u = float(self.rng.uniform(-15.0, 15.0))
                w = float(self.rng.uniform(-30.0, 30.0))
                eta = w - float(self.rng.uniform(0.0, 20.0))
                for label, fn in (("F", g.F), ("R", g.R)):
                    if math.isfinite(fn(u, w)):
                        finite_hits += 1
                        with self.subTest(preset=name, fn=label, u=u, w=w):
                            self.assertTrue(math.isfinite(fn(u, eta)))
            self.assertGreater(finite_hits, 0)

    def test_line_dichotomy(self):
        """Test that R is affine or strictly convex along each line."""
        steps = np.arange(-5, 6) * 0.1
        for name, g in self.generators.items():
            for _ in range(200):
                u0 = float(self.rng.uniform(-3.0, 4.0))
                w0 = float(self.rng.uniform(-1.5, 1.5))
                angle = float(self.rng.uniform(0.0, math.pi))
                if self.rng.uniform() < 0.25:
                    angle = 0.5 * math.pi
                du, dw = math.cos(angle), math.sin(angle)
                values = np.array(
                    [g.R(u0 + s * du, w0 + s * dw) for s in steps]
                )
                second = values[:-2] - 2.0 * values[1:-1] + values[2:]
                with self.subTest(preset=name, u0=u0, w0=w0, angle=angle):
                    self.assertTrue(
                        np.max(np.abs(second)) <= TOL or np.min(second) > 0.0,
                        second,
                    )


if __name__ == "__main__":
    unittest.main()
