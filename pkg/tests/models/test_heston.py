import math
import unittest

from affinevol.core.errors import DomainError, ParameterError
from affinevol.core.jumps import PriceExponential
from affinevol.models.heston import (
    HestonJumpParams,
    HestonParams,
    HestonStationary,
    heston_closed_riccati,
    heston_closed_w,
    heston_excluded_case,
    heston_interval_I,
    heston_stationary_closed,
    price_jump_cgf,
)

FIG1 = HestonParams(lam=1.3253, theta=0.0354, zeta=0.3877, rho=-0.7165)


class TestHestonParams(unittest.TestCase):
    """Test parameter validation and the dictionary form."""

    def test_invalid(self):
        """Test that each family invariant is enforced."""
        for kwargs in (
            {"lam": 0.0, "theta": 0.04, "zeta": 0.3, "rho": -0.5},
            {"lam": 1.0, "theta": -0.04, "zeta": 0.3, "rho": -0.5},
            {"lam": 1.0, "theta": 0.04, "zeta": 0.0, "rho": -0.5},
            {"lam": 1.0, "theta": 0.04, "zeta": 0.3, "rho": -1.5},
        ):
            with self.subTest(**kwargs):
                with self.assertRaises(ParameterError):
                    HestonParams(**kwargs)

    def test_dict_keys(self):
        """Test that the dictionary form uses ``lambda``."""
        data = FIG1.to_dict()
        self.assertEqual(data["lambda"], FIG1.lam)
        self.assertEqual(HestonParams.from_dict(data), FIG1)

    def test_long_term_condition(self):
        """Test chi(1) < 0 as lam > rho zeta."""
        self.assertTrue(FIG1.long_term_ok)
        self.assertFalse(HestonParams(0.1, 0.04, 0.5, 0.9).long_term_ok)
        self.assertAlmostEqual(FIG1.chi(1.0), FIG1.rho * FIG1.zeta - FIG1.lam)


class TestHestonClosedForms(unittest.TestCase):
    """Test the closed-form Heston helpers."""

    def test_w(self):
        """Test w(u) at the reference point and at u in {0, 1}."""
        self.assertAlmostEqual(heston_closed_w(FIG1, 2.0), 0.5435, delta=1e-3)
        self.assertEqual(heston_closed_w(FIG1, 0.0), 0.0)
        self.assertEqual(heston_closed_w(FIG1, 1.0), 0.0)
        with self.assertRaises(DomainError):
            heston_closed_w(FIG1, 20.0)

    def test_interval_endpoints_are_discriminant_roots(self):
        """Test Delta = 0 at both ends of I."""
        lo, hi = heston_interval_I(FIG1)
        self.assertAlmostEqual(FIG1.delta(lo), 0.0, delta=1e-10)
        self.assertAlmostEqual(FIG1.delta(hi), 0.0, delta=1e-10)
        self.assertGreater(FIG1.delta(0.5 * (lo + hi)), 0.0)

    def test_excluded_case(self):
        """Test that the excluded branch needs chi(1) >= 0."""
        self.assertFalse(heston_excluded_case(FIG1, 5.0))
        self.assertFalse(heston_excluded_case(FIG1, -1.0))
        params = HestonParams(0.1, 0.04, 0.5, 0.9)
        self.assertTrue(heston_excluded_case(params, 2.0))

    def test_riccati_is_martingale(self):
        """Test phi(t, 1) = psi(t, 1) = 0."""
        phi, psi = heston_closed_riccati(FIG1, 2.0, 1.0)
        self.assertAlmostEqual(phi, 0.0, places=12)
        self.assertAlmostEqual(psi, 0.0, places=12)

    def test_riccati_long_time(self):
        """Test psi(t, u) -> w(u) for large t."""
        _, psi = heston_closed_riccati(FIG1, 50.0, 2.0)
        self.assertAlmostEqual(psi, heston_closed_w(FIG1, 2.0), places=9)


class TestHestonStationary(unittest.TestCase):
    """Test the Gamma stationary law."""

    def test_law(self):
        """Test l_+, the stationary mean and l(0)."""
        law = heston_stationary_closed(FIG1)
        self.assertAlmostEqual(law.l_plus, 2.0 * FIG1.lam / FIG1.zeta**2)
        self.assertAlmostEqual(law.l_prime0(), FIG1.theta, places=12)
        self.assertEqual(law.l(0.0), 0.0)
        self.assertEqual(law.l(law.l_plus), math.inf)

    def test_precheck(self):
        """Test that chi(1) >= 0 is refused by the closed-form helper."""
        params = HestonParams(0.1, 0.04, 0.5, 0.9)
        with self.assertRaises(ParameterError):
            heston_stationary_closed(params)
        self.assertGreater(HestonStationary(params).l_plus, 0.0)


class TestHestonJumpParams(unittest.TestCase):
    """Test the compensated jump cgf of the price jumps."""

    def setUp(self):
        self.params = HestonJumpParams.exponential(FIG1, 0.1, 0.1)

    def test_bounds(self):
        """Test kappa_- = -1 / mean for downward jumps."""
        self.assertAlmostEqual(self.params.kappa_minus, -10.0)
        self.assertEqual(self.params.kappa_plus, math.inf)

    def test_compensation(self):
        """Test kappa~(0) = kappa~(1) = 0 and inf below kappa_-."""
        self.assertEqual(self.params.kappa_tilde(0.0), 0.0)
        self.assertAlmostEqual(self.params.kappa_tilde(1.0), 0.0, places=14)
        self.assertEqual(self.params.kappa_tilde(-11.0), math.inf)
        self.assertGreater(self.params.kappa_tilde(-5.0), 0.0)

    def test_compensated_handle(self):
        """Test the cgf handle of the jumps and its compensated variant."""
        handle = price_jump_cgf(0.1, self.params.marks)
        self.assertEqual(handle.kappa_minus, -10.0)
        for u in (-5.0, 0.5, 3.0):
            expected = 0.1 * (1.0 / (1.0 + 0.1 * u) - 1.0)
            self.assertAlmostEqual(handle.integral(u, 0.0, 0.0), expected)
            self.assertAlmostEqual(
                handle.compensated(u),
                expected - u * 0.1 * (1.0 / 1.1 - 1.0),
                places=14,
            )
        self.assertEqual(handle.compensated(-12.0), math.inf)

    def test_invalid(self):
        """Test the intensity and domain checks."""
        with self.assertRaises(ParameterError):
            HestonJumpParams.exponential(FIG1, -1.0, 0.1)
        with self.assertRaises(ParameterError):
            HestonJumpParams(FIG1, 0.1, PriceExponential(2.0, direction=1))


if __name__ == "__main__":
    unittest.main()
