import math
import unittest

import numpy as np
from scipy import integrate

from src.ewl_core import distribution
from src.ewl_core.exponentiated_weibull import ew_cdf, ew_pdf, ew_quantile
from src.ewl_core.params import EwlParams

# EWL(1, 1, 1, 0.5): G(y) = 1 - e^(-y), so at y = log 2, G = 1/2.
EXPONENTIAL_MIX = EwlParams(1.0, 1.0, 1.0, 0.5)

PARAMETER_GRID = [
    EwlParams(1.0, 1.0, 1.0, 0.5),
    EwlParams(0.3, 2.0, 0.7, 0.1),
    EwlParams(5.1498, 0.0096, 3.0535, 0.1383),
    EwlParams(20.0, 0.5, 0.4, 0.95),
    EwlParams(2.0, 3.0, 5.0, 0.999),
]


class TestParams(unittest.TestCase):
    def test_domain(self):
        for bad in [(0.0, 1.0, 1.0, 0.5), (1.0, -1.0, 1.0, 0.5), (1.0, 1.0, math.inf, 0.5), (1.0, 1.0, 1.0, 1.0),
                    (1.0, 1.0, 1.0, 1.5), (1.0, 1.0, 1.0, 0.0)]:
            with self.assertRaises(ValueError):
                EwlParams(*bad)

    def test_dict_forms(self):
        p = EwlParams(2.0, 3.0, 4.0, 0.25)
        self.assertEqual(p.to_dict(), {"alpha": 2.0, "beta": 3.0, "gamma": 4.0, "theta": 0.25})
        self.assertEqual(EwlParams.from_dict(p.to_dict()), p)
        self.assertEqual(p.with_values(gamma=1.5).gamma_, 1.5)
        self.assertEqual(p.get("gamma"), 4.0)
        with self.assertRaises(ValueError):
            EwlParams.from_dict({"alpha": 1.0, "beta": 1.0, "theta": 0.5})


class TestEvaluation(unittest.TestCase):
    def test_exponential_mix_oracles(self):
        y = math.log(2)
        self.assertAlmostEqual(distribution.cdf(EXPONENTIAL_MIX, y), math.log(0.75) / math.log(0.5), places=14)
        self.assertAlmostEqual(distribution.cdf(EXPONENTIAL_MIX, y), 0.4150375, places=7)
        self.assertAlmostEqual(distribution.pdf(EXPONENTIAL_MIX, y), 0.480898, places=6)
        self.assertAlmostEqual(distribution.quantile(EXPONENTIAL_MIX, 0.5), 0.8813736, places=7)

    def test_cdf_and_survival_are_complementary(self):
        for p in PARAMETER_GRID:
            y = distribution.quantile(p, np.array([0.001, 0.1, 0.5, 0.9, 0.999]))
            np.testing.assert_allclose(distribution.cdf(p, y) + distribution.survival(p, y), 1.0, rtol=1e-12)
            np.testing.assert_allclose(np.exp(distribution.log_cdf(p, y)), distribution.cdf(p, y), rtol=1e-10)

    def test_quantile_inverts_cdf(self):
        xi = np.array([1e-4, 0.2, 0.5, 0.8, 1 - 1e-6])
        for p in PARAMETER_GRID:
            np.testing.assert_allclose(distribution.cdf(p, distribution.quantile(p, xi)), xi, rtol=1e-8)
            self.assertAlmostEqual(distribution.cdf(p, distribution.quantile(p, 1e-10)), 1e-10, delta=1e-10)

    def test_small_alpha_quantiles_stay_positive(self):
        # G^α reaches small levels only when G itself is far below machine epsilon.
        p = EwlParams(0.1, 1.0, 4.0, 0.5)
        xi = np.array([1e-12, 1e-6, 0.01, 0.3])
        y = distribution.quantile(p, xi)
        self.assertTrue(np.all(y > 0))
        self.assertTrue(np.all(np.diff(y) > 0))
        np.testing.assert_allclose(distribution.cdf(p, y), xi, rtol=1e-8)

    def test_hazard_in_the_far_upper_tail(self):
        # h(y) → γβ^γ y^(γ - 1) once G(y) = 1 to machine precision.
        for p, y in [(EwlParams(1.0, 1.0, 2.0, 0.5), 1e9), (EwlParams(3.0, 0.5, 1.5, 0.9), 1e6),
                     (EwlParams(0.4, 2.0, 0.7, 0.2), 1e12)]:
            expected = p.gamma_ * p.beta ** p.gamma_ * y ** (p.gamma_ - 1)
            self.assertAlmostEqual(distribution.hazard(p, y) / expected, 1.0, delta=1e-9, msg=str(p))

    def test_upper_quantile_in_the_far_tail(self):
        for p in PARAMETER_GRID:
            q = np.array([1e-12, 1e-50])
            np.testing.assert_allclose(distribution.survival(p, distribution.upper_quantile(p, q)), q, rtol=1e-7)

    def test_density_integrates_to_one(self):
        # y = e^s keeps the integrand smooth when the density has a pole at 0.
        for p in PARAMETER_GRID:
            lo, hi = distribution.quantile(p, 1e-12), distribution.upper_quantile(p, 1e-14)
            points = np.log(distribution.quantile(p, np.array([0.01, 0.5, 0.99])))
            total, _ = integrate.quad(lambda s: distribution.pdf(p, math.exp(s)) * math.exp(s), math.log(lo),
                                      math.log(hi), points=points, limit=200)
            self.assertAlmostEqual(total, 1.0, delta=1e-8)

    def test_hazard_is_density_over_survival(self):
        for p in PARAMETER_GRID:
            y = distribution.quantile(p, np.array([0.05, 0.5, 0.95]))
            np.testing.assert_allclose(distribution.hazard(p, y),
                                       distribution.pdf(p, y) / distribution.survival(p, y), rtol=1e-10)
            np.testing.assert_allclose(distribution.reversed_hazard(p, y),
                                       distribution.pdf(p, y) / distribution.cdf(p, y), rtol=1e-10)

    def test_scalars_in_scalars_out(self):
        self.assertIsInstance(distribution.pdf(EXPONENTIAL_MIX, 1.0), float)
        self.assertIsInstance(distribution.quantile(EXPONENTIAL_MIX, 0.3), float)
        self.assertEqual(distribution.pdf(EXPONENTIAL_MIX, np.ones(3)).shape, (3,))

    def test_support(self):
        self.assertEqual(distribution.cdf(EXPONENTIAL_MIX, 0.0), 0.0)
        self.assertEqual(distribution.survival(EXPONENTIAL_MIX, -1.0), 1.0)
        with self.assertRaises(ValueError):
            distribution.pdf(EXPONENTIAL_MIX, 0.0)
        with self.assertRaises(ValueError):
            distribution.quantile(EXPONENTIAL_MIX, 1.0)

    def test_small_theta_approaches_exponentiated_weibull(self):
        p = EwlParams(2.5, 0.7, 1.8, 1e-9)
        y = np.array([0.3, 1.0, 2.5])
        np.testing.assert_allclose(distribution.cdf(p, y), ew_cdf(2.5, 0.7, 1.8, y), rtol=1e-7)
        np.testing.assert_allclose(distribution.pdf(p, y), ew_pdf(2.5, 0.7, 1.8, y), rtol=1e-7)
        np.testing.assert_allclose(ew_cdf(2.5, 0.7, 1.8, ew_quantile(2.5, 0.7, 1.8, np.array([0.1, 0.9]))),
                                   [0.1, 0.9], rtol=1e-12)


class TestLogarithmicLaw(unittest.TestCase):
    def test_sums_to_one(self):
        n = np.arange(1, 2000)
        for theta in [0.01, 0.5, 0.9]:
            self.assertAlmostEqual(float(np.sum(distribution.logarithmic_pmf(theta, n))), 1.0, places=12)

    def test_invalid_arguments(self):
        with self.assertRaises(ValueError):
            distribution.logarithmic_pmf(1.0, 1)
        with self.assertRaises(ValueError):
            distribution.logarithmic_pmf(0.5, 0)


if __name__ == "__main__":
    unittest.main()
