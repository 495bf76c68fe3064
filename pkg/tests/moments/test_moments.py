import itertools
import math
import unittest
from unittest import mock

from src.common.errors import NonConvergenceError
from src.ewl_core.distribution import quantile
from src.ewl_core.params import EwlParams
from src.moments import moments as moments_module
from src.moments.kernel import KernelTails
from src.moments.moment_result import MomentMethods, MomentResult
from src.moments.moments import mean_and_variance, mgf, mgf_quadrature, partial_moment, partial_moment_quadrature, \
    raw_moment, raw_moment_quadrature
from src.moments.series_stats import SeriesEvents, SeriesStats

EXPONENTIAL_MIX = EwlParams(1.0, 1.0, 1.0, 0.5)

# alpha x gamma x theta at beta = 1.5
MOMENT_GRID = [EwlParams(alpha, 1.5, gamma_, theta)
               for alpha, gamma_, theta in itertools.product([0.5, 2.0, 10.0], [0.8, 2.0], [0.3, 0.9])]


class TestRawMoments(unittest.TestCase):
    def test_mean_of_the_exponential_mix(self):
        # E[max of N unit exponentials] = Σ P(N = n) H_n = π² / (12 log 2) at θ = 1/2.
        result = raw_moment(EXPONENTIAL_MIX, 1)
        self.assertAlmostEqual(result.value, 1.18657, places=5)
        self.assertAlmostEqual(result.value, math.pi ** 2 / (12 * math.log(2)), delta=1e-10)
        self.assertEqual(result.method, MomentMethods.SERIES)

    def test_series_agrees_with_quadrature(self):
        for p in MOMENT_GRID:
            for k in [1, 2, 3]:
                series = raw_moment(p, k).value
                oracle = raw_moment_quadrature(p, k).value
                self.assertAlmostEqual(series / oracle, 1.0, delta=1e-6, msg=f"{p}, k={k}")

    def test_invalid_orders(self):
        for k in [0, 1.5, -2]:
            with self.assertRaises(ValueError):
                raw_moment(EXPONENTIAL_MIX, k)

    def test_mean_and_variance(self):
        p = EwlParams(2.0, 1.0, 1.5, 0.5)
        mean, variance = mean_and_variance(p)
        second = raw_moment_quadrature(p, 2).value
        self.assertAlmostEqual(mean, raw_moment_quadrature(p, 1).value, delta=1e-9)
        self.assertAlmostEqual(variance, second - mean ** 2, delta=1e-8)
        self.assertGreater(variance, 0)

    def test_stats_record_series_use(self):
        stats = SeriesStats()
        raw_moment(EXPONENTIAL_MIX, 2, stats=stats)
        self.assertEqual(stats.event_counts[SeriesEvents.SERIES_CONVERGED], 1)
        self.assertEqual(stats.event_counts[SeriesEvents.SERIES_FELL_BACK_TO_QUADRATURE], 0)


class TestPartialMoments(unittest.TestCase):
    def test_upper_and_lower_add_up(self):
        for p in MOMENT_GRID[:6]:
            y = float(quantile(p, 0.4))
            for i in [1, 2]:
                upper = partial_moment(p, i, y, KernelTails.UPPER).value
                lower = partial_moment(p, i, y, KernelTails.LOWER).value
                self.assertAlmostEqual((upper + lower) / raw_moment(p, i).value, 1.0, delta=1e-8, msg=f"{p}")

    def test_series_agrees_with_quadrature(self):
        p = EwlParams(3.0, 2.0, 2.5, 0.7)
        for xi, tail in itertools.product([0.1, 0.5, 0.9], [KernelTails.UPPER, KernelTails.LOWER]):
            y = float(quantile(p, xi))
            series = partial_moment(p, 1, y, tail).value
            oracle = partial_moment_quadrature(p, 1, y, tail).value
            self.assertAlmostEqual(series / oracle, 1.0, delta=1e-8, msg=f"xi={xi}, {tail}")


class TestMgf(unittest.TestCase):
    def test_light_tail(self):
        p = EwlParams(2.0, 1.0, 2.0, 0.5)
        for t in [-1.0, 0.5, 2.0]:
            self.assertAlmostEqual(mgf(p, t) / mgf_quadrature(p, t), 1.0, delta=1e-8)
        self.assertEqual(mgf(p, 0.0), 1.0)

    def test_exponential_tail_inside_its_radius(self):
        self.assertAlmostEqual(mgf(EXPONENTIAL_MIX, 0.3) / mgf_quadrature(EXPONENTIAL_MIX, 0.3), 1.0, delta=1e-8)

    def test_underflowing_moments_add_nothing(self):
        def unit_mean_only(p, k, policy=None, stats=None):
            return MomentResult(1.0 if k == 1 else 0.0, MomentMethods.SERIES, 1, 0.0)

        with mock.patch.object(moments_module, "raw_moment", side_effect=unit_mean_only):
            self.assertAlmostEqual(mgf(EwlParams(2.0, 1.0, 2.0, 0.5), 0.5), 1.5, places=14)

    def test_outside_the_radius(self):
        with self.assertRaises(NonConvergenceError):
            mgf(EXPONENTIAL_MIX, 1.0)
        with self.assertRaises(NonConvergenceError):
            mgf(EwlParams(1.0, 1.0, 0.7, 0.5), 0.1)


if __name__ == "__main__":
    unittest.main()
