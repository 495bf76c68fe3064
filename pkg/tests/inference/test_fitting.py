import math
import os
import unittest

import numpy as np
from scipy import stats

from src.common.errors import NestingError
from src.ewl_core.params import EwlParams
from src.ewl_core.sampling import sample_inverse
from src.inference.configuration import THETA_MIN, StartingPoints
from src.inference.fit_result import FitMethods, FitResult, LrTestResult, akaike_information_criterion
from src.inference.fit_stats import FitEvents, FitStats
from src.inference.fitting import fit_family, initial_values, weibull_probability_plot
from src.inference.likelihood import loglik
from src.inference.lr_test import lr_test, lr_test_from_fits
from src.submodels.families import CWL, EW, EWL, GEL, WEIBULL, free_parameters

SLOW_TESTS = os.environ.get("EWLKIT_SLOW_TESTS") == "1"

FEW_STARTS = StartingPoints(alphas=(1.0, 5.0), thetas=(0.5,))


class TestStartingPoints(unittest.TestCase):
    def test_probability_plot_recovers_a_weibull(self):
        data = sample_inverse(EwlParams(1.0, 0.5, 2.0, 1e-12), 5000, 3)
        beta, gamma_ = weibull_probability_plot(data)
        self.assertAlmostEqual(beta, 0.5, delta=0.02)
        self.assertAlmostEqual(gamma_, 2.0, delta=0.1)

    def test_grid_is_restricted_and_matches_the_median(self):
        data = sample_inverse(EwlParams(2.0, 1.0, 1.5, 0.5), 200, 4)
        starts = initial_values(data, CWL)
        self.assertTrue(all(p.alpha == 1.0 for p in starts))
        # α is fixed, so only the probability plot and the three θ values are distinct.
        self.assertEqual(len(starts), 4)
        self.assertEqual(len(initial_values(data, EWL)), 13)
        self.assertEqual(len(initial_values(data, EWL, StartingPoints(include_probability_plot=False))), 12)


class TestFitFamily(unittest.TestCase):
    def setUp(self):
        self.truth = EwlParams(2.0, 1.0, 1.5, 0.6)
        self.data = sample_inverse(self.truth, 400, 21)

    def test_multi_start_fit(self):
        fit_stats = FitStats()
        fit = fit_family(self.data, EWL, starting_points=FEW_STARTS, stats=fit_stats)
        self.assertIsInstance(fit, FitResult)
        self.assertEqual(fit.method, FitMethods.EM_THEN_DIRECT)
        self.assertEqual(fit.n_obs, 400)
        self.assertAlmostEqual(fit.aic, -2 * fit.loglik + 8, places=10)
        self.assertEqual(fit_stats.event_counts[FitEvents.FIT_STARTED], 1)
        # The MLE is at least as likely as the generating point.
        self.assertGreaterEqual(fit.loglik, loglik(self.data, self.truth) - 1e-6)

    def test_methods_reach_the_same_optimum(self):
        direct = fit_family(self.data, EWL, init=self.truth, method=FitMethods.DIRECT)
        hybrid = fit_family(self.data, EWL, init=self.truth, method=FitMethods.EM_THEN_DIRECT)
        self.assertAlmostEqual(direct.loglik, hybrid.loglik, delta=1e-3)

    def test_limit_families_are_fitted_directly(self):
        fit = fit_family(self.data, WEIBULL, starting_points=FEW_STARTS)
        self.assertEqual(fit.method, FitMethods.DIRECT)
        self.assertEqual(fit.free_parameters, ("beta", "gamma"))
        self.assertTrue(fit.params.theta_limit)
        self.assertEqual(fit.to_dict()["params"]["theta"], 0.0)

    def test_nested_fits_are_ordered(self):
        ewl = fit_family(self.data, EWL, starting_points=FEW_STARTS)
        ew = fit_family(self.data, EW, starting_points=FEW_STARTS)
        weibull = fit_family(self.data, WEIBULL, starting_points=FEW_STARTS)
        self.assertGreaterEqual(ew.loglik, weibull.loglik - 1e-6)
        self.assertGreaterEqual(ewl.loglik, ew.loglik - 1e-5)

    def test_direct_fits_report_the_theta_pin(self):
        # Quantiles of log(1 + 5c) / log 6 with c the Weibull cdf: a concave tilt that no θ in (0, 1) can produce,
        # so the likelihood keeps rising as θ → 0.
        xi = (np.arange(1, 301) - 0.5) / 300
        c = np.expm1(xi * math.log(6.0)) / 5.0
        data = (-np.log1p(-c)) ** (1 / 1.5)

        fit_stats = FitStats()
        fit = fit_family(data, EWL, method=FitMethods.DIRECT, starting_points=FEW_STARTS, stats=fit_stats)
        self.assertTrue(fit.on_boundary)
        self.assertFalse(fit.converged)
        self.assertAlmostEqual(fit.params.theta, THETA_MIN, delta=1e-12)
        self.assertEqual(fit_stats.event_counts[FitEvents.FIT_ON_BOUNDARY], 1)
        self.assertTrue(fit.to_dict()["on_boundary"])

    def test_invalid_requests(self):
        with self.assertRaises(ValueError):
            fit_family(self.data, EWL, method="Newton")
        with self.assertRaises(ValueError):
            fit_family(self.data[:4], EWL)


class TestLrTest(unittest.TestCase):
    def test_statistic_is_twice_the_loglik_difference(self):
        data = sample_inverse(EwlParams(2.0, 1.0, 1.5, 0.6), 300, 5)
        null_fit = fit_family(data, EW, starting_points=FEW_STARTS)
        alt_fit = fit_family(data, EWL, starting_points=FEW_STARTS)
        result = lr_test_from_fits(null_fit, alt_fit, data)
        self.assertIsInstance(result, LrTestResult)
        self.assertEqual(result.df, 1)
        if not result.refitted:
            self.assertAlmostEqual(result.statistic, null_fit.minus_two_loglik - alt_fit.minus_two_loglik,
                                   delta=1e-6)
        self.assertAlmostEqual(result.p_value, stats.chi2.sf(result.statistic, 1), places=12)
        self.assertGreaterEqual(result.statistic, 0)

    def test_negative_statistics_are_refitted(self):
        data = sample_inverse(EwlParams(1.0, 1.0, 1.5, 0.3), 200, 6)
        null_fit = fit_family(data, CWL, starting_points=FEW_STARTS)
        poor_loglik = null_fit.loglik - 5.0
        poor_alt = FitResult(EWL, null_fit.params.with_values(alpha=3.0), None, poor_loglik,
                             akaike_information_criterion(poor_loglik, 4), null_fit.n_obs, FitMethods.DIRECT, 0,
                             False, 1.0, tuple(free_parameters(EWL)))

        clamped = lr_test_from_fits(null_fit, poor_alt)
        self.assertFalse(clamped.refitted)
        self.assertEqual(clamped.statistic, 0.0)
        self.assertEqual(clamped.p_value, 1.0)

        fit_stats = FitStats()
        refitted = lr_test_from_fits(null_fit, poor_alt, data, fit_stats)
        self.assertTrue(refitted.refitted)
        self.assertEqual(fit_stats.event_counts[FitEvents.LR_REFIT], 1)
        self.assertGreaterEqual(refitted.statistic, 0)
        self.assertEqual(refitted.to_dict()["null"], str(CWL))

    def test_non_nested_pairs(self):
        with self.assertRaises(NestingError):
            lr_test([1.0, 2.0, 3.0, 4.0, 5.0], CWL, GEL)

    def test_null_p_values_are_uniform(self):
        if not SLOW_TESTS:
            self.skipTest("Set EWLKIT_SLOW_TESTS=1 to simulate the null distribution of the LR statistic")
        truth = EwlParams(1.0, 1.0, 1.5, 0.5)
        p_values = []
        for i in range(200):
            data = sample_inverse(truth, 500, 10_000 + i)
            p_values.append(lr_test(data, CWL, EWL, starting_points=FEW_STARTS).p_value)
        self.assertGreater(stats.kstest(p_values, "uniform").pvalue, 0.01)


if __name__ == "__main__":
    unittest.main()
