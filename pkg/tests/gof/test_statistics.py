import math
import unittest

import numpy as np
from numpy.testing import assert_allclose
from scipy import stats

from src.ewl_core.params import EwlParams
from src.ewl_core.sampling import sample_inverse
from src.gof.statistics import (ad_cm_from_uniforms, ad_cm_statistics, ad_correction, anderson_darling,
                                cm_correction, cramer_von_mises, goodness_of_fit, ks_from_uniforms, ks_statistic)
from src.inference.fit_result import FitMethods, FitResult, akaike_information_criterion
from src.submodels.evaluation import family_cdf
from src.submodels.families import EWL, WEIBULL, restrict


class TestKolmogorovSmirnov(unittest.TestCase):
    def test_matches_scipy(self):
        p = EwlParams(2.0, 1.0, 1.5, 0.4)
        data = sample_inverse(p, 250, 8)
        d, p_value = ks_statistic(data, p)
        expected = stats.kstest(data, lambda y: family_cdf(EWL, p, y))
        self.assertAlmostEqual(d, expected.statistic, places=12)
        self.assertAlmostEqual(p_value, stats.kstwobign.sf(math.sqrt(250) * d), places=12)

    def test_single_point(self):
        d, p_value = ks_from_uniforms(np.array([0.25]))
        self.assertAlmostEqual(d, 0.75)
        self.assertTrue(0 <= p_value <= 1)

    def test_limit_family(self):
        p = restrict(EwlParams(1.0, 0.5, 2.0, 0.5), WEIBULL)
        data = sample_inverse(EwlParams(1.0, 0.5, 2.0, 1e-12), 100, 9)
        d, _ = ks_statistic(data, p, WEIBULL)
        expected = stats.kstest(data, stats.weibull_min(2.0, scale=2.0).cdf)
        self.assertAlmostEqual(d, expected.statistic, places=9)


class TestAndersonDarlingCramerVonMises(unittest.TestCase):
    def test_single_point_values(self):
        u = np.array([0.5])
        self.assertAlmostEqual(anderson_darling(u), 2 * math.log(2) - 1, places=14)
        self.assertAlmostEqual(cramer_von_mises(u), 1 / 12, places=14)

    def test_cramer_von_mises_matches_scipy(self):
        p = EwlParams(0.7, 2.0, 1.2, 0.8)
        data = sample_inverse(p, 150, 10)
        u = np.sort(family_cdf(EWL, p, data))
        expected = stats.cramervonmises(data, lambda y: family_cdf(EWL, p, y)).statistic
        self.assertAlmostEqual(cramer_von_mises(u), expected, places=10)

    def test_corrections(self):
        u = np.sort(np.random.default_rng(3).uniform(size=40))
        result = ad_cm_from_uniforms(u)
        self.assertAlmostEqual(result.ad, result.ad_raw * (1 + 0.75 / 40 + 2.25 / 1600), places=12)
        self.assertAlmostEqual(result.cm, result.cm_raw * (1 + 0.5 / 40), places=12)
        self.assertAlmostEqual(ad_correction(40), 1 + 0.75 / 40 + 2.25 / 1600)
        self.assertAlmostEqual(cm_correction(40), 1.0125)
        self.assertTrue(math.isfinite(result.ad_normal))
        self.assertTrue(math.isfinite(result.cm_normal))
        self.assertEqual(set(result.to_dict()), {"ad", "cm", "ad_raw", "cm_raw", "ad_normal", "cm_normal"})

    def test_extreme_probabilities_are_clamped(self):
        u = np.array([0.0, 0.3, 0.6, 1.0])
        result = ad_cm_from_uniforms(u)
        self.assertTrue(math.isfinite(result.ad))
        self.assertTrue(math.isfinite(result.ad_raw))

    def test_poor_models_score_worse(self):
        truth = EwlParams(2.0, 1.0, 1.5, 0.4)
        data = sample_inverse(truth, 300, 11)
        good = ad_cm_statistics(data, truth)
        bad = ad_cm_statistics(data, truth.with_values(beta=2.0))
        self.assertLess(good.ad, bad.ad)
        self.assertLess(good.cm, bad.cm)


class TestGoodnessOfFit(unittest.TestCase):
    def test_report(self):
        p = EwlParams(2.0, 1.0, 1.5, 0.4)
        data = sample_inverse(p, 120, 12)
        loglik = -100.0
        fit = FitResult(EWL, p, None, loglik, akaike_information_criterion(loglik, 4), 120, FitMethods.DIRECT, 10,
                        True, 1e-7, ("alpha", "beta", "gamma", "theta"))
        report = goodness_of_fit(data, fit)
        d, p_value = ks_statistic(data, p)
        self.assertEqual(report.n, 120)
        self.assertEqual(report.aic, 208.0)
        self.assertAlmostEqual(report.ks, d)
        self.assertAlmostEqual(report.ks_pvalue, p_value)
        assert_allclose([report.ad, report.cm], [ad_cm_statistics(data, p).ad, ad_cm_statistics(data, p).cm])
        self.assertEqual(set(report.to_dict()), {"ks", "ks_pvalue", "ad", "cm", "aic", "n", "ad_cm_variants"})


if __name__ == "__main__":
    unittest.main()
