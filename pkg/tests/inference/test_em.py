import math
import os
import unittest

import numpy as np

from src.common.errors import InitError
from src.ewl_core.params import EwlParams
from src.ewl_core.sampling import sample_inverse
from src.inference.configuration import THETA_MAX, THETA_MIN, EmConfig
from src.inference.direct import direct_fit
from src.inference.em import _remaining_gain, e_step, em_fit, theta_step, validate_start
from src.inference.fit_result import FitMethods
from src.inference.likelihood import from_unconstrained, to_unconstrained
from src.submodels.families import CEL, CWL, EW, EWL, GEL

SLOW_TESTS = os.environ.get("EWLKIT_SLOW_TESTS") == "1"


def _mean_count(theta):
    return -theta / ((1 - theta) * math.log1p(-theta))


def _simulated_datasets(count, n=500):
    rng = np.random.default_rng(2024)
    datasets = []
    for i in range(count):
        p = EwlParams(float(rng.uniform(0.5, 4)), float(rng.uniform(0.5, 2)), float(rng.uniform(0.8, 3)),
                      float(rng.uniform(0.2, 0.8)))
        datasets.append((p, sample_inverse(p, n, 500 + i)))
    return datasets


class TestEmSteps(unittest.TestCase):
    def test_e_step(self):
        z = e_step([math.log(2), 1e-9, 50.0], EwlParams(1.0, 1.0, 1.0, 0.5))
        self.assertAlmostEqual(z[0], 4 / 3, places=14)
        self.assertAlmostEqual(z[1], 1.0, places=8)
        self.assertAlmostEqual(z[2], 2.0, places=14)
        self.assertTrue(np.all(z >= 1))

    def test_theta_step_inverts_the_mean_count(self):
        cfg = EmConfig()
        for theta in [0.001, 0.3, 0.9, 0.9999]:
            solved, pinned = theta_step(_mean_count(theta), cfg)
            self.assertAlmostEqual(solved, theta, delta=1e-8 * max(theta, 1e-3))
            self.assertFalse(pinned)

    def test_theta_step_pins(self):
        cfg = EmConfig()
        self.assertEqual(theta_step(1.0, cfg), (THETA_MIN, True))
        self.assertEqual(theta_step(1e12, cfg), (THETA_MAX, True))

    def test_remaining_gain(self):
        self.assertEqual(_remaining_gain([1e-3]), math.inf)
        self.assertAlmostEqual(_remaining_gain([1e-3, 9e-4]), 8.1e-3, delta=1e-12)
        self.assertAlmostEqual(_remaining_gain([2.0, 1.0]), 1.0, places=14)
        self.assertEqual(_remaining_gain([1.0, 2.0]), math.inf)
        self.assertEqual(_remaining_gain([1.0, 0.0]), 0.0)

    def test_validate_start(self):
        p = validate_start(EwlParams(3.0, 1.0, 2.0, 0.5), CEL)
        self.assertEqual((p.alpha, p.gamma_), (1.0, 1.0))
        with self.assertRaises(InitError):
            validate_start({"alpha": 1.0}, EWL)
        limit = validate_start(EwlParams(3.0, 1.0, 2.0, 1e-10, True), EWL)
        self.assertEqual(limit.theta, THETA_MIN)
        self.assertFalse(limit.theta_limit)

    def test_unconstrained_coordinates(self):
        p = EwlParams(3.0, 0.2, 2.0, 0.7)
        names = ["alpha", "beta", "gamma", "theta"]
        eta = to_unconstrained(p, names)
        np.testing.assert_allclose(eta, [math.log(3.0), math.log(0.2), math.log(2.0), math.log(0.7 / 0.3)])
        back = from_unconstrained(eta, names, p)
        np.testing.assert_allclose(back.to_vector(), p.to_vector(), rtol=1e-14)


class TestEmFit(unittest.TestCase):
    def test_loglik_never_decreases(self):
        for p, data in _simulated_datasets(50 if SLOW_TESTS else 3):
            start = p.with_values(alpha=p.alpha * 2, beta=p.beta * 0.7, theta=0.5)
            fit = em_fit(data, start, EmConfig(max_iter=300), compute_std_errors=False)
            trace = np.array(fit.loglik_trace)
            self.assertGreater(len(trace), 1)
            np.testing.assert_array_less(-1e-9 * np.maximum(1.0, np.abs(trace[1:])), np.diff(trace) + 1e-300)
            self.assertEqual(fit.method, FitMethods.EM)
            self.assertEqual(fit.loglik, trace[-1])

    def test_em_and_direct_agree(self):
        for p, data in _simulated_datasets(50 if SLOW_TESTS else 3):
            em = em_fit(data, p, compute_std_errors=False)
            direct = direct_fit(data, p, compute_std_errors=False)
            self.assertAlmostEqual(em.loglik, direct.loglik, delta=1e-3, msg=str(p))

    def test_slow_ridges_reach_the_direct_optimum(self):
        p = EwlParams(2.865, 0.821, 1.481, 0.680)
        data = sample_inverse(p, 500, 11)
        em = em_fit(data, p, compute_std_errors=False)
        direct = direct_fit(data, p, compute_std_errors=False)
        self.assertAlmostEqual(em.loglik, direct.loglik, delta=1e-3)

    def test_submodels_keep_their_fixed_coordinates(self):
        data = sample_inverse(EwlParams(1.0, 1.0, 1.0, 0.6), 300, 8)
        for family in [CWL, GEL, CEL]:
            fit = em_fit(data, EwlParams(1.0, 1.0, 1.0, 0.5), family=family, compute_std_errors=False)
            for name, value in family.fixed_values.items():
                self.assertEqual(fit.params.get(name), value)
            self.assertEqual(fit.free_parameters, tuple(n for n in ["alpha", "beta", "gamma", "theta"]
                                                        if n not in family.fixed_values))

    def test_limit_families_are_rejected(self):
        with self.assertRaises(ValueError):
            em_fit([1.0, 2.0, 3.0, 4.0, 5.0], EwlParams(1.0, 1.0, 1.0, 0.5), family=EW)

    def test_too_few_observations(self):
        with self.assertRaises(ValueError):
            em_fit([1.0, 2.0, 3.0], EwlParams(1.0, 1.0, 1.0, 0.5))


if __name__ == "__main__":
    unittest.main()
