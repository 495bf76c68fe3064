import unittest

import numpy as np
from scipy.stats import norm

from src.common.errors import SingularInformationError
from src.ewl_core.params import PARAMETER_NAMES, EwlParams
from src.ewl_core.sampling import sample_inverse
from src.inference.fit_result import FitMethods, FitResult
from src.inference.information import confidence_intervals, inverse_information, observed_information, \
    standard_errors
from src.inference.likelihood import family_loglik, family_score, loglik, score, validate_data
from src.submodels.families import CWL, EW, EWL, GE, WEIBULL, free_parameters


def _central_difference(data, family, p, name, relative_step=1e-6):
    value = p.get(name)
    h = relative_step * value
    up = family_loglik(data, family, p.with_values(**{name: value + h}))
    down = family_loglik(data, family, p.with_values(**{name: value - h}))
    return (up - down) / (2 * h)


def _random_cases(count, seed):
    rng = np.random.default_rng(seed)
    cases = []
    for i in range(count):
        p = EwlParams(float(rng.uniform(0.3, 6)), float(rng.uniform(0.2, 3)), float(rng.uniform(0.5, 4)),
                      float(rng.uniform(0.05, 0.95)))
        data = sample_inverse(p, int(rng.integers(50, 300)), seed * 1000 + i)
        # Score at a point near, not at, the generating parameters.
        q = p.with_values(alpha=p.alpha * 1.1, beta=p.beta * 0.95, gamma=p.gamma_ * 1.05, theta=p.theta * 0.9)
        cases.append((data, q))
    return cases


class TestLikelihood(unittest.TestCase):
    def test_validate_data(self):
        np.testing.assert_array_equal(validate_data([1, 2.5]), [1.0, 2.5])
        for bad in [[], [1.0, -1.0], [1.0, np.nan], [1.0, np.inf], [[1.0, 2.0]]]:
            with self.assertRaises(ValueError):
                validate_data(bad)

    def test_limit_family_loglik_is_the_exponentiated_weibull(self):
        data = [0.5, 1.0, 1.5, 2.0, 4.0]
        p = EwlParams(2.0, 0.7, 1.3, 0.5)
        self.assertAlmostEqual(family_loglik(data, EW, p), loglik(data, p.with_values(theta=1e-12)), delta=1e-9)

    def test_score_matches_finite_differences(self):
        for data, p in _random_cases(20, 1):
            analytic = score(data, p)
            numeric = np.array([_central_difference(data, EWL, p, name) for name in PARAMETER_NAMES])
            np.testing.assert_allclose(analytic, numeric, rtol=1e-5, atol=1e-6 * len(data), err_msg=str(p))

    def test_family_score_matches_finite_differences(self):
        data, p = _random_cases(1, 2)[0]
        for family in [CWL, EW, WEIBULL, GE]:
            analytic = family_score(data, family, p)
            numeric = np.array([_central_difference(data, family, p, name) for name in free_parameters(family)])
            np.testing.assert_allclose(analytic, numeric, rtol=1e-5, atol=1e-6 * len(data), err_msg=str(family))

    def test_small_theta_score(self):
        data, p = _random_cases(1, 3)[0]
        p = p.with_values(theta=1e-6)
        numeric = _central_difference(data, EWL, p, "theta", relative_step=1e-2)
        self.assertAlmostEqual(score(data, p)[3], numeric, delta=1e-4 * len(data))


class TestInformation(unittest.TestCase):
    def test_weibull_information(self):
        p = EwlParams(1.0, 0.5, 2.0, 0.5)
        data = sample_inverse(p.with_values(theta=1e-12), 2000, 11)
        info = observed_information(data, p, WEIBULL)
        self.assertEqual(info.shape, (2, 2))
        np.testing.assert_allclose(info, info.T)
        errors = standard_errors(data, p, WEIBULL)
        self.assertEqual(len(errors), 2)
        self.assertTrue(all(e > 0 for e in errors))

    def test_singular_information(self):
        with self.assertRaises(SingularInformationError):
            inverse_information(np.array([[1.0, 2.0], [2.0, 1.0]]))
        with self.assertRaises(SingularInformationError):
            inverse_information(np.array([[np.nan, 0.0], [0.0, 1.0]]))
        np.testing.assert_allclose(inverse_information(np.diag([4.0, 0.25])), np.diag([0.25, 4.0]))

    def test_confidence_intervals(self):
        fit = FitResult(family=WEIBULL, params=EwlParams(1.0, 2.0, 3.0, 1e-10, True), std_errors=(0.1, 0.2),
                        loglik=-10.0, aic=24.0, n_obs=50, method=FitMethods.DIRECT, iterations=5, converged=True,
                        convergence_gap=0.0, free_parameters=("beta", "gamma"))
        intervals = confidence_intervals(fit, np.diag([100.0, 25.0]), level=0.95)
        z = norm.ppf(0.975)
        np.testing.assert_allclose(intervals, [(2.0 - 0.1 * z, 2.0 + 0.1 * z), (3.0 - 0.2 * z, 3.0 + 0.2 * z)])
        with self.assertRaises(ValueError):
            confidence_intervals(fit, np.diag([100.0, 25.0]), level=1.0)


if __name__ == "__main__":
    unittest.main()
