import unittest

import numpy as np
from numpy.testing import assert_allclose

from src.gof.empirical import StepFunction, empirical_scaled_ttt, empirical_survival


class TestEmpiricalScaledTtt(unittest.TestCase):
    def test_small_sample(self):
        ttt = empirical_scaled_ttt([3.0, 1.0, 2.0])
        self.assertEqual(ttt.shape, (3, 2))
        # Sorted 1, 2, 3 with total 6: (1 + 2·1)/6, (3 + 1·2)/6, 6/6.
        assert_allclose(ttt[:, 0], [1 / 3, 2 / 3, 1.0])
        assert_allclose(ttt[:, 1], [0.5, 5 / 6, 1.0])

    def test_exponential_sample_is_close_to_the_diagonal(self):
        data = np.random.default_rng(1).exponential(size=20_000)
        ttt = empirical_scaled_ttt(data)
        self.assertLess(np.max(np.abs(ttt[:, 1] - ttt[:, 0])), 0.03)

    def test_equal_observations(self):
        ttt = empirical_scaled_ttt([2.0, 2.0, 2.0, 2.0])
        assert_allclose(ttt[:, 1], 1.0)

    def test_too_few_observations(self):
        with self.assertRaises(ValueError):
            empirical_scaled_ttt([1.0])


class TestEmpiricalSurvival(unittest.TestCase):
    def test_steps(self):
        survival = empirical_survival([1.0, 2.0, 2.0, 4.0])
        self.assertIsInstance(survival, StepFunction)
        assert_allclose(survival.times, [1.0, 2.0, 4.0])
        assert_allclose(survival.values, [0.75, 0.25, 0.0])
        self.assertEqual(survival(0.5), 1.0)
        self.assertEqual(survival(1.0), 0.75)
        self.assertEqual(survival(3.9), 0.25)
        self.assertEqual(survival(10.0), 0.0)
        assert_allclose(survival(np.array([0.0, 2.0, 5.0])), [1.0, 0.25, 0.0])
        self.assertEqual(survival.to_pairs(), [(1.0, 0.75), (2.0, 0.25), (4.0, 0.0)])

    def test_invalid_data(self):
        with self.assertRaises(ValueError):
            empirical_survival([1.0, -2.0])


if __name__ == "__main__":
    unittest.main()
