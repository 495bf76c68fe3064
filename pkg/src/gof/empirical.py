from dataclasses import dataclass

import numpy as np
from core_data_modules.logging import Logger

from src.inference.likelihood import validate_data

log = Logger(__name__)


def empirical_scaled_ttt(data):
    """
    Empirical scaled total time on test transform: the points (i/n, T_i) with

        T_i = [Σ_{j<=i} y_(j) + (n - i) y_(i)] / Σ_j y_(j),

    so T_n = 1. A concave curve above the diagonal indicates an increasing hazard, a convex one below it a
    decreasing hazard.

    :param data: Observed lifetimes, at least 2.
    :type data: iterable of float
    :return: Array of shape (n, 2) holding (i/n, T_i).
    :rtype: numpy.ndarray
    """
    y = np.sort(validate_data(data))
    n = len(y)
    if n < 2:
        raise ValueError(f"The empirical TTT transform needs at least 2 observations, but got {n}")
    if y[0] == y[-1]:
        log.warning(f"All {n} observations are equal; the empirical TTT transform is flat at 1")

    i = np.arange(1, n + 1)
    ttt = (np.cumsum(y) + (n - i) * y) / np.sum(y)
    return np.column_stack([i / n, ttt])


@dataclass(frozen=True, eq=False)
class StepFunction:
    """
    A right-continuous step function that is 1 before `times[0]` and `values[k]` on [times[k], times[k+1]).

    :param times: Jump points, strictly increasing.
    :type times: numpy.ndarray
    :param values: Value from each jump point on.
    :type values: numpy.ndarray
    """
    times: np.ndarray
    values: np.ndarray

    def __call__(self, t):
        idx = np.searchsorted(self.times, t, side="right")
        result = np.where(idx == 0, 1.0, self.values[np.maximum(idx - 1, 0)])
        return float(result) if np.ndim(t) == 0 else result

    def to_pairs(self):
        return list(zip(self.times.tolist(), self.values.tolist()))


def empirical_survival(data):
    """
    Empirical survival S_n(t) = #{y_i > t} / n, which is the Kaplan-Meier estimate when nothing is censored.

    :param data: Observed lifetimes (complete, uncensored).
    :type data: iterable of float
    :rtype: StepFunction
    """
    y = np.sort(validate_data(data))
    n = len(y)
    times, counts = np.unique(y, return_counts=True)
    at_risk_after = n - np.cumsum(counts)
    return StepFunction(times, at_risk_after / n)
