import math
from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.special import binom

from src.common.errors import NonConvergenceError

_EPSILON = np.finfo(float).eps


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    est_error: float


def _euler_weights(window):
    return binom(window - 1, np.arange(window)) / 2.0 ** (window - 1)


def _alternates_with_shrinking_terms(recent_terms):
    terms = list(recent_terms)
    if abs(terms[-1]) >= abs(terms[0]):
        return False
    return all(a * b < 0 for a, b in zip(terms, terms[1:]))


def _check_significance(total, largest_term, tolerance, terms_used):
    if largest_term * _EPSILON > tolerance:
        raise NonConvergenceError(
            f"Series lost significance: largest term {largest_term:.3e} against a sum of {total:.3e}",
            partial_value=total, terms_used=terms_used
        )


def truncated_sum(term, policy, start=0):
    """
    Sums term(start) + term(start + 1) + ... until the trailing terms stagnate.

    The sum is accepted when the last `policy.stagnation_window` terms are all below
    `policy.rel_tol * |S| + policy.abs_tol`. For series whose trailing terms alternate in sign with shrinking
    magnitude, the partial sums over the window are Euler-averaged, and the series is accepted once two consecutive
    averages agree to the same tolerance.

    Raises NonConvergenceError if `policy.max_terms_per_index` terms are used up first, if a term is not finite, or
    if the largest term is so much bigger than the sum that rounding alone exceeds the tolerance.

    :param term: Function giving the i'th term of the series.
    :type term: callable of int -> float
    :param policy: Truncation rules.
    :type policy: src.special.configuration.SeriesPolicy
    :param start: Index of the first term.
    :type start: int
    :return: The truncated sum, the number of terms used, and an error estimate.
    :rtype: SeriesResult
    """
    window = policy.stagnation_window
    euler_weights = _euler_weights(window)

    recent_terms = deque(maxlen=window)
    recent_sums = deque(maxlen=window)
    total = 0.0
    largest_term = 0.0
    quiet_terms = 0
    previous_average = None

    for terms_used, i in enumerate(range(start, start + policy.max_terms_per_index), start=1):
        value = float(term(i))
        if not math.isfinite(value):
            raise NonConvergenceError(f"Series term {i} is not finite ({value})",
                                      partial_value=total, terms_used=terms_used)

        total += value
        largest_term = max(largest_term, abs(value))
        recent_terms.append(value)
        recent_sums.append(total)

        tolerance = policy.rel_tol * abs(total) + policy.abs_tol
        quiet_terms = quiet_terms + 1 if abs(value) <= tolerance else 0
        if terms_used < window:
            continue

        if quiet_terms >= window and all(abs(v) <= tolerance for v in recent_terms):
            _check_significance(total, largest_term, tolerance, terms_used)
            return SeriesResult(total, terms_used, abs(sum(recent_terms)))

        if _alternates_with_shrinking_terms(recent_terms):
            average = float(np.dot(euler_weights, recent_sums))
            if previous_average is not None and \
                    abs(average - previous_average) <= policy.rel_tol * abs(average) + policy.abs_tol:
                _check_significance(average, largest_term, policy.rel_tol * abs(average) + policy.abs_tol,
                                    terms_used)
                return SeriesResult(average, terms_used, abs(average - previous_average))
            previous_average = average
        else:
            previous_average = None

    raise NonConvergenceError(
        f"Series did not converge within {policy.max_terms_per_index} terms (partial sum {total:.6e})",
        partial_value=total, terms_used=policy.max_terms_per_index
    )
