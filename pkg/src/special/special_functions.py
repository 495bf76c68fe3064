import math

import numpy as np
from scipy.special import gammainc, gammaincc, gammaln


def log_gamma(x):
    """
    :param x: Point to evaluate log Γ at. Must be > 0.
    :type x: float
    :return: log Γ(x).
    :rtype: float
    """
    if not x > 0:
        raise ValueError(f"log_gamma is only defined here for x > 0, but got {x}")
    return float(gammaln(x))


def _validate_incomplete_gamma_arguments(s, t):
    if not s > 0:
        raise ValueError(f"Incomplete gamma functions need s > 0, but got s={s}")
    if not t >= 0:
        raise ValueError(f"Incomplete gamma functions need t >= 0, but got t={t}")


def log_upper_incomplete_gamma(s, t):
    """
    :return: log Φ(s;t), where Φ(s;t) = ∫_t^∞ x^(s-1) e^(-x) dx. -inf if Φ underflows.
    :rtype: float
    """
    _validate_incomplete_gamma_arguments(s, t)
    # gammaincc switches between the power series (t < s + 1) and the continued fraction.
    regularized = gammaincc(s, t)
    if regularized == 0:
        return -math.inf
    return float(gammaln(s) + np.log(regularized))


def log_lower_incomplete_gamma(s, t):
    """
    :return: log γ(s;t), where γ(s;t) = ∫_0^t x^(s-1) e^(-x) dx. -inf at t = 0.
    :rtype: float
    """
    _validate_incomplete_gamma_arguments(s, t)
    regularized = gammainc(s, t)
    if regularized == 0:
        return -math.inf
    return float(gammaln(s) + np.log(regularized))


def upper_incomplete_gamma(s, t):
    """
    Upper incomplete gamma function Φ(s;t) = ∫_t^∞ x^(s-1) e^(-x) dx (not regularized).

    :param s: Shape, > 0.
    :type s: float
    :param t: Lower integration limit, >= 0.
    :type t: float
    :rtype: float
    """
    return math.exp(log_upper_incomplete_gamma(s, t))


def lower_incomplete_gamma(s, t):
    """
    Lower incomplete gamma function γ(s;t) = ∫_0^t x^(s-1) e^(-x) dx (not regularized).

    :param s: Shape, > 0.
    :type s: float
    :param t: Upper integration limit, >= 0.
    :type t: float
    :rtype: float
    """
    return math.exp(log_lower_incomplete_gamma(s, t))


def gen_binomial(a, j):
    """
    Generalized binomial coefficient C(a, j) = a (a-1) ... (a-j+1) / j! for real a and integer j >= 0.

    Uses the falling-factorial product so that the result stays finite for every real a, including the
    non-positive integers where the gamma-function form has poles. Integral a is computed exactly.

    :param a: Upper argument.
    :type a: float
    :param j: Lower argument.
    :type j: int
    :rtype: float
    """
    if j < 0:
        raise ValueError(f"gen_binomial needs j >= 0, but got j={j}")
    if float(a).is_integer():
        a = int(a)
        if a >= 0:
            exact = math.comb(a, j)
        else:
            # C(-m, j) = (-1)^j C(m + j - 1, j)
            exact = (-1) ** j * math.comb(-a + j - 1, j)
        try:
            return float(exact)
        except OverflowError:
            return math.copysign(math.inf, exact)

    result = 1.0
    for i in range(j):
        result *= (a - i) / (i + 1)
    return result
