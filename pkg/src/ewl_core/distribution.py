"""
Evaluation functions of the EWL(α, β, γ, θ) law:

    F(y) = log(1 - θ G(y)^α) / log(1 - θ),   G(y) = 1 - exp(-(βy)^γ).

Every function works in log space internally and accepts a scalar or a numpy array of y values.
"""
import numpy as np

from src.ewl_core.exponentiated_weibull import (U_UNDERFLOW, as_array, log_one_minus_g_power, positive_array,
                                                to_output, weibull_kernel, weibull_quantile_from_log_g)

# Below this log value, log(-log1p(-r)) is replaced by its expansion log r + r/2.
_SMALL_LOG_RATIO = -18.0


def _log_neg_log1p_neg(log_r):
    """log(-log(1 - r)) from log r, accurate when r is tiny."""
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.log(-np.log1p(-np.exp(log_r)))
    return np.where(log_r < _SMALL_LOG_RATIO, log_r + 0.5 * np.exp(log_r), direct)


def _log_neg_log_one_minus_theta(p):
    return np.log(-np.log1p(-p.theta))


def log_pdf(p, y):
    """
    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :param y: Point(s) to evaluate at. Must be > 0.
    :type y: float | numpy.ndarray
    :return: log f(y).
    :rtype: float | numpy.ndarray
    """
    y, scalar = positive_array(y, "pdf")
    log_u, u, log_g = weibull_kernel(p.beta, p.gamma_, y)
    log_theta_g_alpha = np.log(p.theta) + p.alpha * log_g
    result = (np.log(p.alpha) + np.log(p.theta) + np.log(p.gamma_) + log_u - np.log(y) - u
              + (p.alpha - 1) * log_g
              - _log_neg_log_one_minus_theta(p)
              - np.log1p(-np.exp(log_theta_g_alpha)))
    return to_output(result, scalar)


def pdf(p, y):
    return to_output(np.exp(log_pdf(p, y)), np.ndim(y) == 0)


def log_cdf(p, y):
    y, scalar = positive_array(y, "log_cdf")
    _, _, log_g = weibull_kernel(p.beta, p.gamma_, y)
    log_theta_g_alpha = np.log(p.theta) + p.alpha * log_g
    result = _log_neg_log1p_neg(log_theta_g_alpha) - _log_neg_log_one_minus_theta(p)
    return to_output(result, scalar)


def cdf(p, y):
    """
    :return: F(y); 0 for y <= 0.
    :rtype: float | numpy.ndarray
    """
    y, scalar = as_array(y)
    result = np.zeros_like(y)
    positive = y > 0
    _, _, log_g = weibull_kernel(p.beta, p.gamma_, y[positive])
    theta_g_alpha = np.exp(np.log(p.theta) + p.alpha * log_g)
    result[positive] = np.log1p(-theta_g_alpha) / np.log1p(-p.theta)
    return to_output(result, scalar)


def log_survival(p, y):
    """
    log S(y), computed as log(log(1 - r) / log(1 - θ)) with r = θ(1 - G^α) / (1 - θG^α) so that the upper tail keeps
    full relative precision.
    """
    y, scalar = positive_array(y, "log_survival")
    _, u, log_g = weibull_kernel(p.beta, p.gamma_, y)
    log_d = log_one_minus_g_power(p.alpha, u, log_g)
    log_r = np.log(p.theta) + log_d - np.log1p(-p.theta * np.exp(p.alpha * log_g))
    result = _log_neg_log1p_neg(log_r) - _log_neg_log_one_minus_theta(p)
    return to_output(result, scalar)


def survival(p, y):
    """
    :return: S(y) = 1 - F(y); 1 for y <= 0.
    :rtype: float | numpy.ndarray
    """
    y, scalar = as_array(y)
    result = np.ones_like(y)
    positive = y > 0
    result[positive] = np.exp(log_survival(p, y[positive]))
    return to_output(result, scalar)


def _log_hazard(p, y):
    # log f and log S both carry a -u term that dominates in the upper tail; it is cancelled before subtracting.
    log_u, u, log_g = weibull_kernel(p.beta, p.gamma_, y)
    g_alpha = np.exp(p.alpha * log_g)
    log_norm = _log_neg_log_one_minus_theta(p)
    log_f_plus_u = (np.log(p.alpha) + np.log(p.theta) + np.log(p.gamma_) + log_u - np.log(y)
                    + (p.alpha - 1) * log_g - log_norm - np.log1p(-p.theta * g_alpha))

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        log_d_plus_u = np.where(u < U_UNDERFLOW, np.log(-np.expm1(p.alpha * log_g)) + u, np.log(p.alpha))
        log_r_plus_u = np.log(p.theta) + log_d_plus_u - np.log1p(-p.theta * g_alpha)
        log_r = log_r_plus_u - u
        log_s_plus_u = np.where(log_r < _SMALL_LOG_RATIO, log_r_plus_u + 0.5 * np.exp(log_r),
                                _log_neg_log1p_neg(log_r) + u) - log_norm
    return log_f_plus_u - log_s_plus_u


def hazard(p, y):
    """
    :return: h(y) = f(y) / S(y), accurate far into the upper tail.
    :rtype: float | numpy.ndarray
    """
    y, scalar = positive_array(y, "hazard")
    with np.errstate(over="ignore"):
        result = np.exp(_log_hazard(p, y))
    return to_output(result, scalar)


def reversed_hazard(p, y):
    """
    :return: r(y) = f(y) / F(y).
    :rtype: float | numpy.ndarray
    """
    y, scalar = positive_array(y, "reversed_hazard")
    with np.errstate(over="ignore"):
        result = np.exp(log_pdf(p, y) - log_cdf(p, y))
    return to_output(result, scalar)


def _validate_probabilities(values, name):
    if np.any(np.isnan(values)) or np.any(values <= 0) or np.any(values >= 1):
        raise ValueError(f"{name} must lie in the open interval (0, 1), but got {values}")


def _quantile_from_log_c(p, log_c):
    # c = G^α
    return weibull_quantile_from_log_g(p.beta, p.gamma_, log_c / p.alpha)


def _lower_log_c(p, xi):
    # c = (1 - (1 - θ)^ξ) / θ
    return np.log(-np.expm1(xi * np.log1p(-p.theta))) - np.log(p.theta)


def _upper_log_c(p, q):
    # c - 1 = (1 - θ)(1 - (1 - θ)^(-q)) / θ for tail probability q = 1 - ξ.
    return np.log1p(-(1 - p.theta) * np.expm1(-q * np.log1p(-p.theta)) / p.theta)


def quantile(p, xi):
    """
    x_ξ = (1/β) [-log(1 - ((1 - (1 - θ)^ξ) / θ)^(1/α))]^(1/γ).

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :param xi: Probability level(s) in (0, 1).
    :type xi: float | numpy.ndarray
    :rtype: float | numpy.ndarray
    """
    xi, scalar = as_array(xi)
    _validate_probabilities(xi, "Quantile levels")
    log_c = np.where(xi <= 0.5, _lower_log_c(p, np.minimum(xi, 0.5)), _upper_log_c(p, 1.0 - np.maximum(xi, 0.5)))
    return to_output(_quantile_from_log_c(p, log_c), scalar)


def upper_quantile(p, q):
    """
    :param q: Tail probability/probabilities in (0, 1).
    :return: y such that S(y) = q, accurate for tiny q.
    :rtype: float | numpy.ndarray
    """
    q, scalar = as_array(q)
    _validate_probabilities(q, "Tail probabilities")
    return to_output(_quantile_from_log_c(p, _upper_log_c(p, q)), scalar)


def logarithmic_pmf(theta, n):
    """
    P(N = n) = θ^n / (-n log(1 - θ)), n = 1, 2, ...
    """
    n, scalar = as_array(n)
    if not (0 < theta < 1):
        raise ValueError(f"The logarithmic law needs theta in (0, 1), but got {theta}")
    if np.any(n < 1):
        raise ValueError(f"The logarithmic law is supported on n >= 1, but got {n}")
    result = np.exp(n * np.log(theta) - np.log(n) - np.log(-np.log1p(-theta)))
    return to_output(result, scalar)
