"""
The exponentiated Weibull (EW) building block, with cdf (1 - exp(-(βy)^γ))^α.

The EWL law is the maximum of a logarithmic number of EW variables, and it tends to EW as θ → 0. All functions take
plain shape/scale arguments so they can serve both roles, and accept scalars or numpy arrays.
"""
import numpy as np

# Above this value of u = (βy)^γ, exp(-u) is below the smallest normal double.
U_UNDERFLOW = 700.0

# Below this value of log G, -log(1 - G) is replaced by its expansion G + G²/2.
_SMALL_LOG_G = -18.0
_LOG_HALF = np.log(0.5)


def as_array(y):
    """
    :return: `y` as a float array, and whether it was a scalar.
    :rtype: (numpy.ndarray, bool)
    """
    arr = np.asarray(y, dtype=float)
    return arr, arr.ndim == 0


def to_output(values, scalar):
    return float(values) if scalar else values


def positive_array(y, operation):
    arr, scalar = as_array(y)
    if np.any(np.isnan(arr)) or np.any(arr <= 0):
        raise ValueError(f"{operation} is only defined for y > 0, but got {y}")
    return arr, scalar


def log_one_minus_exp_neg(u):
    """log(1 - exp(-u)) for u >= 0, accurate at both ends."""
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(u < np.log(2.0), np.log(-np.expm1(-u)), np.log1p(-np.exp(-u)))


def weibull_kernel(beta, gamma_, y):
    """
    :return: (log u, u, log G) where u = (βy)^γ and G = 1 - exp(-u).
    :rtype: (numpy.ndarray, numpy.ndarray, numpy.ndarray)
    """
    # (βy)^γ is formed in log space so extreme γ cannot overflow the intermediate power.
    log_u = gamma_ * (np.log(beta) + np.log(y))
    with np.errstate(over="ignore"):
        u = np.exp(log_u)
    return log_u, u, log_one_minus_exp_neg(u)


def log_u_from_log_g(log_g):
    """log u from log G, where G = 1 - exp(-u). Accurate for G near 0 as well as near 1."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        tiny = log_g + 0.5 * np.exp(log_g)
        small = np.log(-np.log1p(-np.exp(log_g)))
        near_one = np.log(-np.log(-np.expm1(log_g)))
    return np.where(log_g < _SMALL_LOG_G, tiny, np.where(log_g < _LOG_HALF, small, near_one))


def weibull_quantile_from_log_g(beta, gamma_, log_g):
    """
    :return: y with log G(y) = `log_g`, i.e. u^(1/γ) / β, formed in log space so it stays > 0 when G is tiny.
    """
    return np.exp(log_u_from_log_g(log_g) / gamma_ - np.log(beta))


def log_one_minus_g_power(alpha, u, log_g):
    """log(1 - G^α), switching to the tail expansion log α - u once exp(-u) underflows."""
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.log(-np.expm1(alpha * log_g))
    return np.where(u < U_UNDERFLOW, direct, np.log(alpha) - u)


def ew_log_pdf(alpha, beta, gamma_, y):
    y, scalar = positive_array(y, "ew_log_pdf")
    log_u, u, log_g = weibull_kernel(beta, gamma_, y)
    result = np.log(alpha) + np.log(gamma_) + log_u - np.log(y) - u + (alpha - 1) * log_g
    return to_output(result, scalar)


def ew_pdf(alpha, beta, gamma_, y):
    return to_output(np.exp(ew_log_pdf(alpha, beta, gamma_, y)), np.ndim(y) == 0)


def ew_cdf(alpha, beta, gamma_, y):
    y, scalar = as_array(y)
    result = np.zeros_like(y)
    positive = y > 0
    _, _, log_g = weibull_kernel(beta, gamma_, y[positive])
    result[positive] = np.exp(alpha * log_g)
    return to_output(result, scalar)


def ew_log_survival(alpha, beta, gamma_, y):
    y, scalar = positive_array(y, "ew_log_survival")
    _, u, log_g = weibull_kernel(beta, gamma_, y)
    return to_output(log_one_minus_g_power(alpha, u, log_g), scalar)


def ew_quantile(alpha, beta, gamma_, xi):
    """
    Inverts the EW cdf: y = (-log(1 - ξ^(1/α)))^(1/γ) / β.
    """
    xi, scalar = as_array(xi)
    if np.any(np.isnan(xi)) or np.any(xi <= 0) or np.any(xi >= 1):
        raise ValueError(f"Quantile levels must lie in the open interval (0, 1), but got {xi}")
    return to_output(weibull_quantile_from_log_g(beta, gamma_, np.log(xi) / alpha), scalar)
