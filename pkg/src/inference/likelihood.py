"""
Log-likelihood and analytic score of the EWL family and its sub-models.

With u = (βy)^γ, G = 1 - e^(-u), ℓ = log(βy) and z = 1 / (1 - θG^α), the score of one observation is

    ∂/∂α = 1/α + log G + θ G^α log G / (1 - θG^α)
    ∂/∂β = (γ/β) [1 - u + (zα - 1) u / (e^u - 1)]
    ∂/∂γ = 1/γ + ℓ - uℓ + (zα - 1) uℓ / (e^u - 1)
    ∂/∂θ = 1/θ + 1/((1 - θ) log(1 - θ)) + G^α / (1 - θG^α)
"""
import math

import numpy as np
from scipy.special import expit, logit

from src.ewl_core.distribution import log_pdf
from src.ewl_core.exponentiated_weibull import weibull_kernel
from src.ewl_core.params import PARAMETER_NAMES
from src.submodels.evaluation import family_log_pdf
from src.submodels.families import free_parameters, restrict

# Below this θ, 1/θ + 1/((1 - θ) log(1 - θ)) is evaluated from its expansion.
_SMALL_THETA = 1e-4


def validate_data(data):
    """
    :param data: Observed lifetimes.
    :type data: iterable of float
    :return: `data` as a 1-D float array.
    :rtype: numpy.ndarray
    """
    y = np.asarray(data, dtype=float)
    if y.ndim != 1 or len(y) == 0:
        raise ValueError(f"Data must be a non-empty vector of lifetimes, but got shape {y.shape}")
    if not np.all(np.isfinite(y)) or np.any(y <= 0):
        bad = y[~np.isfinite(y) | (y <= 0)]
        raise ValueError(f"Lifetimes must be finite and > 0, but got {bad[:5].tolist()}")
    return y


def to_unconstrained(p, names):
    """log for α, β, γ and logit for θ."""
    return np.array([float(logit(p.get(name))) if name == "theta" else math.log(p.get(name)) for name in names])


def from_unconstrained(eta, names, template):
    values = {}
    for name, value in zip(names, eta):
        values[name] = float(expit(value)) if name == "theta" else math.exp(value)
    return template.with_values(**values)


def loglik(data, p):
    """
    :param data: Observed lifetimes, all > 0.
    :type data: iterable of float
    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :return: l_n(y; p) = Σ log f(y_i).
    :rtype: float
    """
    return float(np.sum(log_pdf(p, validate_data(data))))


def _theta_terms(theta):
    """1/θ + 1/((1 - θ) log(1 - θ))."""
    if theta < _SMALL_THETA:
        return -0.5 - 5 * theta / 12 - 3 * theta ** 2 / 8
    return 1 / theta + 1 / ((1 - theta) * np.log1p(-theta))


def _weibull_score_terms(y, beta, gamma_):
    log_u, u, log_g = weibull_kernel(beta, gamma_, y)
    with np.errstate(over="ignore"):
        u_over_expm1 = np.where(u > 0, u / np.expm1(u), 1.0)
    ell = np.log(beta) + np.log(y)
    return u, log_g, u_over_expm1, ell


def score(data, p):
    """
    :param data: Observed lifetimes, all > 0.
    :type data: iterable of float
    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :return: (∂l/∂α, ∂l/∂β, ∂l/∂γ, ∂l/∂θ).
    :rtype: numpy.ndarray
    """
    y = validate_data(data)
    n = len(y)
    alpha, beta, gamma_, theta = p.alpha, p.beta, p.gamma_, p.theta
    u, log_g, u_over_expm1, ell = _weibull_score_terms(y, beta, gamma_)
    g_alpha = np.exp(alpha * log_g)
    d = -np.expm1(np.log(theta) + alpha * log_g)
    z = 1 / d
    weight = z * alpha - 1

    d_alpha = n / alpha + np.sum(log_g * (1 + theta * g_alpha / d))
    d_beta = (gamma_ / beta) * np.sum(1 - u + weight * u_over_expm1)
    d_gamma = n / gamma_ + np.sum(ell - u * ell + weight * u_over_expm1 * ell)
    d_theta = n * _theta_terms(theta) + np.sum(g_alpha / d)
    return np.array([d_alpha, d_beta, d_gamma, d_theta])


def _ew_score(y, p):
    n = len(y)
    u, log_g, u_over_expm1, ell = _weibull_score_terms(y, p.beta, p.gamma_)
    weight = p.alpha - 1
    return np.array([
        n / p.alpha + np.sum(log_g),
        (p.gamma_ / p.beta) * np.sum(1 - u + weight * u_over_expm1),
        n / p.gamma_ + np.sum(ell - u * ell + weight * u_over_expm1 * ell),
        np.nan
    ])


def family_loglik(data, f, p):
    """
    :return: Log-likelihood of family `f` at `p` (f's fixed coordinates applied first; θ → 0 families use the
             exponentiated Weibull density).
    :rtype: float
    """
    return float(np.sum(family_log_pdf(f, p, validate_data(data))))


def family_score(data, f, p):
    """
    :return: Score of family `f` at `p` with respect to its free parameters, in the order of
             `src.submodels.families.free_parameters(f)`.
    :rtype: numpy.ndarray
    """
    y = validate_data(data)
    q = restrict(p, f)
    full = _ew_score(y, q) if f.theta_limit else score(y, q)
    indices = [PARAMETER_NAMES.index(name) for name in free_parameters(f)]
    return full[indices]
