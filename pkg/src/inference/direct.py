import math

import numpy as np
from core_data_modules.logging import Logger
from scipy import optimize
from scipy.special import logit

from src.common.errors import InitError
from src.inference.configuration import MIN_OBSERVATIONS, THETA_MAX, THETA_MIN, DirectConfig
from src.inference.em import validate_start
from src.inference.fit_result import FitMethods, FitResult, akaike_information_criterion
from src.inference.information import standard_errors_or_none
from src.inference.likelihood import (family_loglik, family_score, from_unconstrained, to_unconstrained,
                                     validate_data)
from src.submodels.families import EWL, free_parameters

log = Logger(__name__)

# Objective value reported where the parameters overflow or the log-likelihood is not finite.
_PENALTY = 1e100


def _jacobian(p, names):
    """d(parameter)/d(unconstrained coordinate)."""
    return np.array([p.theta * (1 - p.theta) if name == "theta" else p.get(name) for name in names])


def _on_theta_pin(p, names):
    return "theta" in names and (p.theta <= THETA_MIN * (1 + 1e-6) or p.theta >= THETA_MAX - 1e-12)


def direct_fit(data, init, config=None, family=EWL, stats=None, compute_std_errors=True):
    """
    Maximises the log-likelihood of `family` with L-BFGS-B and the analytic score, on the unconstrained scale
    (log α, log β, log γ, logit θ). Only logit θ is bounded, by the θ pins.

    :param data: Observed lifetimes, at least 5.
    :type data: iterable of float
    :param init: Starting point.
    :type init: src.ewl_core.params.EwlParams
    :param config: Iteration cap and gradient tolerance.
    :type config: src.inference.configuration.DirectConfig | None
    :param family: Family to fit.
    :type family: src.submodels.families.FamilyId
    :param stats: Unused; accepted so every fitter has the same signature.
    :type stats: src.inference.fit_stats.FitStats | None
    :param compute_std_errors: Whether to compute standard errors from the observed information.
    :type compute_std_errors: bool
    :rtype: src.inference.fit_result.FitResult
    """
    if config is None:
        config = DirectConfig()
    y = validate_data(data)
    n = len(y)
    if n < MIN_OBSERVATIONS:
        raise ValueError(f"Fitting needs at least {MIN_OBSERVATIONS} observations, but got {n}")
    start = validate_start(init, family)
    names = free_parameters(family)

    def objective(eta):
        try:
            p = from_unconstrained(eta, names, start)
            value = family_loglik(y, family, p)
            gradient = family_score(y, family, p) * _jacobian(p, names)
        except (ValueError, OverflowError):
            return _PENALTY, np.zeros(len(names))
        if not (math.isfinite(value) and np.all(np.isfinite(gradient))):
            return _PENALTY, np.zeros(len(names))
        return -value, -gradient

    x0 = to_unconstrained(start, names)
    if objective(x0)[0] == _PENALTY:
        raise InitError(f"The log-likelihood is not finite at the starting point {start}")

    bounds = [(float(logit(THETA_MIN)), float(logit(THETA_MAX))) if name == "theta" else (None, None)
              for name in names]
    result = optimize.minimize(objective, x0, jac=True, method="L-BFGS-B", bounds=bounds,
                               options={"maxiter": config.max_iter, "ftol": 1e-15, "gtol": 1e-10})

    p = from_unconstrained(result.x, names, start)
    loglik_value = family_loglik(y, family, p)
    on_boundary = _on_theta_pin(p, names)
    gradient = family_score(y, family, p) * _jacobian(p, names)
    interior = [i for i, name in enumerate(names) if not (name == "theta" and on_boundary)]
    gap = float(np.max(np.abs(gradient[interior])) / n) if len(interior) > 0 else 0.0
    converged = gap <= config.gradient_tol and not on_boundary
    log.debug(f"L-BFGS-B on {family}: {result.message}, loglik={loglik_value}, gap={gap}")
    if on_boundary:
        log.warning(f"Direct fit of {family} ended with theta on its pin ({p.theta})")
    elif not converged:
        log.debug(f"Direct fit of {family} stopped with scaled score {gap} above {config.gradient_tol}")

    return FitResult(
        family=family,
        params=p,
        std_errors=standard_errors_or_none(y, p, family) if compute_std_errors else None,
        loglik=loglik_value,
        aic=akaike_information_criterion(loglik_value, len(names)),
        n_obs=n,
        method=FitMethods.DIRECT,
        iterations=int(result.nit),
        converged=converged,
        convergence_gap=gap,
        free_parameters=tuple(names),
        on_boundary=on_boundary
    )
